#include "alphaseq/autodiff.hpp"

#include <cmath>
#include <cstring>
#include <memory>

namespace alphaseq::ad {

namespace {

constexpr double kLnEps   = 1e-6;
constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

void matmul_acc(const double* a, const double* b, double* out, int r, int k, int c,
                bool transpose_a, bool transpose_b) {
    // out(r,c) += opA(a) * opB(b)
    for (int i = 0; i < r; ++i) {
        for (int j = 0; j < c; ++j) {
            double acc = 0.0;
            for (int t = 0; t < k; ++t) {
                const double av = transpose_a ? a[t * r + i] : a[i * k + t];
                const double bv = transpose_b ? b[j * k + t] : b[t * c + j];
                acc += av * bv;
            }
            out[i * c + j] += acc;
        }
    }
}

}  // namespace

double pairwise_sum(const double* data, size_t n) {
    if (n == 0) return 0.0;
    if (n == 1) return data[0];
    const size_t mid = n / 2;
    return pairwise_sum(data, mid) + pairwise_sum(data + mid, n - mid);
}

Tape::Id Tape::push(int rows, int cols) {
    Node node;
    node.rows = rows;
    node.cols = cols;
    node.val.resize(static_cast<size_t>(rows) * cols, 0.0);
    node.grad.resize(static_cast<size_t>(rows) * cols, 0.0);
    nodes_.push_back(std::move(node));
    return static_cast<Id>(nodes_.size() - 1);
}

Tape::Id Tape::leaf(int rows, int cols, const double* data) {
    const Id id = push(rows, cols);
    std::memcpy(nodes_[id].val.data(), data, static_cast<size_t>(rows) * cols * sizeof(double));
    return id;
}

Tape::Id Tape::leaf(int rows, int cols, const std::vector<double>& data) {
    if (data.size() != static_cast<size_t>(rows) * cols) {
        throw ShapeError("Tape::leaf: data size does not match shape");
    }
    return leaf(rows, cols, data.data());
}

Tape::Id Tape::matmul(Id a, Id b) {
    const int r = nodes_[a].rows, k = nodes_[a].cols, c = nodes_[b].cols;
    if (nodes_[b].rows != k) {
        throw ShapeError("Tape::matmul: inner dimensions differ");
    }
    const Id id = push(r, c);
    matmul_acc(nodes_[a].val.data(), nodes_[b].val.data(), nodes_[id].val.data(), r, k, c, false, false);
    nodes_[id].back = [this, a, b, id, r, k, c] {
        // dA += dOut * B^T ; dB += A^T * dOut
        matmul_acc(nodes_[id].grad.data(), nodes_[b].val.data(), nodes_[a].grad.data(), r, c, k,
                   false, true);
        matmul_acc(nodes_[a].val.data(), nodes_[id].grad.data(), nodes_[b].grad.data(), k, r, c,
                   true, false);
    };
    return id;
}

Tape::Id Tape::add(Id a, Id b) {
    if (nodes_[a].rows != nodes_[b].rows || nodes_[a].cols != nodes_[b].cols) {
        throw ShapeError("Tape::add: shape mismatch");
    }
    const Id id = push(nodes_[a].rows, nodes_[a].cols);
    for (size_t i = 0; i < nodes_[id].val.size(); ++i) {
        nodes_[id].val[i] = nodes_[a].val[i] + nodes_[b].val[i];
    }
    nodes_[id].back = [this, a, b, id] {
        for (size_t i = 0; i < nodes_[id].grad.size(); ++i) {
            nodes_[a].grad[i] += nodes_[id].grad[i];
            nodes_[b].grad[i] += nodes_[id].grad[i];
        }
    };
    return id;
}

Tape::Id Tape::axpy(Id a, Id b, double alpha) {
    if (nodes_[a].rows != nodes_[b].rows || nodes_[a].cols != nodes_[b].cols) {
        throw ShapeError("Tape::axpy: shape mismatch");
    }
    const Id id = push(nodes_[a].rows, nodes_[a].cols);
    for (size_t i = 0; i < nodes_[id].val.size(); ++i) {
        nodes_[id].val[i] = nodes_[a].val[i] + alpha * nodes_[b].val[i];
    }
    nodes_[id].back = [this, a, b, id, alpha] {
        for (size_t i = 0; i < nodes_[id].grad.size(); ++i) {
            nodes_[a].grad[i] += nodes_[id].grad[i];
            nodes_[b].grad[i] += alpha * nodes_[id].grad[i];
        }
    };
    return id;
}

Tape::Id Tape::add_rowvec(Id a, Id v) {
    const int r = nodes_[a].rows, c = nodes_[a].cols;
    if (nodes_[v].rows * nodes_[v].cols != c) {
        throw ShapeError("Tape::add_rowvec: vector length must equal column count");
    }
    const Id id = push(r, c);
    for (int i = 0; i < r; ++i) {
        for (int j = 0; j < c; ++j) {
            nodes_[id].val[i * c + j] = nodes_[a].val[i * c + j] + nodes_[v].val[j];
        }
    }
    nodes_[id].back = [this, a, v, id, r, c] {
        for (int i = 0; i < r; ++i) {
            for (int j = 0; j < c; ++j) {
                nodes_[a].grad[i * c + j] += nodes_[id].grad[i * c + j];
                nodes_[v].grad[j] += nodes_[id].grad[i * c + j];
            }
        }
    };
    return id;
}

Tape::Id Tape::gelu(Id a) {
    const Id id = push(nodes_[a].rows, nodes_[a].cols);
    for (size_t i = 0; i < nodes_[id].val.size(); ++i) {
        const double x = nodes_[a].val[i];
        nodes_[id].val[i] = x * 0.5 * (1.0 + std::erf(x * kInvSqrt2));
    }
    nodes_[id].back = [this, a, id] {
        for (size_t i = 0; i < nodes_[id].grad.size(); ++i) {
            const double x   = nodes_[a].val[i];
            const double cdf = 0.5 * (1.0 + std::erf(x * kInvSqrt2));
            const double pdf = kInvSqrt2Pi * std::exp(-0.5 * x * x);
            nodes_[a].grad[i] += nodes_[id].grad[i] * (cdf + x * pdf);
        }
    };
    return id;
}

Tape::Id Tape::layernorm(Id a, Id gamma, Id beta) {
    const int r = nodes_[a].rows, c = nodes_[a].cols;
    if (nodes_[gamma].rows * nodes_[gamma].cols != c || nodes_[beta].rows * nodes_[beta].cols != c) {
        throw ShapeError("Tape::layernorm: affine parameter length must equal column count");
    }
    const Id id = push(r, c);
    auto xhat    = std::make_shared<std::vector<double>>(static_cast<size_t>(r) * c);
    auto inv_std = std::make_shared<std::vector<double>>(r);
    for (int i = 0; i < r; ++i) {
        double mean = 0.0;
        for (int j = 0; j < c; ++j) mean += nodes_[a].val[i * c + j];
        mean /= c;
        double var = 0.0;
        for (int j = 0; j < c; ++j) {
            const double d = nodes_[a].val[i * c + j] - mean;
            var += d * d;
        }
        var /= c;
        const double is = 1.0 / std::sqrt(var + kLnEps);
        (*inv_std)[i] = is;
        for (int j = 0; j < c; ++j) {
            const double xh = (nodes_[a].val[i * c + j] - mean) * is;
            (*xhat)[i * c + j] = xh;
            nodes_[id].val[i * c + j] = xh * nodes_[gamma].val[j] + nodes_[beta].val[j];
        }
    }
    nodes_[id].back = [this, a, gamma, beta, id, r, c, xhat, inv_std] {
        for (int i = 0; i < r; ++i) {
            double sum_dxh = 0.0, sum_dxh_xh = 0.0;
            for (int j = 0; j < c; ++j) {
                const double dy  = nodes_[id].grad[i * c + j];
                const double xh  = (*xhat)[i * c + j];
                const double dxh = dy * nodes_[gamma].val[j];
                nodes_[gamma].grad[j] += dy * xh;
                nodes_[beta].grad[j] += dy;
                sum_dxh += dxh;
                sum_dxh_xh += dxh * xh;
            }
            const double inv_c = 1.0 / c;
            for (int j = 0; j < c; ++j) {
                const double dxh = nodes_[id].grad[i * c + j] * nodes_[gamma].val[j];
                nodes_[a].grad[i * c + j] +=
                    (*inv_std)[i] * (dxh - inv_c * sum_dxh - (*xhat)[i * c + j] * inv_c * sum_dxh_xh);
            }
        }
    };
    return id;
}

Tape::Id Tape::concat_rows(const std::vector<Id>& parts) {
    if (parts.empty()) {
        throw ShapeError("Tape::concat_rows: empty part list");
    }
    const int c = nodes_[parts[0]].cols;
    int r = 0;
    for (Id p : parts) {
        if (nodes_[p].cols != c) {
            throw ShapeError("Tape::concat_rows: column counts differ");
        }
        r += nodes_[p].rows;
    }
    const Id id = push(r, c);
    size_t off = 0;
    for (Id p : parts) {
        std::memcpy(nodes_[id].val.data() + off, nodes_[p].val.data(),
                    nodes_[p].val.size() * sizeof(double));
        off += nodes_[p].val.size();
    }
    nodes_[id].back = [this, parts, id] {
        size_t pos = 0;
        for (Id p : parts) {
            for (size_t i = 0; i < nodes_[p].grad.size(); ++i) {
                nodes_[p].grad[i] += nodes_[id].grad[pos + i];
            }
            pos += nodes_[p].grad.size();
        }
    };
    return id;
}

Tape::Id Tape::slice_rows(Id a, int start, int count) {
    const int c = nodes_[a].cols;
    if (start < 0 || count < 0 || start + count > nodes_[a].rows) {
        throw ShapeError("Tape::slice_rows: range out of bounds");
    }
    const Id id = push(count, c);
    std::memcpy(nodes_[id].val.data(), nodes_[a].val.data() + static_cast<size_t>(start) * c,
                static_cast<size_t>(count) * c * sizeof(double));
    nodes_[id].back = [this, a, id, start, count, c] {
        for (size_t i = 0; i < static_cast<size_t>(count) * c; ++i) {
            nodes_[a].grad[static_cast<size_t>(start) * c + i] += nodes_[id].grad[i];
        }
    };
    return id;
}

Tape::Id Tape::attention(Id q, Id k, Id v, int heads, const RotationAngles& rot) {
    const int L = nodes_[q].rows;
    const int e = nodes_[q].cols;
    if (nodes_[k].rows != L || nodes_[v].rows != L || nodes_[k].cols != e || nodes_[v].cols != e) {
        throw ShapeError("Tape::attention: q/k/v shape mismatch");
    }
    if (heads < 1 || e % heads != 0) {
        throw ShapeError("Tape::attention: embed dim not divisible by head count");
    }
    const int hd = e / heads;
    if (rot.tokens != L || rot.half != hd / 2) {
        throw ShapeError("Tape::attention: rotation table does not match sequence/head dims");
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(hd));

    const Id id = push(L, e);

    // cached per-head rotated projections and attention weights
    auto qr = std::make_shared<std::vector<double>>(static_cast<size_t>(L) * e);
    auto kr = std::make_shared<std::vector<double>>(static_cast<size_t>(L) * e);
    auto aw = std::make_shared<std::vector<double>>(static_cast<size_t>(heads) * L * L);

    auto rotate_fwd = [&](const double* src, double* dst) {
        for (int i = 0; i < L; ++i) {
            for (int h = 0; h < heads; ++h) {
                const double* s = src + i * e + h * hd;
                double* d       = dst + i * e + h * hd;
                for (int p = 0; p < hd / 2; ++p) {
                    const double cs = rot.cosv[static_cast<size_t>(i) * rot.half + p];
                    const double sn = rot.sinv[static_cast<size_t>(i) * rot.half + p];
                    d[2 * p]     = s[2 * p] * cs - s[2 * p + 1] * sn;
                    d[2 * p + 1] = s[2 * p] * sn + s[2 * p + 1] * cs;
                }
            }
        }
    };
    rotate_fwd(nodes_[q].val.data(), qr->data());
    rotate_fwd(nodes_[k].val.data(), kr->data());

    std::vector<double> scores(L);
    for (int h = 0; h < heads; ++h) {
        for (int i = 0; i < L; ++i) {
            double maxs = -1e300;
            for (int j = 0; j < L; ++j) {
                double acc = 0.0;
                for (int t = 0; t < hd; ++t) {
                    acc += (*qr)[i * e + h * hd + t] * (*kr)[j * e + h * hd + t];
                }
                scores[j] = acc * scale;
                maxs = std::max(maxs, scores[j]);
            }
            double denom = 0.0;
            for (int j = 0; j < L; ++j) {
                scores[j] = std::exp(scores[j] - maxs);
                denom += scores[j];
            }
            double* arow = aw->data() + (static_cast<size_t>(h) * L + i) * L;
            for (int j = 0; j < L; ++j) {
                arow[j] = scores[j] / denom;
            }
            for (int t = 0; t < hd; ++t) {
                double acc = 0.0;
                for (int j = 0; j < L; ++j) {
                    acc += arow[j] * nodes_[v].val[j * e + h * hd + t];
                }
                nodes_[id].val[i * e + h * hd + t] = acc;
            }
        }
    }

    nodes_[id].back = [this, q, k, v, id, heads, hd, L, e, scale, qr, kr, aw, rot] {
        std::vector<double> dqr(static_cast<size_t>(L) * e, 0.0);
        std::vector<double> dkr(static_cast<size_t>(L) * e, 0.0);
        std::vector<double> da(L), ds(L);
        for (int h = 0; h < heads; ++h) {
            for (int i = 0; i < L; ++i) {
                const double* arow = aw->data() + (static_cast<size_t>(h) * L + i) * L;
                const double* go   = nodes_[id].grad.data() + i * e + h * hd;
                // dV and dA
                double dot = 0.0;
                for (int j = 0; j < L; ++j) {
                    double acc = 0.0;
                    for (int t = 0; t < hd; ++t) {
                        acc += go[t] * nodes_[v].val[j * e + h * hd + t];
                        nodes_[v].grad[j * e + h * hd + t] += arow[j] * go[t];
                    }
                    da[j] = acc;
                    dot += acc * arow[j];
                }
                // softmax jacobian
                for (int j = 0; j < L; ++j) {
                    ds[j] = arow[j] * (da[j] - dot) * scale;
                }
                for (int j = 0; j < L; ++j) {
                    for (int t = 0; t < hd; ++t) {
                        dqr[i * e + h * hd + t] += ds[j] * (*kr)[j * e + h * hd + t];
                        dkr[j * e + h * hd + t] += ds[j] * (*qr)[i * e + h * hd + t];
                    }
                }
            }
        }
        // rotate gradients back (inverse rotation = transpose)
        auto rotate_bwd = [&](const double* dsrc, double* dacc) {
            for (int i = 0; i < L; ++i) {
                for (int h = 0; h < heads; ++h) {
                    const double* s = dsrc + i * e + h * hd;
                    double* d       = dacc + i * e + h * hd;
                    for (int p = 0; p < hd / 2; ++p) {
                        const double cs = rot.cosv[static_cast<size_t>(i) * rot.half + p];
                        const double sn = rot.sinv[static_cast<size_t>(i) * rot.half + p];
                        d[2 * p]     += s[2 * p] * cs + s[2 * p + 1] * sn;
                        d[2 * p + 1] += -s[2 * p] * sn + s[2 * p + 1] * cs;
                    }
                }
            }
        };
        rotate_bwd(dqr.data(), nodes_[q].grad.data());
        rotate_bwd(dkr.data(), nodes_[k].grad.data());
    };
    return id;
}

Tape::Id Tape::seq_loss(Id pred, const std::vector<double>& target, const std::vector<int>& bounds) {
    const int r = nodes_[pred].rows, c = nodes_[pred].cols;
    if (target.size() != static_cast<size_t>(r) * c) {
        throw ShapeError("Tape::seq_loss: target size mismatch");
    }
    if (bounds.size() < 2 || bounds.front() != 0 || bounds.back() != r) {
        throw ShapeError("Tape::seq_loss: image bounds must cover all prediction rows");
    }
    const size_t m = bounds.size() - 1;
    std::vector<double> per_image(m);
    for (size_t img = 0; img < m; ++img) {
        double acc = 0.0;
        for (int i = bounds[img]; i < bounds[img + 1]; ++i) {
            for (int j = 0; j < c; ++j) {
                const double d = target[static_cast<size_t>(i) * c + j] - nodes_[pred].val[i * c + j];
                acc += d * d;
            }
        }
        per_image[img] = acc;
    }
    const double loss = pairwise_sum(per_image.data(), m) / static_cast<double>(m);

    const Id id = push(1, 1);
    nodes_[id].val[0] = loss;
    auto tgt = std::make_shared<std::vector<double>>(target);
    nodes_[id].back = [this, pred, id, tgt, r, c, m] {
        const double g = nodes_[id].grad[0] * 2.0 / static_cast<double>(m);
        for (size_t i = 0; i < static_cast<size_t>(r) * c; ++i) {
            nodes_[pred].grad[i] += g * (nodes_[pred].val[i] - (*tgt)[i]);
        }
    };
    return id;
}

void Tape::backward(Id loss) {
    if (nodes_[loss].val.size() != 1) {
        throw ShapeError("Tape::backward: loss must be scalar");
    }
    nodes_[loss].grad[0] = 1.0;
    for (Id id = loss; id >= 0; --id) {
        if (nodes_[id].back) nodes_[id].back();
    }
}

}  // namespace alphaseq::ad
