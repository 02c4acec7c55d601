#include "alphaseq/dit.hpp"

#include <cmath>
#include <cstring>

#include "alphaseq/rng.hpp"

namespace alphaseq {

void ModelConfig::validate() const {
    if (token_width < 1 || embed_dim < 2 || heads < 1 || depth < 1 || text_dim < 1) {
        throw Error("ModelConfig: dimensions must be positive");
    }
    if (embed_dim % heads != 0) {
        throw Error("ModelConfig: embed dim must be divisible by head count");
    }
    if (embed_dim % 2 != 0) {
        throw Error("ModelConfig: embed dim must be even");
    }
    if (axis_dims.head_dim() != head_dim()) {
        throw Error("ModelConfig: axis dims must sum to the head dim");
    }
}

Parameter& ParameterSet::find(const std::string& name) {
    for (Parameter& p : items) {
        if (p.name == name) return p;
    }
    throw Error("ParameterSet: unknown parameter " + name);
}

const Parameter& ParameterSet::find(const std::string& name) const {
    for (const Parameter& p : items) {
        if (p.name == name) return p;
    }
    throw Error("ParameterSet: unknown parameter " + name);
}

void ParameterSet::zero_grads() {
    for (Parameter& p : items) {
        std::fill(p.grad.begin(), p.grad.end(), 0.0);
    }
}

size_t ParameterSet::scalar_count() const {
    size_t n = 0;
    for (const Parameter& p : items) n += p.value.size();
    return n;
}

TextEmbeddings TextEmbeddings::random(int len, int dim, uint64_t seed) {
    TextEmbeddings text;
    text.len = len;
    text.dim = dim;
    text.values.resize(static_cast<size_t>(len) * dim);
    Rng rng(seed);
    for (double& v : text.values) v = rng.normal();
    return text;
}

namespace {

constexpr double kTimeFloor = 1e-5;

void add_param(ParameterSet& set, const std::string& name, int rows, int cols, Rng* rng,
               double scale, double fill = 0.0) {
    Parameter p;
    p.name = name;
    p.rows = rows;
    p.cols = cols;
    p.value.resize(static_cast<size_t>(rows) * cols, fill);
    p.grad.resize(p.value.size(), 0.0);
    if (rng) {
        for (double& v : p.value) v = rng->normal() * scale;
    }
    set.items.push_back(std::move(p));
}

std::string block_name(int i, const char* suffix) {
    return "block" + std::to_string(i) + "." + suffix;
}

// sinusoidal features of the scalar timestep, dim = embed
std::vector<double> timestep_features(double t, int embed) {
    const int half = embed / 2;
    std::vector<double> feat(embed);
    for (int i = 0; i < half; ++i) {
        const double freq = std::exp(-std::log(10000.0) * i / half);
        const double arg  = t * 1000.0 * freq;
        feat[2 * i]     = std::cos(arg);
        feat[2 * i + 1] = std::sin(arg);
    }
    return feat;
}

ad::RotationAngles grid_angles(const PositionGrid& grid, const ModelConfig& cfg) {
    const FreqTable table = build_freq_table(cfg.axis_dims, cfg.rope_base);
    ad::RotationAngles rot;
    rot.tokens = static_cast<int>(grid.size());
    rot.half   = cfg.head_dim() / 2;
    rot.cosv.resize(static_cast<size_t>(rot.tokens) * rot.half);
    rot.sinv.resize(rot.cosv.size());
    for (size_t i = 0; i < grid.size(); ++i) {
        const Position3 p = grid.impl_position(i);
        size_t at = i * rot.half;
        for (double f : table.z) {
            const double phi = static_cast<double>(p.z) * f;
            rot.cosv[at] = std::cos(phi);
            rot.sinv[at] = std::sin(phi);
            ++at;
        }
        for (double f : table.y) {
            const double phi = static_cast<double>(p.y) * f;
            rot.cosv[at] = std::cos(phi);
            rot.sinv[at] = std::sin(phi);
            ++at;
        }
        for (double f : table.x) {
            const double phi = static_cast<double>(p.x) * f;
            rot.cosv[at] = std::cos(phi);
            rot.sinv[at] = std::sin(phi);
            ++at;
        }
    }
    return rot;
}

int64_t shape_tokens(const std::vector<TokenShape>& shapes) {
    int64_t n = 0;
    for (const TokenShape& s : shapes) n += s.tokens();
    return n;
}

void check_sequence(const ModelConfig& cfg, const PackedTokens& noisy,
                    const PackedTokens& inputs, const TextEmbeddings& text,
                    const PositionGrid& grid) {
    if (noisy.b != 1 || (inputs.l > 0 && inputs.b != 1)) {
        throw ShapeError("dit_forward: only single-instance batches are supported");
    }
    if (noisy.d != cfg.token_width || (inputs.l > 0 && inputs.d != cfg.token_width)) {
        throw ShapeError("dit_forward: token width does not match the model config");
    }
    if (text.len > 0 && text.dim != cfg.text_dim) {
        throw ShapeError("dit_forward: text embedding dim does not match the model config");
    }
    if (!noisy.shapes.empty() && shape_tokens(noisy.shapes) != noisy.l) {
        throw ShapeError("dit_forward: target token shapes do not cover the sequence");
    }
    const size_t expect = static_cast<size_t>(noisy.l) + inputs.l + text.len;
    if (grid.size() != expect) {
        throw GridMismatch("dit_forward: grid length does not match the token sequence");
    }
    for (size_t i = 0; i < grid.size(); ++i) {
        const Segment want = i < static_cast<size_t>(noisy.l) ? Segment::Target
                             : i < static_cast<size_t>(noisy.l) + inputs.l ? Segment::Input
                                                                           : Segment::Text;
        if (grid.segments[i] != want) {
            throw GridMismatch("dit_forward: grid segments are not ordered targets, inputs, text");
        }
    }
}

struct ParamLeaves {
    std::vector<ad::Tape::Id> ids;  // parallel to params.items
};

// Builds the full forward graph and returns the target-segment prediction id.
ad::Tape::Id build_forward(ad::Tape& tape, const ModelConfig& cfg, const ParameterSet& params,
                           const PackedTokens& noisy, const PackedTokens& inputs,
                           const TextEmbeddings& text, const PositionGrid& grid, double t,
                           ParamLeaves* leaves) {
    ParamLeaves local;
    local.ids.reserve(params.items.size());
    for (const Parameter& p : params.items) {
        local.ids.push_back(tape.leaf(p.rows, p.cols, p.value));
    }
    auto pid = [&](const std::string& name) -> ad::Tape::Id {
        for (size_t i = 0; i < params.items.size(); ++i) {
            if (params.items[i].name == name) return local.ids[i];
        }
        throw Error("build_forward: unknown parameter " + name);
    };

    std::vector<ad::Tape::Id> segments;
    const ad::Tape::Id targets_in = tape.leaf(noisy.l, noisy.d, noisy.values);
    segments.push_back(tape.add_rowvec(tape.matmul(targets_in, pid("img_in.w")), pid("img_in.b")));
    if (inputs.l > 0) {
        const ad::Tape::Id inputs_in = tape.leaf(inputs.l, inputs.d, inputs.values);
        segments.push_back(tape.add_rowvec(tape.matmul(inputs_in, pid("img_in.w")), pid("img_in.b")));
    }
    if (text.len > 0) {
        const ad::Tape::Id text_in = tape.leaf(text.len, text.dim, text.values);
        segments.push_back(tape.add_rowvec(tape.matmul(text_in, pid("txt_in.w")), pid("txt_in.b")));
    }
    ad::Tape::Id x = segments.size() == 1 ? segments[0] : tape.concat_rows(segments);

    // timestep embedding added to every token
    const std::vector<double> feat = timestep_features(t, cfg.embed_dim);
    const ad::Tape::Id feat_id = tape.leaf(1, cfg.embed_dim, feat);
    ad::Tape::Id temb = tape.add_rowvec(tape.matmul(feat_id, pid("time.w1")), pid("time.b1"));
    temb = tape.gelu(temb);
    temb = tape.add_rowvec(tape.matmul(temb, pid("time.w2")), pid("time.b2"));
    x = tape.add_rowvec(x, temb);

    const ad::RotationAngles rot = grid_angles(grid, cfg);
    for (int i = 0; i < cfg.depth; ++i) {
        const ad::Tape::Id normed =
            tape.layernorm(x, pid(block_name(i, "ln1.g")), pid(block_name(i, "ln1.b")));
        const ad::Tape::Id q =
            tape.add_rowvec(tape.matmul(normed, pid(block_name(i, "attn.wq"))), pid(block_name(i, "attn.bq")));
        const ad::Tape::Id k =
            tape.add_rowvec(tape.matmul(normed, pid(block_name(i, "attn.wk"))), pid(block_name(i, "attn.bk")));
        const ad::Tape::Id v =
            tape.add_rowvec(tape.matmul(normed, pid(block_name(i, "attn.wv"))), pid(block_name(i, "attn.bv")));
        const ad::Tape::Id attn = tape.attention(q, k, v, cfg.heads, rot);
        const ad::Tape::Id attn_out =
            tape.add_rowvec(tape.matmul(attn, pid(block_name(i, "attn.wo"))), pid(block_name(i, "attn.bo")));
        x = tape.add(x, attn_out);

        const ad::Tape::Id normed2 =
            tape.layernorm(x, pid(block_name(i, "ln2.g")), pid(block_name(i, "ln2.b")));
        ad::Tape::Id h =
            tape.add_rowvec(tape.matmul(normed2, pid(block_name(i, "mlp.w1"))), pid(block_name(i, "mlp.b1")));
        h = tape.gelu(h);
        h = tape.add_rowvec(tape.matmul(h, pid(block_name(i, "mlp.w2"))), pid(block_name(i, "mlp.b2")));
        x = tape.add(x, h);
    }

    x = tape.layernorm(x, pid("final_ln.g"), pid("final_ln.b"));
    x = tape.add_rowvec(tape.matmul(x, pid("head.w")), pid("head.b"));
    const ad::Tape::Id clean = tape.slice_rows(x, 0, noisy.l);

    // The head predicts the clean sample; the velocity output is
    // (z_t - x0_hat) / t, exact on the interpolation path. The floor only
    // guards the division against a degenerate draw.
    const double t_safe = std::max(t, kTimeFloor);
    std::vector<double> z_over_t(noisy.values.size());
    for (size_t i = 0; i < z_over_t.size(); ++i) {
        z_over_t[i] = noisy.values[i] / t_safe;
    }
    const ad::Tape::Id scaled = tape.leaf(noisy.l, noisy.d, z_over_t);
    const ad::Tape::Id pred   = tape.axpy(scaled, clean, -1.0 / t_safe);

    if (leaves) *leaves = std::move(local);
    return pred;
}

}  // namespace

DitModel DitModel::create(const ModelConfig& cfg, uint64_t seed) {
    cfg.validate();
    DitModel model;
    model.cfg = cfg;
    Rng rng(seed);
    const int e = cfg.embed_dim;
    const double in_scale  = 1.0 / std::sqrt(static_cast<double>(cfg.token_width));
    const double e_scale   = 1.0 / std::sqrt(static_cast<double>(e));
    const double mlp_scale = 1.0 / std::sqrt(static_cast<double>(4 * e));

    add_param(model.params, "img_in.w", cfg.token_width, e, &rng, in_scale);
    add_param(model.params, "img_in.b", 1, e, nullptr, 0.0);
    add_param(model.params, "txt_in.w", cfg.text_dim, e, &rng,
              1.0 / std::sqrt(static_cast<double>(cfg.text_dim)));
    add_param(model.params, "txt_in.b", 1, e, nullptr, 0.0);
    add_param(model.params, "time.w1", e, e, &rng, e_scale);
    add_param(model.params, "time.b1", 1, e, nullptr, 0.0);
    add_param(model.params, "time.w2", e, e, &rng, e_scale);
    add_param(model.params, "time.b2", 1, e, nullptr, 0.0);
    for (int i = 0; i < cfg.depth; ++i) {
        add_param(model.params, block_name(i, "ln1.g"), 1, e, nullptr, 0.0, 1.0);
        add_param(model.params, block_name(i, "ln1.b"), 1, e, nullptr, 0.0);
        add_param(model.params, block_name(i, "attn.wq"), e, e, &rng, e_scale);
        add_param(model.params, block_name(i, "attn.bq"), 1, e, nullptr, 0.0);
        add_param(model.params, block_name(i, "attn.wk"), e, e, &rng, e_scale);
        add_param(model.params, block_name(i, "attn.bk"), 1, e, nullptr, 0.0);
        add_param(model.params, block_name(i, "attn.wv"), e, e, &rng, e_scale);
        add_param(model.params, block_name(i, "attn.bv"), 1, e, nullptr, 0.0);
        add_param(model.params, block_name(i, "attn.wo"), e, e, &rng, e_scale);
        add_param(model.params, block_name(i, "attn.bo"), 1, e, nullptr, 0.0);
        add_param(model.params, block_name(i, "ln2.g"), 1, e, nullptr, 0.0, 1.0);
        add_param(model.params, block_name(i, "ln2.b"), 1, e, nullptr, 0.0);
        add_param(model.params, block_name(i, "mlp.w1"), e, 4 * e, &rng, e_scale);
        add_param(model.params, block_name(i, "mlp.b1"), 1, 4 * e, nullptr, 0.0);
        add_param(model.params, block_name(i, "mlp.w2"), 4 * e, e, &rng, mlp_scale);
        add_param(model.params, block_name(i, "mlp.b2"), 1, e, nullptr, 0.0);
    }
    add_param(model.params, "final_ln.g", 1, e, nullptr, 0.0, 1.0);
    add_param(model.params, "final_ln.b", 1, e, nullptr, 0.0);
    // zero-init head so the initial prediction is exactly zero
    add_param(model.params, "head.w", e, cfg.token_width, nullptr, 0.0);
    add_param(model.params, "head.b", 1, cfg.token_width, nullptr, 0.0);
    return model;
}

void TrainBatch::validate(const ModelConfig& cfg) const {
    check_sequence(cfg, targets, inputs, text, grid);
    if (target_count != static_cast<int>(targets.shapes.size()) || target_count < 1) {
        throw ShapeError("TrainBatch: target_count must equal the number of target images");
    }
}

PackedTokens dit_forward(const DitModel& model, const PackedTokens& noisy_targets,
                         const PackedTokens& inputs, const TextEmbeddings& text,
                         const PositionGrid& grid, double t) {
    check_sequence(model.cfg, noisy_targets, inputs, text, grid);
    if (!(t >= 0.0 && t <= 1.0)) {
        throw Error("dit_forward: t must lie in [0, 1]");
    }
    ad::Tape tape;
    const ad::Tape::Id pred =
        build_forward(tape, model.cfg, model.params, noisy_targets, inputs, text, grid, t, nullptr);
    PackedTokens out(1, noisy_targets.l, noisy_targets.d);
    out.values = tape.val(pred);
    out.shapes = noisy_targets.shapes;
    return out;
}

double seq_loss(const PackedTokens& pred, const PackedTokens& target_velocities, int target_count) {
    if (pred.b != 1 || target_velocities.b != 1) {
        throw ShapeError("seq_loss: only single-instance batches are supported");
    }
    if (pred.l != target_velocities.l || pred.d != target_velocities.d) {
        throw ShapeError("seq_loss: prediction and target shapes differ");
    }
    const std::vector<TokenShape>& shapes =
        target_velocities.shapes.empty() ? pred.shapes : target_velocities.shapes;
    if (static_cast<int>(shapes.size()) != target_count || target_count < 1) {
        throw ShapeError("seq_loss: target_count does not match the token shapes");
    }
    if (shape_tokens(shapes) != pred.l) {
        throw ShapeError("seq_loss: token shapes do not cover the sequence");
    }

    std::vector<double> per_image(shapes.size());
    size_t row = 0;
    for (size_t img = 0; img < shapes.size(); ++img) {
        double acc = 0.0;
        const size_t rows = static_cast<size_t>(shapes[img].tokens());
        for (size_t i = row; i < row + rows; ++i) {
            for (int j = 0; j < pred.d; ++j) {
                const double d = target_velocities.values[i * pred.d + j] - pred.values[i * pred.d + j];
                acc += d * d;
            }
        }
        per_image[img] = acc;
        row += rows;
    }
    return ad::pairwise_sum(per_image.data(), per_image.size()) /
           static_cast<double>(per_image.size());
}

SigmaSchedule shift_schedule(int seq_len, int steps, const ShiftParams& params) {
    if (steps < 1) {
        throw Error("shift_schedule: steps must be >= 1");
    }
    SigmaSchedule sched;
    sched.mu = params.base_shift + (seq_len - params.base_len) *
                                       (params.max_shift - params.base_shift) /
                                       static_cast<double>(params.max_len - params.base_len);
    const double emu = std::exp(sched.mu);
    sched.sigmas.resize(steps);
    for (int i = 0; i < steps; ++i) {
        const double raw = steps == 1
                               ? 1.0
                               : 1.0 + (1.0 / steps - 1.0) * (static_cast<double>(i) / (steps - 1));
        sched.sigmas[i] = emu * raw / (emu * raw + (1.0 - raw));
    }
    return sched;
}

namespace {

struct NoiseDraw {
    double t = 0.0;
    std::vector<double> noisy;
    std::vector<double> velocity;
};

NoiseDraw draw_noise(const TrainBatch& batch, uint64_t seed) {
    Rng rng(seed);
    NoiseDraw draw;
    draw.t = rng.uniform();
    const std::vector<double>& z0 = batch.targets.values;
    draw.noisy.resize(z0.size());
    draw.velocity.resize(z0.size());
    for (size_t i = 0; i < z0.size(); ++i) {
        const double eps = rng.normal();
        draw.noisy[i]    = (1.0 - draw.t) * z0[i] + draw.t * eps;
        draw.velocity[i] = eps - z0[i];
    }
    return draw;
}

std::vector<int> image_bounds(const std::vector<TokenShape>& shapes) {
    std::vector<int> bounds{0};
    for (const TokenShape& s : shapes) {
        bounds.push_back(bounds.back() + static_cast<int>(s.tokens()));
    }
    return bounds;
}

}  // namespace

double loss_and_grads(DitModel& model, const TrainBatch& batch, uint64_t seed) {
    batch.validate(model.cfg);
    const NoiseDraw draw = draw_noise(batch, seed);

    PackedTokens noisy = batch.targets;
    noisy.values = draw.noisy;

    ad::Tape tape;
    ParamLeaves leaves;
    const ad::Tape::Id pred = build_forward(tape, model.cfg, model.params, noisy, batch.inputs,
                                            batch.text, batch.grid, draw.t, &leaves);
    const ad::Tape::Id loss =
        tape.seq_loss(pred, draw.velocity, image_bounds(batch.targets.shapes));
    tape.backward(loss);

    const double value = tape.val(loss)[0];
    if (!std::isfinite(value)) {
        throw NonFiniteLoss("loss_and_grads: loss is not finite");
    }
    for (size_t i = 0; i < model.params.items.size(); ++i) {
        model.params.items[i].grad = tape.grad(leaves.ids[i]);
    }
    return value;
}

double eval_loss(const DitModel& model, const TrainBatch& batch, uint64_t seed) {
    batch.validate(model.cfg);
    const NoiseDraw draw = draw_noise(batch, seed);

    PackedTokens noisy = batch.targets;
    noisy.values = draw.noisy;

    ad::Tape tape;
    const ad::Tape::Id pred = build_forward(tape, model.cfg, model.params, noisy, batch.inputs,
                                            batch.text, batch.grid, draw.t, nullptr);

    PackedTokens pred_tokens(1, batch.targets.l, batch.targets.d);
    pred_tokens.values = tape.val(pred);
    pred_tokens.shapes = batch.targets.shapes;
    PackedTokens target(1, batch.targets.l, batch.targets.d);
    target.values = draw.velocity;
    target.shapes = batch.targets.shapes;
    return seq_loss(pred_tokens, target, batch.target_count);
}

double train_step(DitModel& model, const TrainBatch& batch, uint64_t seed, OptimizerState& opt,
                  const OptimizerConfig& cfg) {
    if (cfg.lr < 0.0) {
        throw Error("train_step: learning rate must be >= 0");
    }
    const double loss = loss_and_grads(model, batch, seed);

    if (cfg.clip_norm > 0.0) {
        double norm_sq = 0.0;
        for (const Parameter& p : model.params.items) {
            for (double g : p.grad) norm_sq += g * g;
        }
        const double norm = std::sqrt(norm_sq);
        if (norm > cfg.clip_norm) {
            const double s = cfg.clip_norm / norm;
            for (Parameter& p : model.params.items) {
                for (double& g : p.grad) g *= s;
            }
        }
    }

    if (opt.m.size() != model.params.items.size()) {
        opt.m.assign(model.params.items.size(), {});
        opt.v.assign(model.params.items.size(), {});
        for (size_t i = 0; i < model.params.items.size(); ++i) {
            opt.m[i].assign(model.params.items[i].value.size(), 0.0);
            opt.v[i].assign(model.params.items[i].value.size(), 0.0);
        }
        opt.step = 0;
    }
    opt.step += 1;

    if (cfg.plain_sgd) {
        for (size_t i = 0; i < model.params.items.size(); ++i) {
            Parameter& p = model.params.items[i];
            for (size_t j = 0; j < p.value.size(); ++j) {
                p.value[j] -= cfg.lr * p.grad[j];
            }
        }
        return loss;
    }

    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(opt.step));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(opt.step));
    for (size_t i = 0; i < model.params.items.size(); ++i) {
        Parameter& p = model.params.items[i];
        for (size_t j = 0; j < p.value.size(); ++j) {
            const double g = p.grad[j];
            opt.m[i][j] = cfg.beta1 * opt.m[i][j] + (1.0 - cfg.beta1) * g;
            opt.v[i][j] = cfg.beta2 * opt.v[i][j] + (1.0 - cfg.beta2) * g * g;
            const double mhat = opt.m[i][j] / bc1;
            const double vhat = opt.v[i][j] / bc2;
            p.value[j] -= cfg.lr * mhat / (std::sqrt(vhat) + cfg.eps);
        }
    }
    return loss;
}

PackedTokens gaussian_tokens(const std::vector<TokenShape>& shapes, int token_width, uint64_t seed) {
    const int64_t l = shape_tokens(shapes);
    PackedTokens out(1, static_cast<int>(l), token_width);
    out.shapes = shapes;
    Rng rng(seed);
    for (double& v : out.values) v = rng.normal();
    return out;
}

PackedTokens sample(const VelocityFn& velocity, const std::vector<TokenShape>& target_shapes,
                    int token_width, int steps, uint64_t seed, const ShiftParams& shift) {
    if (steps < 1 || target_shapes.empty()) {
        throw Error("sample: need at least one step and one target image");
    }
    PackedTokens z = gaussian_tokens(target_shapes, token_width, seed);
    const SigmaSchedule sched = shift_schedule(z.l, steps, shift);
    for (int i = 0; i < steps; ++i) {
        const double cur  = sched.sigmas[i];
        const double next = i + 1 < steps ? sched.sigmas[i + 1] : 0.0;
        const PackedTokens v = velocity(z, cur);
        if (v.l != z.l || v.d != z.d) {
            throw ShapeError("sample: velocity output shape mismatch");
        }
        for (size_t j = 0; j < z.values.size(); ++j) {
            z.values[j] += (next - cur) * v.values[j];
        }
    }
    return z;
}

PackedTokens sample_with_model(const DitModel& model, const PackedTokens& inputs,
                               const TextEmbeddings& text,
                               const std::vector<TokenShape>& target_shapes, int steps,
                               uint64_t seed, const ShiftParams& shift) {
    std::vector<std::pair<int, int>> target_hw;
    for (const TokenShape& s : target_shapes) target_hw.emplace_back(s.h2, s.w2);
    std::vector<std::pair<int, int>> input_hw;
    for (const TokenShape& s : inputs.shapes) input_hw.emplace_back(s.h2, s.w2);
    const PositionGrid grid = build_position_grid(input_hw, target_hw, text.len,
                                                  static_cast<int64_t>(target_shapes.size()));
    const VelocityFn velocity = [&](const PackedTokens& noisy, double sigma) {
        return dit_forward(model, noisy, inputs, text, grid, sigma);
    };
    return sample(velocity, target_shapes, model.cfg.token_width, steps, seed, shift);
}

std::vector<NamedArray> model_to_arrays(const DitModel& model) {
    std::vector<NamedArray> arrays;
    arrays.reserve(model.params.items.size());
    for (const Parameter& p : model.params.items) {
        NamedArray a;
        a.name  = p.name;
        a.shape = {p.rows, p.cols};
        a.data.assign(p.value.begin(), p.value.end());
        arrays.push_back(std::move(a));
    }
    return arrays;
}

DitModel model_from_arrays(const ModelConfig& cfg, const std::vector<NamedArray>& arrays) {
    DitModel model = DitModel::create(cfg, 0);
    for (Parameter& p : model.params.items) {
        const NamedArray* found = nullptr;
        for (const NamedArray& a : arrays) {
            if (a.name == p.name) {
                found = &a;
                break;
            }
        }
        if (!found || found->element_count() != static_cast<int64_t>(p.value.size())) {
            throw DecodeError("model_from_arrays: missing or mismatched array " + p.name);
        }
        for (size_t i = 0; i < p.value.size(); ++i) {
            p.value[i] = found->data[i];
        }
    }
    return model;
}

}  // namespace alphaseq
