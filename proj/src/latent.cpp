#include "alphaseq/latent.hpp"

#include <cstdio>
#include <sstream>

namespace alphaseq {

PackedTokens pack_multi_frames(const LatentTensor& lat) {
    if (lat.h % 2 != 0 || lat.w % 2 != 0) {
        throw OddSpatialDim("pack_multi_frames: H and W must be even");
    }
    const int h2 = lat.h / 2;
    const int w2 = lat.w / 2;
    PackedTokens out(lat.b, lat.f * h2 * w2, lat.c * 4);
    for (int bi = 0; bi < lat.b; ++bi) {
        for (int fi = 0; fi < lat.f; ++fi) {
            for (int y = 0; y < h2; ++y) {
                for (int x = 0; x < w2; ++x) {
                    const int li = (fi * h2 + y) * w2 + x;
                    for (int ci = 0; ci < lat.c; ++ci) {
                        for (int hh = 0; hh < 2; ++hh) {
                            for (int ww = 0; ww < 2; ++ww) {
                                out.at(bi, li, ci * 4 + hh * 2 + ww) =
                                    lat.at(bi, ci, fi, 2 * y + hh, 2 * x + ww);
                            }
                        }
                    }
                }
            }
        }
    }
    out.shapes.assign(static_cast<size_t>(lat.f), TokenShape{1, h2, w2});
    return out;
}

LatentTensor unpack_multi_frames(const PackedTokens& tokens, int f, int h, int w) {
    if (h % 2 != 0 || w % 2 != 0) {
        throw OddSpatialDim("unpack_multi_frames: H and W must be even");
    }
    if (tokens.d % 4 != 0) {
        throw ShapeMismatch("unpack_multi_frames: token width must be divisible by 4");
    }
    const int h2 = h / 2;
    const int w2 = w / 2;
    if (static_cast<int64_t>(tokens.l) != static_cast<int64_t>(f) * h2 * w2) {
        throw ShapeMismatch("unpack_multi_frames: token count does not match F*(H/2)*(W/2)");
    }
    LatentTensor out(tokens.b, tokens.d / 4, f, h, w);
    for (int bi = 0; bi < out.b; ++bi) {
        for (int fi = 0; fi < f; ++fi) {
            for (int y = 0; y < h2; ++y) {
                for (int x = 0; x < w2; ++x) {
                    const int li = (fi * h2 + y) * w2 + x;
                    for (int ci = 0; ci < out.c; ++ci) {
                        for (int hh = 0; hh < 2; ++hh) {
                            for (int ww = 0; ww < 2; ++ww) {
                                out.at(bi, ci, fi, 2 * y + hh, 2 * x + ww) =
                                    tokens.at(bi, li, ci * 4 + hh * 2 + ww);
                            }
                        }
                    }
                }
            }
        }
    }
    return out;
}

namespace {

void append_values(std::ostringstream& out, const std::vector<double>& values) {
    char buf[40];
    for (size_t i = 0; i < values.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", values[i]);
        out << (i ? " " : "") << buf;
    }
}

}  // namespace

std::string dump_latent(const LatentTensor& lat) {
    std::ostringstream out;
    out << "latent " << lat.b << ' ' << lat.c << ' ' << lat.f << ' ' << lat.h << ' ' << lat.w
        << '\n';
    append_values(out, lat.values);
    out << '\n';
    return out.str();
}

std::string dump_tokens(const PackedTokens& tokens) {
    std::ostringstream out;
    out << "tokens " << tokens.b << ' ' << tokens.l << ' ' << tokens.d;
    for (const TokenShape& s : tokens.shapes) {
        out << " (" << s.f << ',' << s.h2 << ',' << s.w2 << ')';
    }
    out << '\n';
    append_values(out, tokens.values);
    out << '\n';
    return out.str();
}

}  // namespace alphaseq
