#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "alphaseq/error.hpp"

namespace alphaseq {

// Dense (B, C, F, H, W) latent, row-major in that dimension order.
struct LatentTensor {
    int b = 0, c = 0, f = 0, h = 0, w = 0;
    std::vector<double> values;

    LatentTensor() = default;
    LatentTensor(int b_, int c_, int f_, int h_, int w_)
        : b(b_), c(c_), f(f_), h(h_), w(w_),
          values(static_cast<size_t>(b_) * c_ * f_ * h_ * w_) {}

    size_t index(int bi, int ci, int fi, int y, int x) const {
        return (((static_cast<size_t>(bi) * c + ci) * f + fi) * h + y) * w + x;
    }
    double& at(int bi, int ci, int fi, int y, int x) { return values[index(bi, ci, fi, y, x)]; }
    double at(int bi, int ci, int fi, int y, int x) const { return values[index(bi, ci, fi, y, x)]; }
};

// Shape of one packed constituent image: (frames, h/2, w/2) token grid.
struct TokenShape {
    int f  = 1;
    int h2 = 0;
    int w2 = 0;

    int64_t tokens() const { return static_cast<int64_t>(f) * h2 * w2; }
    bool operator==(const TokenShape&) const = default;
};

// (B, L, D) token sequence, D = 4C after the 2x2 spatial grouping.
struct PackedTokens {
    int b = 0, l = 0, d = 0;
    std::vector<double> values;
    std::vector<TokenShape> shapes;  // constituent images, in sequence order

    PackedTokens() = default;
    PackedTokens(int b_, int l_, int d_)
        : b(b_), l(l_), d(d_), values(static_cast<size_t>(b_) * l_ * d_) {}

    size_t index(int bi, int li, int di) const {
        return (static_cast<size_t>(bi) * l + li) * d + di;
    }
    double& at(int bi, int li, int di) { return values[index(bi, li, di)]; }
    double at(int bi, int li, int di) const { return values[index(bi, li, di)]; }
};

// (B, C, F, H, W) -> (B, F*(H/2)*(W/2), 4C). Token l = (f*(H/2) + y)*(W/2) + x
// carries component d = c*4 + hh*2 + ww = lat[b, c, f, 2y+hh, 2x+ww]. Pure
// permutation, no arithmetic.
PackedTokens pack_multi_frames(const LatentTensor& lat);

// exact inverse of pack_multi_frames
LatentTensor unpack_multi_frames(const PackedTokens& tokens, int f, int h, int w);

// structured text fixtures for golden tests
std::string dump_latent(const LatentTensor& lat);
std::string dump_tokens(const PackedTokens& tokens);

}  // namespace alphaseq
