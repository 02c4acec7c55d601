#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "alphaseq/error.hpp"

namespace alphaseq {

// Split of the per-head rotary dimension across the (z, y, x) axes,
// z leading. Each share must be even.
struct AxisDims {
    int z = 0;
    int y = 0;
    int x = 0;

    int head_dim() const { return z + y + x; }

    // default split: equal thirds rounded down to even, remainder to x
    static AxisDims split_evenly(int head_dim);
};

// Per-axis inverse frequencies theta_i = base^(-2i / d_axis).
struct FreqTable {
    double base = 0.0;
    std::vector<double> z;
    std::vector<double> y;
    std::vector<double> x;
};

struct Position3 {
    int64_t z = 0;  // may be negative before the global shift
    int64_t y = 0;
    int64_t x = 0;

    friend Position3 operator+(Position3 a, Position3 b) {
        return Position3{a.z + b.z, a.y + b.y, a.x + b.x};
    }
    friend Position3 operator-(Position3 a, Position3 b) {
        return Position3{a.z - b.z, a.y - b.y, a.x - b.x};
    }
    bool operator==(const Position3&) const = default;
};

enum class Segment { Target, Input, Text };

// Positions for one packed sequence, ordered targets, then inputs, then text.
// Raw layer indices: target k (1-based) sits at z = -k, input k at z = k-1,
// text token j at z = n + j. The implementation index adds s_offset so every
// z is nonnegative.
struct PositionGrid {
    std::vector<Position3> positions;  // raw (unshifted) positions
    std::vector<Segment> segments;
    int64_t s_offset = 0;

    size_t size() const { return positions.size(); }
    Position3 impl_position(size_t i) const {
        Position3 p = positions[i];
        p.z += s_offset;
        return p;
    }
};

FreqTable build_freq_table(const AxisDims& dims, double base = 10000.0);

// Rotate a head-dim vector by the per-axis angles of pos: the leading d_z
// pairs turn by z*theta_z[i], then d_y pairs by y*theta_y[i], then d_x pairs
// by x*theta_x[i]. Pairs are adjacent components (2i, 2i+1). Norm-preserving.
std::vector<double> rotate(std::span<const double> vec, const Position3& pos,
                           const FreqTable& table);

// <rotate(q, p_q), rotate(k, p_k)>; a function of p_q - p_k only.
double attention_score(std::span<const double> q, std::span<const double> k,
                       const Position3& p_q, const Position3& p_k, const FreqTable& table);

// Assemble the grid for m target images, n input images (each an (h2, w2)
// token grid scanned row-major) and text_len text tokens. s_offset must be
// at least m so shifted indices stay nonnegative.
PositionGrid build_position_grid(const std::vector<std::pair<int, int>>& input_shapes,
                                 const std::vector<std::pair<int, int>>& target_shapes,
                                 int text_len, int64_t s_offset);

// one line per token: index, segment, z_raw, z_impl, y, x
std::string dump_grid(const PositionGrid& grid);

}  // namespace alphaseq
