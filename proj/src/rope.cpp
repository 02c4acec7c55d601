#include "alphaseq/rope.hpp"

#include <cmath>
#include <sstream>

namespace alphaseq {

AxisDims AxisDims::split_evenly(int head_dim) {
    if (head_dim < 6 || head_dim % 2 != 0) {
        throw OddAxisDim("AxisDims: head dim must be even and >= 6 for a 3-axis split");
    }
    const int share = head_dim / 6 * 2;
    return AxisDims{share, share, head_dim - 2 * share};
}

namespace {

std::vector<double> axis_freqs(int d_axis, double base, const char* axis) {
    if (d_axis <= 0 || d_axis % 2 != 0) {
        throw OddAxisDim(std::string("build_freq_table: axis ") + axis + " dim must be even and positive");
    }
    std::vector<double> out(d_axis / 2);
    for (int i = 0; i < d_axis / 2; ++i) {
        out[i] = std::pow(base, -2.0 * i / d_axis);
    }
    return out;
}

void rotate_span(const double* src, double* dst, int d_axis, int64_t pos,
                 const std::vector<double>& freqs) {
    for (int i = 0; i < d_axis / 2; ++i) {
        const double phi = static_cast<double>(pos) * freqs[i];
        const double c = std::cos(phi);
        const double s = std::sin(phi);
        const double u = src[2 * i];
        const double v = src[2 * i + 1];
        dst[2 * i]     = u * c - v * s;
        dst[2 * i + 1] = u * s + v * c;
    }
}

}  // namespace

FreqTable build_freq_table(const AxisDims& dims, double base) {
    if (base <= 1.0) {
        throw Error("build_freq_table: base must be > 1");
    }
    FreqTable table;
    table.base = base;
    table.z = axis_freqs(dims.z, base, "z");
    table.y = axis_freqs(dims.y, base, "y");
    table.x = axis_freqs(dims.x, base, "x");
    return table;
}

std::vector<double> rotate(std::span<const double> vec, const Position3& pos,
                           const FreqTable& table) {
    const int d_z = static_cast<int>(table.z.size()) * 2;
    const int d_y = static_cast<int>(table.y.size()) * 2;
    const int d_x = static_cast<int>(table.x.size()) * 2;
    if (static_cast<int>(vec.size()) != d_z + d_y + d_x) {
        throw LengthMismatch("rotate: vector length does not match the axis split");
    }
    std::vector<double> out(vec.size());
    rotate_span(vec.data(), out.data(), d_z, pos.z, table.z);
    rotate_span(vec.data() + d_z, out.data() + d_z, d_y, pos.y, table.y);
    rotate_span(vec.data() + d_z + d_y, out.data() + d_z + d_y, d_x, pos.x, table.x);
    return out;
}

double attention_score(std::span<const double> q, std::span<const double> k,
                       const Position3& p_q, const Position3& p_k, const FreqTable& table) {
    if (q.size() != k.size()) {
        throw LengthMismatch("attention_score: q and k lengths differ");
    }
    const std::vector<double> rq = rotate(q, p_q, table);
    const std::vector<double> rk = rotate(k, p_k, table);
    double dot = 0.0;
    for (size_t i = 0; i < rq.size(); ++i) {
        dot += rq[i] * rk[i];
    }
    return dot;
}

PositionGrid build_position_grid(const std::vector<std::pair<int, int>>& input_shapes,
                                 const std::vector<std::pair<int, int>>& target_shapes,
                                 int text_len, int64_t s_offset) {
    const int64_t m = static_cast<int64_t>(target_shapes.size());
    const int64_t n = static_cast<int64_t>(input_shapes.size());
    if (m == 0) {
        throw NoTargets("build_position_grid: at least one target image required");
    }
    if (s_offset < m) {
        throw OffsetTooSmall("build_position_grid: s_offset must be >= target count");
    }

    PositionGrid grid;
    grid.s_offset = s_offset;

    auto emit_image = [&grid](int64_t z, int h2, int w2, Segment seg) {
        for (int y = 0; y < h2; ++y) {
            for (int x = 0; x < w2; ++x) {
                grid.positions.push_back(Position3{z, y, x});
                grid.segments.push_back(seg);
            }
        }
    };

    for (int64_t k = 1; k <= m; ++k) {
        emit_image(-k, target_shapes[k - 1].first, target_shapes[k - 1].second, Segment::Target);
    }
    for (int64_t k = 1; k <= n; ++k) {
        emit_image(k - 1, input_shapes[k - 1].first, input_shapes[k - 1].second, Segment::Input);
    }
    for (int64_t j = 0; j < text_len; ++j) {
        grid.positions.push_back(Position3{n + j, 0, 0});
        grid.segments.push_back(Segment::Text);
    }
    return grid;
}

std::string dump_grid(const PositionGrid& grid) {
    std::ostringstream out;
    out << "index\tsegment\tz_raw\tz_impl\ty\tx\n";
    for (size_t i = 0; i < grid.size(); ++i) {
        const char* seg = grid.segments[i] == Segment::Target  ? "target"
                          : grid.segments[i] == Segment::Input ? "input"
                                                               : "text";
        const Position3& p = grid.positions[i];
        out << i << '\t' << seg << '\t' << p.z << '\t' << (p.z + grid.s_offset) << '\t' << p.y
            << '\t' << p.x << '\n';
    }
    return out.str();
}

}  // namespace alphaseq
