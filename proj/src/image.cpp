#include "alphaseq/image.hpp"

#include <cmath>

namespace alphaseq {

RgbaImage::RgbaImage(int w, int h, double r, double g, double b, double a)
    : width(w), height(h), data(static_cast<size_t>(w) * h * 4) {
    for (size_t i = 0; i < pixel_count(); ++i) {
        data[i * 4 + 0] = r;
        data[i * 4 + 1] = g;
        data[i * 4 + 2] = b;
        data[i * 4 + 3] = a;
    }
}

void RgbaImage::validate() const {
    if (width < 1 || height < 1) {
        throw Error("RgbaImage: width and height must be >= 1");
    }
    if (data.size() != pixel_count() * 4) {
        throw Error("RgbaImage: pixel buffer size does not match dimensions");
    }
    for (double v : data) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw Error("RgbaImage: channel value outside [0, 1]");
        }
    }
}

AlphaMap::AlphaMap(int w, int h, double fill)
    : width(w), height(h), values(static_cast<size_t>(w) * h, fill) {}

void AlphaMap::validate() const {
    if (width < 1 || height < 1) {
        throw Error("AlphaMap: width and height must be >= 1");
    }
    if (values.size() != static_cast<size_t>(width) * height) {
        throw Error("AlphaMap: value buffer size does not match dimensions");
    }
    for (double v : values) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw Error("AlphaMap: value outside [0, 1]");
        }
    }
}

RgbaImage composite_over(const RgbaImage& fg, const RgbaImage& bg) {
    if (!fg.same_size(bg)) {
        throw DimensionMismatch("composite_over: foreground and background dimensions differ");
    }
    RgbaImage out(fg.width, fg.height);
    for (size_t i = 0; i < out.pixel_count(); ++i) {
        const double a = fg.data[i * 4 + 3];
        for (int c = 0; c < 3; ++c) {
            out.data[i * 4 + c] = fg.data[i * 4 + c] * a + bg.data[i * 4 + c] * (1.0 - a);
        }
        out.data[i * 4 + 3] = 1.0;
    }
    return out;
}

Dimensions fit_dimensions(int64_t target_area, double aspect, int multiple) {
    if (target_area <= 0 || aspect <= 0.0 || multiple < 1) {
        throw Error("fit_dimensions: target_area, aspect and multiple must be positive");
    }
    const double area = static_cast<double>(target_area);
    const int64_t w0  = static_cast<int64_t>(std::llround(std::sqrt(area * aspect)));
    const int64_t h0  = static_cast<int64_t>(std::llround(std::sqrt(area / aspect)));
    const int64_t w   = w0 / multiple * multiple;
    const int64_t h   = h0 / multiple * multiple;
    if (w <= 0 || h <= 0) {
        throw AreaTooSmall("fit_dimensions: requested area collapses below one multiple");
    }
    return Dimensions{static_cast<int>(w), static_cast<int>(h)};
}

}  // namespace alphaseq
