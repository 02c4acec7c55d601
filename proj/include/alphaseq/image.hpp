#pragma once

#include <cstdint>
#include <vector>

#include "alphaseq/error.hpp"

namespace alphaseq {

// RGBA image with unit-interval channel values, interleaved r,g,b,a.
// Quantization to 8/16-bit happens only at file boundaries (image_io).
struct RgbaImage {
    int width  = 0;
    int height = 0;
    std::vector<double> data;  // width*height*4

    RgbaImage() = default;
    RgbaImage(int w, int h, double r = 0.0, double g = 0.0, double b = 0.0, double a = 1.0);

    double& at(int x, int y, int c) { return data[(static_cast<size_t>(y) * width + x) * 4 + c]; }
    double at(int x, int y, int c) const { return data[(static_cast<size_t>(y) * width + x) * 4 + c]; }

    size_t pixel_count() const { return static_cast<size_t>(width) * height; }
    bool same_size(const RgbaImage& o) const { return width == o.width && height == o.height; }

    // throws Error if dims or channel ranges violate the invariants
    void validate() const;
};

// Per-pixel opacity in [0, 1].
struct AlphaMap {
    int width  = 0;
    int height = 0;
    std::vector<double> values;  // width*height

    AlphaMap() = default;
    AlphaMap(int w, int h, double fill = 0.0);

    double& at(int x, int y) { return values[static_cast<size_t>(y) * width + x]; }
    double at(int x, int y) const { return values[static_cast<size_t>(y) * width + x]; }

    void validate() const;
};

struct Dimensions {
    int width  = 0;
    int height = 0;
};

// Alpha-blend fg over bg. bg is treated as an opaque RGB layer (its alpha is
// ignored); the output alpha is identically 1.
RgbaImage composite_over(const RgbaImage& fg, const RgbaImage& bg);

// Pick the width/height closest to target_area at the given aspect ratio,
// rounded down to the nearest multiple. Throws AreaTooSmall when a side
// collapses to zero.
Dimensions fit_dimensions(int64_t target_area, double aspect, int multiple);

}  // namespace alphaseq
