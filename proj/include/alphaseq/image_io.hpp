#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "alphaseq/image.hpp"

namespace alphaseq {

// PNG-backed raster I/O. Channel values cross the file boundary as 8- or
// 16-bit integers; everything in memory stays a unit-interval double.
// Files without an alpha channel decode with alpha == 1 everywhere.

RgbaImage read_image(const std::string& path);
void write_image(const RgbaImage& img, const std::string& path, int bit_depth = 8);

// single-channel helpers (masks, trimaps, alpha mattes)
struct GrayImage {
    int width  = 0;
    int height = 0;
    std::vector<uint8_t> values;
};

GrayImage read_gray8(const std::string& path);
void write_gray8(const GrayImage& img, const std::string& path);

AlphaMap read_alpha(const std::string& path);
void write_alpha(const AlphaMap& alpha, const std::string& path, int bit_depth = 8);

inline uint8_t quantize8(double v) {
    const double c = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
    return static_cast<uint8_t>(c * 255.0 + 0.5);
}

inline uint16_t quantize16(double v) {
    const double c = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
    return static_cast<uint16_t>(c * 65535.0 + 0.5);
}

}  // namespace alphaseq
