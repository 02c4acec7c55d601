#pragma once

#include <cstdint>
#include <vector>

#include "alphaseq/error.hpp"
#include "alphaseq/image.hpp"
#include "alphaseq/image_io.hpp"

namespace alphaseq {

struct BinaryMask {
    int width  = 0;
    int height = 0;
    std::vector<uint8_t> bits;  // 0 or 1

    BinaryMask() = default;
    BinaryMask(int w, int h, bool fill = false)
        : width(w), height(h), bits(static_cast<size_t>(w) * h, fill ? 1 : 0) {}

    bool at(int x, int y) const { return bits[static_cast<size_t>(y) * width + x] != 0; }
    void set(int x, int y, bool v) { bits[static_cast<size_t>(y) * width + x] = v ? 1 : 0; }
    size_t count() const;
};

// Three-valued label map: 0 background, 128 unknown band, 255 foreground.
struct Trimap {
    static constexpr uint8_t kBackground = 0;
    static constexpr uint8_t kUnknown    = 128;
    static constexpr uint8_t kForeground = 255;

    int width  = 0;
    int height = 0;
    std::vector<uint8_t> labels;

    Trimap() = default;
    Trimap(int w, int h, uint8_t fill = kBackground)
        : width(w), height(h), labels(static_cast<size_t>(w) * h, fill) {}

    uint8_t at(int x, int y) const { return labels[static_cast<size_t>(y) * width + x]; }
    void set(int x, int y, uint8_t v) { labels[static_cast<size_t>(y) * width + x] = v; }
};

// The four aligned pixel-level conditions derived from one foreground alpha.
struct ConditionSet {
    AlphaMap alpha;
    BinaryMask precise;
    Trimap trimap;
    BinaryMask rough;
    int radius = 0;
};

enum class MorphMode { Erode, Dilate };

struct ConditionParams {
    double tau_bin     = 0.5;   // binarization threshold before morphology
    double tau_precise = 0.95;  // high-opacity threshold for the precise mask
};

// Binary morphology with the disk structuring element
// {(dx,dy) : dx*dx + dy*dy <= r*r}. Out-of-bounds neighbours count as false
// in both modes, so erosion shrinks at image borders.
BinaryMask morph_disk(const BinaryMask& mask, int radius, MorphMode mode);

// Derive {alpha, precise, trimap, rough} with an explicit band radius
// fraction of min(H, W).
ConditionSet derive_condition_set(const AlphaMap& alpha, double radius_fraction,
                                  const ConditionParams& params = {});

// Same, with the radius fraction drawn uniformly from [0.05, 0.10].
ConditionSet derive_condition_set(const AlphaMap& alpha, uint64_t seed,
                                  const ConditionParams& params = {});

// raster serialization (0/255 for binary, 0/128/255 for trimap)
void write_mask(const BinaryMask& mask, const std::string& path);
BinaryMask read_mask(const std::string& path);
void write_trimap(const Trimap& trimap, const std::string& path);
Trimap read_trimap(const std::string& path);

}  // namespace alphaseq
