#include "alphaseq/mask.hpp"

#include <algorithm>
#include <cmath>

#include "alphaseq/rng.hpp"

namespace alphaseq {

size_t BinaryMask::count() const {
    size_t n = 0;
    for (uint8_t b : bits) n += b;
    return n;
}

namespace {

// offsets of the disk structuring element, radius 0 == {(0,0)}
std::vector<std::pair<int, int>> disk_offsets(int radius) {
    std::vector<std::pair<int, int>> offs;
    for (int dy = -radius; dy <= radius; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
            if (dx * dx + dy * dy <= radius * radius) {
                offs.emplace_back(dx, dy);
            }
        }
    }
    return offs;
}

}  // namespace

BinaryMask morph_disk(const BinaryMask& mask, int radius, MorphMode mode) {
    if (radius < 0) {
        throw Error("morph_disk: radius must be >= 0");
    }
    const auto offs = disk_offsets(radius);
    BinaryMask out(mask.width, mask.height);
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            bool v;
            if (mode == MorphMode::Dilate) {
                v = false;
                for (auto [dx, dy] : offs) {
                    const int nx = x + dx, ny = y + dy;
                    if (nx >= 0 && nx < mask.width && ny >= 0 && ny < mask.height && mask.at(nx, ny)) {
                        v = true;
                        break;
                    }
                }
            } else {
                v = true;
                for (auto [dx, dy] : offs) {
                    const int nx = x + dx, ny = y + dy;
                    if (nx < 0 || nx >= mask.width || ny < 0 || ny >= mask.height || !mask.at(nx, ny)) {
                        v = false;
                        break;
                    }
                }
            }
            out.set(x, y, v);
        }
    }
    return out;
}

ConditionSet derive_condition_set(const AlphaMap& alpha, double radius_fraction,
                                  const ConditionParams& params) {
    if (std::min(alpha.width, alpha.height) < 2) {
        throw DegenerateAlpha("derive_condition_set: image smaller than 2 pixels per side");
    }
    const int radius =
        static_cast<int>(std::floor(radius_fraction * std::min(alpha.width, alpha.height) + 0.5));

    BinaryMask base(alpha.width, alpha.height);
    for (int y = 0; y < alpha.height; ++y) {
        for (int x = 0; x < alpha.width; ++x) {
            base.set(x, y, alpha.at(x, y) > params.tau_bin);
        }
    }

    const BinaryMask inner = morph_disk(base, radius, MorphMode::Erode);
    const BinaryMask outer = morph_disk(base, radius, MorphMode::Dilate);

    ConditionSet out;
    out.alpha  = alpha;
    out.radius = radius;
    out.trimap = Trimap(alpha.width, alpha.height);
    out.rough  = BinaryMask(alpha.width, alpha.height);
    out.precise = BinaryMask(alpha.width, alpha.height);
    for (int y = 0; y < alpha.height; ++y) {
        for (int x = 0; x < alpha.width; ++x) {
            uint8_t label = Trimap::kUnknown;
            if (inner.at(x, y)) {
                label = Trimap::kForeground;
            } else if (!outer.at(x, y)) {
                label = Trimap::kBackground;
            }
            out.trimap.set(x, y, label);
            out.rough.set(x, y, label != Trimap::kBackground);  // gray -> white
            out.precise.set(x, y, alpha.at(x, y) > params.tau_precise);
        }
    }
    return out;
}

ConditionSet derive_condition_set(const AlphaMap& alpha, uint64_t seed,
                                  const ConditionParams& params) {
    Rng rng(seed);
    return derive_condition_set(alpha, rng.uniform(0.05, 0.10), params);
}

void write_mask(const BinaryMask& mask, const std::string& path) {
    GrayImage g;
    g.width  = mask.width;
    g.height = mask.height;
    g.values.resize(mask.bits.size());
    for (size_t i = 0; i < mask.bits.size(); ++i) {
        g.values[i] = mask.bits[i] ? 255 : 0;
    }
    write_gray8(g, path);
}

BinaryMask read_mask(const std::string& path) {
    const GrayImage g = read_gray8(path);
    BinaryMask mask(g.width, g.height);
    for (size_t i = 0; i < g.values.size(); ++i) {
        mask.bits[i] = g.values[i] >= 128 ? 1 : 0;
    }
    return mask;
}

void write_trimap(const Trimap& trimap, const std::string& path) {
    GrayImage g;
    g.width  = trimap.width;
    g.height = trimap.height;
    g.values = trimap.labels;
    write_gray8(g, path);
}

Trimap read_trimap(const std::string& path) {
    const GrayImage g = read_gray8(path);
    Trimap trimap(g.width, g.height);
    for (size_t i = 0; i < g.values.size(); ++i) {
        const uint8_t v = g.values[i];
        if (v != Trimap::kBackground && v != Trimap::kUnknown && v != Trimap::kForeground) {
            throw DecodeError("read_trimap: label outside {0, 128, 255} in " + path);
        }
        trimap.labels[i] = v;
    }
    return trimap;
}

}  // namespace alphaseq
