#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "alphaseq/error.hpp"

namespace alphaseq {

// Flat named-array container: name, shape, raw little-endian float32 data.
// Shared by autoencoder parameters and denoiser checkpoints.
struct NamedArray {
    std::string name;
    std::vector<int64_t> shape;
    std::vector<float> data;

    int64_t element_count() const {
        int64_t n = 1;
        for (int64_t d : shape) n *= d;
        return n;
    }
};

void save_arrays(const std::vector<NamedArray>& arrays, const std::string& path);
std::vector<NamedArray> load_arrays(const std::string& path);

}  // namespace alphaseq
