#include "alphaseq/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace alphaseq {

namespace {

constexpr char kMagic[8] = {'A', 'S', 'Q', 'A', 'R', 'R', '0', '1'};

static_assert(std::endian::native == std::endian::little,
              "container I/O assumes a little-endian host");

template <typename T>
void write_pod(std::ofstream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::ifstream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    return v;
}

}  // namespace

void save_arrays(const std::vector<NamedArray>& arrays, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("save_arrays: cannot open " + path + " for writing");
    }
    out.write(kMagic, sizeof(kMagic));
    write_pod<uint64_t>(out, arrays.size());
    for (const NamedArray& a : arrays) {
        if (a.element_count() != static_cast<int64_t>(a.data.size())) {
            throw ShapeError("save_arrays: shape does not match data size for " + a.name);
        }
        write_pod<uint32_t>(out, static_cast<uint32_t>(a.name.size()));
        out.write(a.name.data(), static_cast<std::streamsize>(a.name.size()));
        write_pod<uint32_t>(out, static_cast<uint32_t>(a.shape.size()));
        for (int64_t d : a.shape) write_pod<int64_t>(out, d);
        out.write(reinterpret_cast<const char*>(a.data.data()),
                  static_cast<std::streamsize>(a.data.size() * sizeof(float)));
    }
    if (!out) {
        throw IoError("save_arrays: short write to " + path);
    }
}

std::vector<NamedArray> load_arrays(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("load_arrays: cannot open " + path);
    }
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw DecodeError("load_arrays: bad magic in " + path);
    }
    const uint64_t count = read_pod<uint64_t>(in);
    std::vector<NamedArray> arrays;
    arrays.reserve(count);
    for (uint64_t i = 0; i < count; ++i) {
        NamedArray a;
        const uint32_t name_len = read_pod<uint32_t>(in);
        a.name.resize(name_len);
        in.read(a.name.data(), name_len);
        const uint32_t ndim = read_pod<uint32_t>(in);
        a.shape.resize(ndim);
        for (uint32_t d = 0; d < ndim; ++d) a.shape[d] = read_pod<int64_t>(in);
        const int64_t n = a.element_count();
        if (!in || n < 0) {
            throw DecodeError("load_arrays: truncated header in " + path);
        }
        a.data.resize(static_cast<size_t>(n));
        in.read(reinterpret_cast<char*>(a.data.data()),
                static_cast<std::streamsize>(a.data.size() * sizeof(float)));
        if (!in) {
            throw DecodeError("load_arrays: truncated data in " + path);
        }
        arrays.push_back(std::move(a));
    }
    return arrays;
}

}  // namespace alphaseq
