#include "alphaseq/image_io.hpp"

#include <png.h>

#include <cstdio>
#include <memory>

namespace alphaseq {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

// libpng reports errors through longjmp; keep everything reachable after the
// jump on the heap and rethrow as DecodeError.
struct PngRows {
    std::vector<uint8_t> pixels;
    std::vector<png_bytep> rows;
};

}  // namespace

RgbaImage read_image(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) {
        throw IoError("read_image: cannot open " + path);
    }

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw DecodeError("read_image: png_create_read_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw DecodeError("read_image: png_create_info_struct failed");
    }

    auto storage = std::make_unique<PngRows>();
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw DecodeError("read_image: malformed PNG " + path);
    }

    png_init_io(png, fp.get());
    png_read_info(png, info);

    const int bit_depth  = png_get_bit_depth(png, info);
    const int color_type = png_get_color_type(png, info);

    // normalize everything to RGBA at the native 8/16-bit depth
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA) {
        png_set_gray_to_rgb(png);
    }
    png_set_add_alpha(png, 0xFFFF, PNG_FILLER_AFTER);
    if (bit_depth == 16) png_set_swap(png);  // PNG is big-endian on disk

    png_read_update_info(png, info);

    const png_uint_32 w = png_get_image_width(png, info);
    const png_uint_32 h = png_get_image_height(png, info);
    const int out_depth = png_get_bit_depth(png, info);
    const size_t stride = png_get_rowbytes(png, info);

    storage->pixels.resize(stride * h);
    storage->rows.resize(h);
    for (png_uint_32 y = 0; y < h; ++y) {
        storage->rows[y] = storage->pixels.data() + stride * y;
    }
    png_read_image(png, storage->rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    RgbaImage img(static_cast<int>(w), static_cast<int>(h));
    if (out_depth == 16) {
        for (png_uint_32 y = 0; y < h; ++y) {
            const uint16_t* row = reinterpret_cast<const uint16_t*>(storage->pixels.data() + stride * y);
            for (png_uint_32 x = 0; x < w; ++x) {
                for (int c = 0; c < 4; ++c) {
                    img.at(static_cast<int>(x), static_cast<int>(y), c) = row[x * 4 + c] / 65535.0;
                }
            }
        }
    } else {
        for (png_uint_32 y = 0; y < h; ++y) {
            const uint8_t* row = storage->pixels.data() + stride * y;
            for (png_uint_32 x = 0; x < w; ++x) {
                for (int c = 0; c < 4; ++c) {
                    img.at(static_cast<int>(x), static_cast<int>(y), c) = row[x * 4 + c] / 255.0;
                }
            }
        }
    }
    return img;
}

namespace {

void write_png(const std::string& path, int w, int h, int color_type, int bit_depth,
               const std::vector<uint8_t>& pixels, size_t stride) {
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) {
        throw IoError("write_image: cannot open " + path + " for writing");
    }

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("write_image: png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("write_image: png_create_info_struct failed");
    }

    auto rows = std::make_unique<std::vector<png_bytep>>(h);
    for (int y = 0; y < h; ++y) {
        (*rows)[y] = const_cast<png_bytep>(pixels.data() + stride * y);
    }

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("write_image: PNG encode failed for " + path);
    }

    png_init_io(png, fp.get());
    png_set_IHDR(png, info, w, h, bit_depth, color_type,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    if (bit_depth == 16) png_set_swap(png);
    png_write_image(png, rows->data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

}  // namespace

void write_image(const RgbaImage& img, const std::string& path, int bit_depth) {
    if (bit_depth != 8 && bit_depth != 16) {
        throw Error("write_image: bit depth must be 8 or 16");
    }
    const int w = img.width;
    const int h = img.height;
    if (w < 1 || h < 1) {
        throw Error("write_image: empty image");
    }

    std::vector<uint8_t> pixels;
    size_t stride = 0;
    if (bit_depth == 8) {
        stride = static_cast<size_t>(w) * 4;
        pixels.resize(stride * h);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                for (int c = 0; c < 4; ++c) {
                    pixels[stride * y + x * 4 + c] = quantize8(img.at(x, y, c));
                }
            }
        }
    } else {
        stride = static_cast<size_t>(w) * 8;
        pixels.resize(stride * h);
        for (int y = 0; y < h; ++y) {
            uint16_t* row = reinterpret_cast<uint16_t*>(pixels.data() + stride * y);
            for (int x = 0; x < w; ++x) {
                for (int c = 0; c < 4; ++c) {
                    row[x * 4 + c] = quantize16(img.at(x, y, c));
                }
            }
        }
    }
    write_png(path, w, h, PNG_COLOR_TYPE_RGB_ALPHA, bit_depth, pixels, stride);
}

GrayImage read_gray8(const std::string& path) {
    const RgbaImage img = read_image(path);
    GrayImage out;
    out.width  = img.width;
    out.height = img.height;
    out.values.resize(img.pixel_count());
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            out.values[static_cast<size_t>(y) * img.width + x] = quantize8(img.at(x, y, 0));
        }
    }
    return out;
}

void write_gray8(const GrayImage& img, const std::string& path) {
    if (img.width < 1 || img.height < 1 ||
        img.values.size() != static_cast<size_t>(img.width) * img.height) {
        throw Error("write_gray8: inconsistent dimensions");
    }
    const size_t stride = static_cast<size_t>(img.width);
    std::vector<uint8_t> pixels(img.values.begin(), img.values.end());
    write_png(path, img.width, img.height, PNG_COLOR_TYPE_GRAY, 8, pixels, stride);
}

AlphaMap read_alpha(const std::string& path) {
    const RgbaImage img = read_image(path);
    AlphaMap out(img.width, img.height);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            out.at(x, y) = img.at(x, y, 0);
        }
    }
    return out;
}

void write_alpha(const AlphaMap& alpha, const std::string& path, int bit_depth) {
    if (bit_depth == 8) {
        GrayImage g;
        g.width  = alpha.width;
        g.height = alpha.height;
        g.values.resize(alpha.values.size());
        for (size_t i = 0; i < alpha.values.size(); ++i) {
            g.values[i] = quantize8(alpha.values[i]);
        }
        write_gray8(g, path);
        return;
    }
    if (bit_depth != 16) {
        throw Error("write_alpha: bit depth must be 8 or 16");
    }
    const size_t stride = static_cast<size_t>(alpha.width) * 2;
    std::vector<uint8_t> pixels(stride * alpha.height);
    for (int y = 0; y < alpha.height; ++y) {
        uint16_t* row = reinterpret_cast<uint16_t*>(pixels.data() + stride * y);
        for (int x = 0; x < alpha.width; ++x) {
            row[x] = quantize16(alpha.at(x, y));
        }
    }
    write_png(path, alpha.width, alpha.height, PNG_COLOR_TYPE_GRAY, 16, pixels, stride);
}

}  // namespace alphaseq
