#include "fpsim/png_io.hpp"

#include <cstdio>
#include <memory>
#include <vector>

#include <png.h>

namespace fpsim {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FileHandle = std::unique_ptr<std::FILE, FileCloser>;

} // namespace

SemanticImage read_indexed_png(const std::filesystem::path& file) {
    FileHandle fp(std::fopen(file.c_str(), "rb"));
    if (!fp) throw UnreadableImage("cannot open image: " + file.string());

    png_byte header[8];
    if (std::fread(header, 1, 8, fp.get()) != 8 || png_sig_cmp(header, 0, 8) != 0) {
        throw UnreadableImage("not a PNG file: " + file.string());
    }

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw UnreadableImage("libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw UnreadableImage("libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw UnreadableImage("PNG decode failed: " + file.string());
    }
    png_init_io(png, fp.get());
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);

    png_uint_32 width = png_get_image_width(png, info);
    png_uint_32 height = png_get_image_height(png, info);
    int bit_depth = png_get_bit_depth(png, info);
    int color_type = png_get_color_type(png, info);

    if (color_type != PNG_COLOR_TYPE_PALETTE && color_type != PNG_COLOR_TYPE_GRAY) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw UnreadableImage("expected 8-bit single-channel PNG (palette or gray): " + file.string());
    }
    if (bit_depth > 8) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw UnreadableImage("expected bit depth <= 8: " + file.string());
    }
    if (bit_depth < 8) png_set_packing(png); // one byte per pixel, raw index
    png_read_update_info(png, info);

    SemanticImage image(static_cast<int>(width), static_cast<int>(height), 0);
    std::vector<png_bytep> rows(height);
    for (png_uint_32 y = 0; y < height; ++y) {
        rows[y] = reinterpret_cast<png_bytep>(&image.labels[image.index(0, static_cast<int>(y))]);
    }
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return image;
}

void write_indexed_png(const std::filesystem::path& file, const SemanticImage& image) {
    FileHandle fp(std::fopen(file.c_str(), "wb"));
    if (!fp) throw Error("cannot write image: " + file.string());

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw Error("libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw Error("libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw Error("PNG encode failed: " + file.string());
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(image.width),
                 static_cast<png_uint_32>(image.height), 8, PNG_COLOR_TYPE_PALETTE,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);

    // Deterministic palette: spread hues so distinct codes are visually
    // distinct in any image viewer. The decoder only cares about indices.
    png_color palette[256];
    for (int i = 0; i < 256; ++i) {
        palette[i].red = static_cast<png_byte>((i * 67) % 256);
        palette[i].green = static_cast<png_byte>((i * 151) % 256);
        palette[i].blue = static_cast<png_byte>((i * 223) % 256);
    }
    png_set_PLTE(png, info, palette, 256);
    png_write_info(png, info);

    std::vector<png_bytep> rows(image.height);
    for (int y = 0; y < image.height; ++y) {
        rows[y] = const_cast<png_bytep>(
            reinterpret_cast<png_const_bytep>(&image.labels[image.index(0, y)]));
    }
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

} // namespace fpsim
