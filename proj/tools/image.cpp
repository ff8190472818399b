#include "image.hpp"

#include <png.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <vector>

#include "betasparse/csv_io.hpp"

namespace betasparse::experiments {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const { std::fclose(f); }
};

void write_png_rows(const std::filesystem::path& path, const std::vector<unsigned char>& pixels,
                    std::size_t width, std::size_t height) {
    std::unique_ptr<std::FILE, FileCloser> file(std::fopen(path.c_str(), "wb"));
    if (!file) throw std::runtime_error("cannot open " + path.string() + " for writing");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw std::runtime_error("png: cannot create write struct");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw std::runtime_error("png: cannot create info struct");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw std::runtime_error("png: write failed for " + path.string());
    }
    png_init_io(png, file.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8,
                 PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (std::size_t r = 0; r < height; ++r) {
        png_write_row(png, const_cast<png_bytep>(pixels.data() + r * width));
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

void write_meta(const std::filesystem::path& path, double lo, double hi, std::size_t width,
                std::size_t height, const std::string& config_echo) {
    std::ofstream meta(path.string() + ".meta.txt");
    if (!meta) throw std::runtime_error("cannot write metadata for " + path.string());
    meta << "width=" << width << "\nheight=" << height << "\nmin=" << csv::format_double(lo)
         << "\nmax=" << csv::format_double(hi) << "\n"
         << "# pixel = round(255 * (value - min) / (max - min)); 0 everywhere when max == min\n"
         << config_echo;
}

}  // namespace

void write_grayscale_png(const std::filesystem::path& path, std::span<const double> values,
                         std::size_t width, std::size_t height, const std::string& config_echo) {
    if (values.size() != width * height) throw std::invalid_argument("png: size mismatch");
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = values.empty() ? 0.0 : *lo_it;
    const double hi = values.empty() ? 0.0 : *hi_it;
    std::vector<unsigned char> pixels(width * height, 0);
    for (std::size_t r = 0; r < height; ++r) {
        // PNG rows run top to bottom; data row 0 is y = 0.
        const std::size_t src_row = height - 1 - r;
        for (std::size_t c = 0; c < width; ++c) {
            const double v = values[src_row * width + c];
            const double s = hi > lo ? (v - lo) / (hi - lo) : 0.0;
            pixels[r * width + c] = static_cast<unsigned char>(std::clamp(s, 0.0, 1.0) * 255.0 + 0.5);
        }
    }
    write_png_rows(path, pixels, width, height);
    write_meta(path, lo, hi, width, height, config_echo);
}

void write_profile_png(const std::filesystem::path& path, std::span<const double> values,
                       const std::string& config_echo, std::size_t height) {
    const std::size_t bar = 4;
    const std::size_t width = std::max<std::size_t>(1, values.size() * bar);
    const double hi = values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
    std::vector<unsigned char> pixels(width * height, 255);
    for (std::size_t j = 0; j < values.size(); ++j) {
        const double s = hi > 0.0 ? std::clamp(values[j] / hi, 0.0, 1.0) : 0.0;
        const auto filled = static_cast<std::size_t>(s * static_cast<double>(height) + 0.5);
        for (std::size_t r = height - filled; r < height; ++r) {
            for (std::size_t c = j * bar; c < (j + 1) * bar; ++c) pixels[r * width + c] = 40;
        }
    }
    write_png_rows(path, pixels, width, height);
    write_meta(path, 0.0, hi, width, height, config_echo);
}

}  // namespace betasparse::experiments
