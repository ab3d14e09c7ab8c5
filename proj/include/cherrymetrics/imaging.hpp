// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cherrymetrics/types.hpp"

namespace cherry::img {

struct PixelRGB {
    uint8_t r = 0;
    uint8_t g = 0;
    uint8_t b = 0;

    bool operator==(const PixelRGB&) const = default;
};

struct MeanRGB {
    double r = 0.0;
    double g = 0.0;
    double b = 0.0;

    bool operator==(const MeanRGB&) const = default;
};

// 8-bit RGB raster, row-major, top row first.
struct ImageRGB {
    int width = 0;
    int height = 0;
    std::vector<PixelRGB> pixels;

    ImageRGB() = default;
    ImageRGB(int w, int h, PixelRGB fill = {})
        : width(w), height(h), pixels(static_cast<size_t>(w) * h, fill) {}

    PixelRGB& at(int x, int y) { return pixels[static_cast<size_t>(y) * width + x]; }
    const PixelRGB& at(int x, int y) const { return pixels[static_cast<size_t>(y) * width + x]; }

    bool operator==(const ImageRGB&) const = default;
};

// Binary portable pixmap (P6, maxval 255) only.
ImageRGB read_ppm(const std::string& bytes);
std::string write_ppm(const ImageRGB& img);

ImageRGB read_ppm_file(const std::string& path);
void write_ppm_file(const ImageRGB& img, const std::string& path);

// Sub-image covering columns floor(x_min)..ceil(x_max)-1 and rows
// floor(y_min)..ceil(y_max)-1, intersected with the image rectangle.
ImageRGB crop(const ImageRGB& img, const AbsBox& box);

MeanRGB mean_rgb(const ImageRGB& img);

}  // namespace cherry::img
