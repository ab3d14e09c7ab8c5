// SPDX-License-Identifier: Apache-2.0

#include "cherrymetrics/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cherrymetrics/errors.hpp"

namespace cherry::img {

namespace {

// Reads one ASCII integer from the PPM header, skipping whitespace and
// '#' comment lines.
long read_header_int(const std::string& bytes, size_t& pos, const char* what) {
    while (pos < bytes.size()) {
        char c = bytes[pos];
        if (c == '#') {
            while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            ++pos;
        } else {
            break;
        }
    }
    if (pos >= bytes.size() || !std::isdigit(static_cast<unsigned char>(bytes[pos])))
        throw ParseError(std::string("bad PPM header: expected ") + what);
    long v = 0;
    while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
        v = v * 10 + (bytes[pos] - '0');
        ++pos;
    }
    return v;
}

}  // namespace

ImageRGB read_ppm(const std::string& bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '6')
        throw ParseError("not a binary PPM: magic is not 'P6'");
    size_t pos = 2;
    long w = read_header_int(bytes, pos, "width");
    long h = read_header_int(bytes, pos, "height");
    long maxval = read_header_int(bytes, pos, "maxval");
    if (w < 1 || h < 1)
        throw ValueError("bad PPM dimensions " + std::to_string(w) + "x" + std::to_string(h));
    if (maxval != 255)
        throw ValueError("unsupported PPM maxval " + std::to_string(maxval) + ", expected 255");
    if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos])))
        throw ParseError("bad PPM header: missing whitespace before pixel data");
    ++pos;

    size_t need = static_cast<size_t>(w) * h * 3;
    if (bytes.size() - pos < need)
        throw ParseError("truncated PPM payload: need " + std::to_string(need) +
                         " bytes, have " + std::to_string(bytes.size() - pos));

    ImageRGB out(static_cast<int>(w), static_cast<int>(h));
    for (size_t i = 0; i < out.pixels.size(); ++i) {
        out.pixels[i] = {static_cast<uint8_t>(bytes[pos + 3 * i]),
                         static_cast<uint8_t>(bytes[pos + 3 * i + 1]),
                         static_cast<uint8_t>(bytes[pos + 3 * i + 2])};
    }
    return out;
}

std::string write_ppm(const ImageRGB& img) {
    std::string out = "P6\n" + std::to_string(img.width) + " " +
                      std::to_string(img.height) + "\n255\n";
    out.reserve(out.size() + img.pixels.size() * 3);
    for (const auto& p : img.pixels) {
        out.push_back(static_cast<char>(p.r));
        out.push_back(static_cast<char>(p.g));
        out.push_back(static_cast<char>(p.b));
    }
    return out;
}

ImageRGB read_ppm_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    return read_ppm(buf.str());
}

void write_ppm_file(const ImageRGB& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    std::string bytes = write_ppm(img);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed for '" + path + "'");
}

ImageRGB crop(const ImageRGB& img, const AbsBox& box) {
    int x0 = std::max(0, static_cast<int>(std::floor(box.x_min)));
    int y0 = std::max(0, static_cast<int>(std::floor(box.y_min)));
    int x1 = std::min(img.width, static_cast<int>(std::ceil(box.x_max)));
    int y1 = std::min(img.height, static_cast<int>(std::ceil(box.y_max)));
    if (x0 >= x1 || y0 >= y1)
        throw GeometryError("crop region is empty: box does not intersect the image");

    ImageRGB out(x1 - x0, y1 - y0);
    for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x)
            out.at(x - x0, y - y0) = img.at(x, y);
    return out;
}

MeanRGB mean_rgb(const ImageRGB& img) {
    if (img.pixels.empty())
        throw GeometryError("mean_rgb of an empty image");
    // Exact integer accumulation, divide once.
    uint64_t r = 0, g = 0, b = 0;
    for (const auto& p : img.pixels) {
        r += p.r;
        g += p.g;
        b += p.b;
    }
    double n = static_cast<double>(img.pixels.size());
    return {r / n, g / n, b / n};
}

}  // namespace cherry::img
