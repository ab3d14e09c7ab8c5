// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "cherrymetrics/imaging.hpp"
#include "cherrymetrics/types.hpp"

namespace cherry::pheno {

struct ScaleCalibration {
    double mm_per_pixel = 1.0;
};

// Seven reference colors, class ids 1..7 (light to dark on the chart).
struct PaletteEntry {
    int class_id = 0;
    img::MeanRGB reference;
};

struct ColorPalette {
    std::array<PaletteEntry, 7> classes;
};

// Palette file: one "class_id r g b" line per class, '#' comments allowed.
ColorPalette parse_palette(const std::string& text);
ColorPalette load_palette(const std::string& path);
ColorPalette default_palette();

struct BoxSize {
    double size_px = 0.0;
    double width_px = 0.0;
    double height_px = 0.0;
    double size_mm = 0.0;
    double width_mm = 0.0;
    double height_mm = 0.0;
};

struct CherryRecord {
    std::string image_id;
    int cherry_id = 0;  // 1-based, descending-confidence order
    double confidence = 0.0;
    AbsBox box;
    BoxSize size;
    img::MeanRGB mean_rgb;
    int color_class = 0;  // 1..7
    std::optional<img::MeanRGB> stem_rgb;
    AbsBox central_box;
    bool top50 = false;
};

struct SummaryRow {
    std::string image_id;
    std::size_t count = 0;
    double avg_size_mm = 0.0;
    double avg_size_mm_top50 = 0.0;
    img::MeanRGB avg_rgb;
    img::MeanRGB avg_rgb_top50;
    std::optional<img::MeanRGB> stem_avg_rgb;
    std::string timestamp;
};

struct PhenotypeConfig {
    double shrink = 0.5;  // central-region scale factor
    double rise = 0.5;    // stem-region height as a fraction of box height
};

BoxSize box_size(const AbsBox& box, const ScaleCalibration& cal);

// Box scaled about its center by `shrink` in both axes.
AbsBox central_region(const AbsBox& box, double shrink);

// Same-width rectangle directly above the box, height rise*box_height,
// clipped to the image; absent when the clipped region is empty.
std::optional<AbsBox> stem_region(const AbsBox& box, double image_w, double image_h,
                                  double rise);

// Nearest palette class by Euclidean RGB distance; ties to the lower id.
int classify_color(const img::MeanRGB& c, const ColorPalette& palette);

// Flags the k largest records by size_mm; ties break by higher confidence,
// then lower cherry_id.
void top_k_by_size(std::vector<CherryRecord>& records, std::size_t k = 50);

std::vector<CherryRecord> extract_records(const img::ImageRGB& image,
                                          const DetectionSet& dets,
                                          const ScaleCalibration& cal,
                                          const ColorPalette& palette,
                                          const PhenotypeConfig& config = {});

SummaryRow summarize(const std::vector<CherryRecord>& records,
                     const std::string& timestamp);

}  // namespace cherry::pheno
