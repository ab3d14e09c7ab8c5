// SPDX-License-Identifier: Apache-2.0

#include "cherrymetrics/phenotype.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "cherrymetrics/errors.hpp"

namespace cherry::pheno {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double dist2(const img::MeanRGB& a, const img::MeanRGB& b) {
    double dr = a.r - b.r, dg = a.g - b.g, db = a.b - b.b;
    return dr * dr + dg * dg + db * db;
}

}  // namespace

ColorPalette parse_palette(const std::string& text) {
    ColorPalette palette;
    std::array<bool, 7> seen{};
    std::istringstream lines(text);
    std::string line;
    size_t line_no = 0;
    while (std::getline(lines, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::istringstream tok(t);
        int id;
        double r, g, b;
        if (!(tok >> id >> r >> g >> b))
            throw ParseError("palette line " + std::to_string(line_no) +
                             ": expected 'class_id r g b'");
        std::string extra;
        if (tok >> extra)
            throw ParseError("palette line " + std::to_string(line_no) + ": trailing content");
        if (id < 1 || id > 7)
            throw ValueError("palette line " + std::to_string(line_no) + ": class id " +
                             std::to_string(id) + " outside 1..7");
        if (seen[id - 1])
            throw ValueError("palette: duplicate class id " + std::to_string(id));
        if (r < 0 || r > 255 || g < 0 || g > 255 || b < 0 || b > 255)
            throw ValueError("palette line " + std::to_string(line_no) +
                             ": channel values must lie in [0,255]");
        seen[id - 1] = true;
        palette.classes[id - 1] = {id, {r, g, b}};
    }
    for (int i = 0; i < 7; ++i)
        if (!seen[i])
            throw ValueError("palette: missing class id " + std::to_string(i + 1));
    for (int i = 0; i < 7; ++i)
        for (int j = i + 1; j < 7; ++j)
            if (palette.classes[i].reference == palette.classes[j].reference)
                throw ValueError("palette: classes " + std::to_string(i + 1) + " and " +
                                 std::to_string(j + 1) + " share a reference color");
    return palette;
}

ColorPalette load_palette(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open palette file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_palette(buf.str());
}

ColorPalette default_palette() {
    // Placeholder chart values, light red through dark mahogany. Real runs
    // should calibrate these from a photographed chart (see the shipped
    // palette file).
    static const ColorPalette palette = parse_palette(
        "1 229 106 95\n"
        "2 203 66 58\n"
        "3 171 40 41\n"
        "4 132 24 32\n"
        "5 98 16 26\n"
        "6 68 11 20\n"
        "7 42 7 13\n");
    return palette;
}

BoxSize box_size(const AbsBox& box, const ScaleCalibration& cal) {
    double w = box.width();
    double h = box.height();
    if (w <= 0.0 || h <= 0.0)
        throw GeometryError("degenerate box has no size");
    BoxSize s;
    s.width_px = w;
    s.height_px = h;
    s.size_px = std::max(w, h);
    s.width_mm = w * cal.mm_per_pixel;
    s.height_mm = h * cal.mm_per_pixel;
    s.size_mm = s.size_px * cal.mm_per_pixel;
    return s;
}

AbsBox central_region(const AbsBox& box, double shrink) {
    double cx = (box.x_min + box.x_max) / 2.0;
    double cy = (box.y_min + box.y_max) / 2.0;
    double hw = box.width() / 2.0 * shrink;
    double hh = box.height() / 2.0 * shrink;
    return {cx - hw, cy - hh, cx + hw, cy + hh};
}

std::optional<AbsBox> stem_region(const AbsBox& box, double image_w, double image_h,
                                  double rise) {
    AbsBox region{box.x_min, box.y_min - rise * box.height(), box.x_max, box.y_min};
    AbsBox clipped{std::clamp(region.x_min, 0.0, image_w),
                   std::clamp(region.y_min, 0.0, image_h),
                   std::clamp(region.x_max, 0.0, image_w),
                   std::clamp(region.y_max, 0.0, image_h)};
    if (clipped.width() <= 0.0 || clipped.height() <= 0.0) return std::nullopt;
    return clipped;
}

int classify_color(const img::MeanRGB& c, const ColorPalette& palette) {
    int best_id = 0;
    double best = 0.0;
    for (const auto& entry : palette.classes) {
        double d = dist2(c, entry.reference);
        if (best_id == 0 || d < best || (d == best && entry.class_id < best_id)) {
            best = d;
            best_id = entry.class_id;
        }
    }
    return best_id;
}

void top_k_by_size(std::vector<CherryRecord>& records, std::size_t k) {
    std::vector<size_t> order(records.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        if (records[a].size.size_mm != records[b].size.size_mm)
            return records[a].size.size_mm > records[b].size.size_mm;
        if (records[a].confidence != records[b].confidence)
            return records[a].confidence > records[b].confidence;
        return records[a].cherry_id < records[b].cherry_id;
    });
    for (size_t i = 0; i < order.size(); ++i)
        records[order[i]].top50 = i < k;
}

std::vector<CherryRecord> extract_records(const img::ImageRGB& image,
                                          const DetectionSet& dets,
                                          const ScaleCalibration& cal,
                                          const ColorPalette& palette,
                                          const PhenotypeConfig& config) {
    // cherry_id by descending confidence, ties in file order.
    std::vector<size_t> order(dets.detections.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return dets.detections[a].confidence > dets.detections[b].confidence;
    });

    std::vector<CherryRecord> records;
    records.reserve(order.size());
    for (size_t rank = 0; rank < order.size(); ++rank) {
        const Detection& det = dets.detections[order[rank]];
        CherryRecord rec;
        rec.image_id = dets.image_id;
        rec.cherry_id = static_cast<int>(rank + 1);
        rec.confidence = det.confidence;
        rec.box = det.box;
        try {
            rec.size = box_size(det.box, cal);
            rec.central_box = central_region(det.box, config.shrink);
            rec.mean_rgb = img::mean_rgb(img::crop(image, rec.central_box));
            rec.color_class = classify_color(rec.mean_rgb, palette);
            if (auto stem = stem_region(det.box, image.width, image.height, config.rise))
                rec.stem_rgb = img::mean_rgb(img::crop(image, *stem));
        } catch (const Error& e) {
            throw GeometryError("cherry " + std::to_string(rec.cherry_id) + " in '" +
                                dets.image_id + "': " + e.what());
        }
        records.push_back(std::move(rec));
    }
    top_k_by_size(records);
    return records;
}

SummaryRow summarize(const std::vector<CherryRecord>& records,
                     const std::string& timestamp) {
    if (records.empty())
        throw StatsError("cannot summarize an image with no cherry records");
    for (const auto& rec : records)
        if (rec.image_id != records.front().image_id)
            throw JoinError("summarize called with mixed image_ids: '" +
                            records.front().image_id + "' vs '" + rec.image_id + "'");
    SummaryRow row;
    row.image_id = records.front().image_id;
    row.count = records.size();
    row.timestamp = timestamp;

    double size_sum = 0.0, size_sum50 = 0.0;
    img::MeanRGB rgb_sum{}, rgb_sum50{}, stem_sum{};
    size_t n50 = 0, n_stem = 0;
    for (const auto& rec : records) {
        size_sum += rec.size.size_mm;
        rgb_sum.r += rec.mean_rgb.r;
        rgb_sum.g += rec.mean_rgb.g;
        rgb_sum.b += rec.mean_rgb.b;
        if (rec.top50) {
            ++n50;
            size_sum50 += rec.size.size_mm;
            rgb_sum50.r += rec.mean_rgb.r;
            rgb_sum50.g += rec.mean_rgb.g;
            rgb_sum50.b += rec.mean_rgb.b;
        }
        if (rec.stem_rgb) {
            ++n_stem;
            stem_sum.r += rec.stem_rgb->r;
            stem_sum.g += rec.stem_rgb->g;
            stem_sum.b += rec.stem_rgb->b;
        }
    }
    if (n50 == 0)
        throw StatsError("no top-50 flags set; run top_k_by_size before summarize");
    double n = static_cast<double>(records.size());
    row.avg_size_mm = size_sum / n;
    row.avg_rgb = {rgb_sum.r / n, rgb_sum.g / n, rgb_sum.b / n};
    row.avg_size_mm_top50 = size_sum50 / static_cast<double>(n50);
    row.avg_rgb_top50 = {rgb_sum50.r / n50, rgb_sum50.g / n50, rgb_sum50.b / n50};
    if (n_stem > 0)
        row.stem_avg_rgb = img::MeanRGB{stem_sum.r / n_stem, stem_sum.g / n_stem,
                                        stem_sum.b / n_stem};
    return row;
}

}  // namespace cherry::pheno
