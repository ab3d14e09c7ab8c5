// SPDX-License-Identifier: Apache-2.0

#include "cherrymetrics/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cherrymetrics/errors.hpp"

namespace cherry::synth {

namespace {

struct Disc {
    double cx, cy, r;
    int palette_class;
};

}  // namespace

Scene generate_scene(const SceneSpec& spec, const pheno::ColorPalette& palette) {
    if (spec.width < 1 || spec.height < 1)
        throw ValueError("scene dimensions must be positive");
    if (spec.cherry_count < 0)
        throw ValueError("cherry count must be non-negative");
    if (spec.radius_min <= 0 || spec.radius_max < spec.radius_min)
        throw ValueError("radius range must satisfy 0 < min <= max");
    if (!spec.palette_classes.empty() &&
        spec.palette_classes.size() != static_cast<size_t>(spec.cherry_count))
        throw ValueError("palette_classes must be empty or one entry per cherry");
    for (int c : spec.palette_classes)
        if (c < 1 || c > 7) throw ValueError("palette class " + std::to_string(c) + " outside 1..7");
    if (2.0 * spec.radius_max > spec.width || 2.0 * spec.radius_max > spec.height)
        throw ValueError("largest disc does not fit inside the scene");

    SplitMix64 rng(spec.seed);
    std::vector<Disc> discs;
    const long max_attempts = 10L * std::max(spec.cherry_count, 1) * 1000L;
    long attempts = 0;
    while (static_cast<int>(discs.size()) < spec.cherry_count) {
        if (++attempts > max_attempts)
            throw GeometryError("disc placement failed: could not satisfy min_separation " +
                                std::to_string(spec.min_separation) + " after " +
                                std::to_string(max_attempts) + " attempts");
        double r = rng.uniform(spec.radius_min, spec.radius_max);
        double cx = rng.uniform(r, spec.width - r);
        double cy = rng.uniform(r, spec.height - r);
        bool ok = true;
        for (const auto& d : discs) {
            double dist = std::hypot(cx - d.cx, cy - d.cy);
            if (dist < r + d.r + spec.min_separation) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        int cls = spec.palette_classes.empty()
                      ? 1 + static_cast<int>(rng.next() % 7)
                      : spec.palette_classes[discs.size()];
        discs.push_back({cx, cy, r, cls});
    }

    Scene scene;
    scene.image = img::ImageRGB(spec.width, spec.height, spec.background);
    scene.truth.image_id = "synthetic_" + std::to_string(spec.seed);
    scene.truth.width = spec.width;
    scene.truth.height = spec.height;
    scene.calibration.mm_per_pixel = spec.mm_per_pixel;

    for (const auto& d : discs) {
        const img::MeanRGB& ref = palette.classes[d.palette_class - 1].reference;
        img::PixelRGB color{static_cast<uint8_t>(std::lround(ref.r)),
                            static_cast<uint8_t>(std::lround(ref.g)),
                            static_cast<uint8_t>(std::lround(ref.b))};
        int x0 = std::max(0, static_cast<int>(std::floor(d.cx - d.r)));
        int x1 = std::min(spec.width - 1, static_cast<int>(std::ceil(d.cx + d.r)));
        int y0 = std::max(0, static_cast<int>(std::floor(d.cy - d.r)));
        int y1 = std::min(spec.height - 1, static_cast<int>(std::ceil(d.cy + d.r)));
        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) {
                double dx = x + 0.5 - d.cx;
                double dy = y + 0.5 - d.cy;
                if (dx * dx + dy * dy <= d.r * d.r) scene.image.at(x, y) = color;
            }
        }
        scene.truth.boxes.push_back({{d.cx - d.r, d.cy - d.r, d.cx + d.r, d.cy + d.r}, 0});
        scene.palette_classes.push_back(d.palette_class);
    }
    return scene;
}

DetectionSet perturb_detections(const LabeledImage& truth, const NoiseSpec& noise) {
    if (noise.drop_prob < 0.0 || noise.drop_prob > 1.0)
        throw ValueError("drop_prob must lie in [0,1]");
    if (noise.jitter_px < 0.0)
        throw ValueError("jitter_px must be non-negative");
    if (noise.spurious_count < 0)
        throw ValueError("spurious_count must be non-negative");
    if (noise.confidence_min < 0.0 || noise.confidence_max > 1.0 ||
        noise.confidence_min > noise.confidence_max)
        throw ValueError("confidence range must satisfy 0 <= min <= max <= 1");

    SplitMix64 rng(noise.seed);
    double w = truth.width, h = truth.height;
    DetectionSet out;
    out.image_id = truth.image_id;

    for (const auto& gt : truth.boxes) {
        if (noise.drop_prob > 0.0 && rng.next_double() < noise.drop_prob) continue;
        AbsBox b = gt.box;
        if (noise.jitter_px > 0.0) {
            b.x_min += rng.uniform(-noise.jitter_px, noise.jitter_px);
            b.y_min += rng.uniform(-noise.jitter_px, noise.jitter_px);
            b.x_max += rng.uniform(-noise.jitter_px, noise.jitter_px);
            b.y_max += rng.uniform(-noise.jitter_px, noise.jitter_px);
            if (b.x_min > b.x_max) std::swap(b.x_min, b.x_max);
            if (b.y_min > b.y_max) std::swap(b.y_min, b.y_max);
            b = b.clamped(w, h);
        }
        out.detections.push_back(
            {b, gt.class_id, rng.uniform(noise.confidence_min, noise.confidence_max)});
    }
    for (int i = 0; i < noise.spurious_count; ++i) {
        double bw = rng.uniform(4.0, std::max(8.0, w / 8.0));
        double bh = rng.uniform(4.0, std::max(8.0, h / 8.0));
        double x0 = rng.uniform(0.0, std::max(1.0, w - bw));
        double y0 = rng.uniform(0.0, std::max(1.0, h - bh));
        AbsBox b = AbsBox{x0, y0, x0 + bw, y0 + bh}.clamped(w, h);
        out.detections.push_back(
            {b, 0, rng.uniform(noise.confidence_min, noise.confidence_max)});
    }
    return out;
}

}  // namespace cherry::synth
