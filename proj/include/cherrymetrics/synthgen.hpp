// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cherrymetrics/imaging.hpp"
#include "cherrymetrics/phenotype.hpp"
#include "cherrymetrics/types.hpp"

namespace cherry::synth {

// splitmix64: tiny, documented, identical output on every platform.
// Reproducibility matters more than statistical strength here.
class SplitMix64 {
public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0,1).
    double next_double() { return (next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

private:
    uint64_t state_;
};

struct SceneSpec {
    int width = 1024;
    int height = 1024;
    int cherry_count = 100;
    double radius_min = 10.0;
    double radius_max = 24.0;
    // One palette class per cherry; empty means sample uniformly from 1..7.
    std::vector<int> palette_classes;
    img::PixelRGB background{200, 200, 180};
    double min_separation = 1.0;  // minimum edge-to-edge gap between discs
    double mm_per_pixel = 0.25;
    uint64_t seed = 1;
};

struct NoiseSpec {
    double jitter_px = 0.0;    // per-corner uniform perturbation bound
    double drop_prob = 0.0;    // per-truth deletion probability
    int spurious_count = 0;
    double confidence_min = 0.5;
    double confidence_max = 1.0;
    uint64_t seed = 1;
};

struct Scene {
    img::ImageRGB image;
    LabeledImage truth;
    pheno::ScaleCalibration calibration;
    std::vector<int> palette_classes;  // per truth box, 1..7
};

// Deterministic for a fixed spec. Truth boxes are exact bounding squares
// (center +- radius); disc pixels carry the assigned palette color.
Scene generate_scene(const SceneSpec& spec,
                     const pheno::ColorPalette& palette = pheno::default_palette());

// Surviving truths become jittered detections with sampled confidences;
// spurious boxes are added uniformly at random. Deterministic per seed.
DetectionSet perturb_detections(const LabeledImage& truth, const NoiseSpec& noise);

}  // namespace cherry::synth
