// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "cherrymetrics/types.hpp"

namespace cherry::eval {

// One detection->truth assignment plus its overlap.
struct MatchPair {
    int detection_index = -1;
    int truth_index = -1;
    double iou = 0.0;
};

struct MatchResult {
    std::vector<MatchPair> pairs;
    std::vector<int> false_positive_indices;
    std::vector<int> false_negative_indices;
    double confidence_threshold = 0.0;
};

struct PRPoint {
    double recall = 0.0;
    double precision = 0.0;
    double confidence = 0.0;
};

struct PRCurve {
    std::vector<PRPoint> points;  // descending confidence
};

// One row of the counting/IoU accuracy tables.
struct EvaluationReport {
    std::string model_label;
    std::string resize_label;
    double ct = 0.5;
    long dc = 0;  // detections with confidence >= 0.1
    long tc = 0;  // ground-truth boxes
    long tp = 0;
    long fp = 0;
    long fn = 0;
    double map50 = 0.0;
    double mean_iou = 0.0;
};

struct EvalConfig {
    double ct = 0.5;
    double iou_threshold = 0.5;
    std::string model_label;
    std::string resize_label;
};

// Intersection area over union area; 0 for disjoint or fully degenerate pairs.
double iou(const AbsBox& a, const AbsBox& b);

// Greedy non-max suppression: keep the highest-confidence remaining
// detection, discard same-class detections with IoU strictly above the
// threshold against it. Ties break by input order.
std::vector<Detection> nms(const std::vector<Detection>& dets, double iou_threshold);

// Greedy matcher: detections in descending confidence (ties: input order),
// each claiming the unmatched same-class truth with the highest IoU >= the
// threshold.
MatchResult match_detections(const std::vector<Detection>& dets,
                             const std::vector<GroundTruthBox>& truths,
                             double conf_threshold, double iou_threshold);

// A globally ranked detection with its per-image match outcome.
struct RankedDetection {
    double confidence = 0.0;
    bool is_true_positive = false;
};

PRCurve pr_curve_from_ranked(std::vector<RankedDetection> ranked, long truth_count);

// Per-image matching at confidence threshold 0, ranked globally.
PRCurve pr_curve(const std::vector<DetectionSet>& det_sets,
                 const std::vector<LabeledImage>& images, double iou_threshold);

// All-point interpolated average precision; 0 for an empty curve.
double average_precision(const PRCurve& curve);

// Mean IoU over true-positive pairs across images.
double mean_iou(const std::vector<MatchResult>& matches);

EvaluationReport evaluate_dataset(const std::vector<DetectionSet>& det_sets,
                                  const std::vector<LabeledImage>& images,
                                  const EvalConfig& config);

}  // namespace cherry::eval
