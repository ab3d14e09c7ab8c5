// SPDX-License-Identifier: Apache-2.0

#include "cherrymetrics/eval.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "cherrymetrics/errors.hpp"

namespace cherry::eval {

namespace {

// Indices sorted by descending confidence, stable so ties keep input order.
std::vector<int> rank_by_confidence(const std::vector<Detection>& dets) {
    std::vector<int> order(dets.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return dets[a].confidence > dets[b].confidence;
    });
    return order;
}

}  // namespace

double iou(const AbsBox& a, const AbsBox& b) {
    double ix = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
    double iy = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
    if (ix <= 0.0 || iy <= 0.0) return 0.0;
    double inter = ix * iy;
    double uni = a.area() + b.area() - inter;
    if (uni <= 0.0) return 0.0;
    return inter / uni;
}

std::vector<Detection> nms(const std::vector<Detection>& dets, double iou_threshold) {
    std::vector<int> order = rank_by_confidence(dets);
    std::vector<bool> removed(dets.size(), false);
    std::vector<Detection> kept;
    for (size_t i = 0; i < order.size(); ++i) {
        int di = order[i];
        if (removed[di]) continue;
        kept.push_back(dets[di]);
        for (size_t j = i + 1; j < order.size(); ++j) {
            int dj = order[j];
            if (removed[dj] || dets[dj].class_id != dets[di].class_id) continue;
            if (iou(dets[di].box, dets[dj].box) > iou_threshold) removed[dj] = true;
        }
    }
    return kept;
}

MatchResult match_detections(const std::vector<Detection>& dets,
                             const std::vector<GroundTruthBox>& truths,
                             double conf_threshold, double iou_threshold) {
    MatchResult result;
    result.confidence_threshold = conf_threshold;

    std::vector<bool> truth_taken(truths.size(), false);
    for (int di : rank_by_confidence(dets)) {
        if (dets[di].confidence < conf_threshold) continue;
        int best = -1;
        double best_iou = 0.0;
        for (size_t ti = 0; ti < truths.size(); ++ti) {
            if (truth_taken[ti] || truths[ti].class_id != dets[di].class_id) continue;
            double v = iou(dets[di].box, truths[ti].box);
            if (v >= iou_threshold && v > best_iou) {
                best_iou = v;
                best = static_cast<int>(ti);
            }
        }
        if (best >= 0) {
            truth_taken[best] = true;
            result.pairs.push_back({di, best, best_iou});
        } else {
            result.false_positive_indices.push_back(di);
        }
    }
    for (size_t ti = 0; ti < truths.size(); ++ti)
        if (!truth_taken[ti]) result.false_negative_indices.push_back(static_cast<int>(ti));
    return result;
}

PRCurve pr_curve_from_ranked(std::vector<RankedDetection> ranked, long truth_count) {
    if (truth_count <= 0)
        throw StatsError("recall is undefined: zero ground-truth boxes");
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        return a.confidence > b.confidence;
    });
    PRCurve curve;
    long tp = 0, fp = 0;
    for (const auto& d : ranked) {
        if (d.is_true_positive) ++tp;
        else ++fp;
        curve.points.push_back({static_cast<double>(tp) / truth_count,
                                static_cast<double>(tp) / (tp + fp), d.confidence});
    }
    return curve;
}

PRCurve pr_curve(const std::vector<DetectionSet>& det_sets,
                 const std::vector<LabeledImage>& images, double iou_threshold) {
    std::map<std::string, const LabeledImage*> by_id;
    for (const auto& img : images) by_id[img.image_id] = &img;

    long truth_count = 0;
    for (const auto& img : images) truth_count += static_cast<long>(img.boxes.size());

    std::vector<RankedDetection> ranked;
    for (const auto& set : det_sets) {
        auto it = by_id.find(set.image_id);
        if (it == by_id.end())
            throw JoinError("no ground truth for image_id '" + set.image_id + "'");
        MatchResult m = match_detections(set.detections, it->second->boxes, 0.0, iou_threshold);
        for (const auto& p : m.pairs)
            ranked.push_back({set.detections[p.detection_index].confidence, true});
        for (int di : m.false_positive_indices)
            ranked.push_back({set.detections[di].confidence, false});
    }
    return pr_curve_from_ranked(std::move(ranked), truth_count);
}

double average_precision(const PRCurve& curve) {
    if (curve.points.empty()) return 0.0;
    // Precision envelope from the right: max precision at recall >= r.
    size_t n = curve.points.size();
    std::vector<double> envelope(n);
    double running = 0.0;
    for (size_t i = n; i-- > 0;) {
        running = std::max(running, curve.points[i].precision);
        envelope[i] = running;
    }
    double ap = 0.0;
    double prev_recall = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double r = curve.points[i].recall;
        if (r > prev_recall) ap += (r - prev_recall) * envelope[i];
        prev_recall = r;
    }
    return ap;
}

double mean_iou(const std::vector<MatchResult>& matches) {
    double sum = 0.0;
    long count = 0;
    for (const auto& m : matches) {
        for (const auto& p : m.pairs) {
            sum += p.iou;
            ++count;
        }
    }
    if (count == 0)
        throw StatsError("mean IoU is undefined: no matched pairs");
    return sum / count;
}

EvaluationReport evaluate_dataset(const std::vector<DetectionSet>& det_sets,
                                  const std::vector<LabeledImage>& images,
                                  const EvalConfig& config) {
    std::map<std::string, const LabeledImage*> by_id;
    for (const auto& img : images) by_id[img.image_id] = &img;

    EvaluationReport report;
    report.model_label = config.model_label;
    report.resize_label = config.resize_label;
    report.ct = config.ct;

    std::vector<MatchResult> matches;
    for (const auto& set : det_sets) {
        auto it = by_id.find(set.image_id);
        if (it == by_id.end())
            throw JoinError("no ground truth for image_id '" + set.image_id + "'");
        MatchResult m =
            match_detections(set.detections, it->second->boxes, config.ct, config.iou_threshold);
        report.tp += static_cast<long>(m.pairs.size());
        report.fp += static_cast<long>(m.false_positive_indices.size());
        matches.push_back(std::move(m));
        for (const auto& d : set.detections)
            if (d.confidence >= 0.1) ++report.dc;
    }
    for (const auto& img : images) report.tc += static_cast<long>(img.boxes.size());
    report.fn = report.tc - report.tp;

    report.map50 = average_precision(pr_curve(det_sets, images, 0.5));
    bool any_pair = false;
    for (const auto& m : matches) any_pair = any_pair || !m.pairs.empty();
    report.mean_iou = any_pair ? mean_iou(matches) : 0.0;
    return report;
}

}  // namespace cherry::eval
