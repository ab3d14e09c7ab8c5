// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace cherry {

// Axis-aligned box in absolute pixel corner coordinates, origin top-left,
// x rightward, y downward. The universal geometry carrier.
struct AbsBox {
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 0.0;
    double y_max = 0.0;

    double width() const { return x_max - x_min; }
    double height() const { return y_max - y_min; }
    double area() const { return width() * height(); }

    bool valid() const {
        return std::isfinite(x_min) && std::isfinite(y_min) &&
               std::isfinite(x_max) && std::isfinite(y_max) &&
               x_min >= 0.0 && y_min >= 0.0 &&
               x_min <= x_max && y_min <= y_max;
    }

    AbsBox clamped(double w, double h) const {
        return {std::clamp(x_min, 0.0, w), std::clamp(y_min, 0.0, h),
                std::clamp(x_max, 0.0, w), std::clamp(y_max, 0.0, h)};
    }

    bool operator==(const AbsBox&) const = default;
};

// YOLO-convention normalized box: center plus extent, all in [0,1].
struct NormBox {
    double cx = 0.0;
    double cy = 0.0;
    double w = 0.0;
    double h = 0.0;

    bool valid() const {
        return cx >= 0.0 && cx <= 1.0 && cy >= 0.0 && cy <= 1.0 &&
               w > 0.0 && w <= 1.0 && h > 0.0 && h <= 1.0;
    }
};

struct GroundTruthBox {
    AbsBox box;
    int class_id = 0;
};

struct Detection {
    AbsBox box;
    int class_id = 0;
    double confidence = 0.0;
};

// One annotated image: identifier, dimensions and its ground-truth boxes
// in document order.
struct LabeledImage {
    std::string image_id;
    int width = 0;
    int height = 0;
    std::vector<GroundTruthBox> boxes;
};

// All detections reported for one image, in file order.
struct DetectionSet {
    std::string image_id;
    std::vector<Detection> detections;
};

}  // namespace cherry
