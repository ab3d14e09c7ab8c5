// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "cherrymetrics/types.hpp"

namespace cherry::annot {

// Single class "cherry" = id 0 unless configuration says otherwise.
const std::vector<std::string>& default_class_list();

// Parse a PASCAL VOC XML annotation document. Boxes keep document order;
// coordinates outside [0,width]x[0,height] are clamped, with a note pushed
// to `warnings` when given.
LabeledImage parse_voc(const std::string& xml_text,
                       const std::vector<std::string>& classes = default_class_list(),
                       std::vector<std::string>* warnings = nullptr);

// Serialize to a document parse_voc accepts. Coordinates are rounded
// half-up to integers.
std::string write_voc(const LabeledImage& img,
                      const std::vector<std::string>& classes = default_class_list());

AbsBox yolo_to_absolute(const NormBox& n, double width, double height);
NormBox absolute_to_yolo(const AbsBox& box, double width, double height);

// One box per line: "class cx cy w h". Lines starting with '#' and blank
// lines are ignored.
LabeledImage parse_yolo_labels(const std::string& text, int width, int height,
                               int class_count, const std::string& image_id = "");

// Header: image_id,x_min,y_min,x_max,y_max,confidence,class_id.
// Rows grouped by image_id in first-appearance order, file order within.
std::vector<DetectionSet> parse_detections_csv(const std::string& text);

std::string write_detections_csv(const std::vector<DetectionSet>& sets);

}  // namespace cherry::annot
