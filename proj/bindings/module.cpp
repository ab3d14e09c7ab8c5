// SPDX-License-Identifier: Apache-2.0

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cherrymetrics/annot_io.hpp"
#include "cherrymetrics/errors.hpp"
#include "cherrymetrics/eval.hpp"
#include "cherrymetrics/imaging.hpp"
#include "cherrymetrics/phenotype.hpp"
#include "cherrymetrics/reporting.hpp"
#include "cherrymetrics/stats.hpp"
#include "cherrymetrics/synthgen.hpp"

namespace py = pybind11;
using namespace cherry;

PYBIND11_MODULE(_core, m) {
    m.doc() = "cherrymetrics core: detection evaluation and fruit phenotyping";

    py::register_exception<Error>(m, "CherryError", PyExc_ValueError);

    // ----- geometry & detection types -----------------------------------
    py::class_<AbsBox>(m, "AbsBox")
        .def(py::init<>())
        .def(py::init<double, double, double, double>(), py::arg("x_min"), py::arg("y_min"),
             py::arg("x_max"), py::arg("y_max"))
        .def_readwrite("x_min", &AbsBox::x_min)
        .def_readwrite("y_min", &AbsBox::y_min)
        .def_readwrite("x_max", &AbsBox::x_max)
        .def_readwrite("y_max", &AbsBox::y_max)
        .def("width", &AbsBox::width)
        .def("height", &AbsBox::height)
        .def("area", &AbsBox::area)
        .def("__repr__", [](const AbsBox& b) {
            return "AbsBox(" + std::to_string(b.x_min) + ", " + std::to_string(b.y_min) +
                   ", " + std::to_string(b.x_max) + ", " + std::to_string(b.y_max) + ")";
        });

    py::class_<NormBox>(m, "NormBox")
        .def(py::init<>())
        .def(py::init<double, double, double, double>(), py::arg("cx"), py::arg("cy"),
             py::arg("w"), py::arg("h"))
        .def_readwrite("cx", &NormBox::cx)
        .def_readwrite("cy", &NormBox::cy)
        .def_readwrite("w", &NormBox::w)
        .def_readwrite("h", &NormBox::h);

    py::class_<GroundTruthBox>(m, "GroundTruthBox")
        .def(py::init<>())
        .def_readwrite("box", &GroundTruthBox::box)
        .def_readwrite("class_id", &GroundTruthBox::class_id);

    py::class_<Detection>(m, "Detection")
        .def(py::init<>())
        .def(py::init([](const AbsBox& box, int class_id, double confidence) {
                 return Detection{box, class_id, confidence};
             }),
             py::arg("box"), py::arg("class_id") = 0, py::arg("confidence") = 0.0)
        .def_readwrite("box", &Detection::box)
        .def_readwrite("class_id", &Detection::class_id)
        .def_readwrite("confidence", &Detection::confidence);

    py::class_<LabeledImage>(m, "LabeledImage")
        .def(py::init<>())
        .def_readwrite("image_id", &LabeledImage::image_id)
        .def_readwrite("width", &LabeledImage::width)
        .def_readwrite("height", &LabeledImage::height)
        .def_readwrite("boxes", &LabeledImage::boxes);

    py::class_<DetectionSet>(m, "DetectionSet")
        .def(py::init<>())
        .def_readwrite("image_id", &DetectionSet::image_id)
        .def_readwrite("detections", &DetectionSet::detections);

    // ----- annotation formats -------------------------------------------
    m.def("parse_voc",
          [](const std::string& xml) { return annot::parse_voc(xml); },
          py::arg("xml_text"));
    m.def("write_voc",
          [](const LabeledImage& img) { return annot::write_voc(img); }, py::arg("image"));
    m.def("yolo_to_absolute", &annot::yolo_to_absolute, py::arg("box"), py::arg("width"),
          py::arg("height"));
    m.def("absolute_to_yolo", &annot::absolute_to_yolo, py::arg("box"), py::arg("width"),
          py::arg("height"));
    m.def("parse_yolo_labels", &annot::parse_yolo_labels, py::arg("text"), py::arg("width"),
          py::arg("height"), py::arg("class_count"), py::arg("image_id") = "");
    m.def("parse_detections_csv", &annot::parse_detections_csv, py::arg("text"));
    m.def("write_detections_csv", &annot::write_detections_csv, py::arg("sets"));

    // ----- evaluation ----------------------------------------------------
    py::class_<eval::MatchPair>(m, "MatchPair")
        .def_readonly("detection_index", &eval::MatchPair::detection_index)
        .def_readonly("truth_index", &eval::MatchPair::truth_index)
        .def_readonly("iou", &eval::MatchPair::iou);

    py::class_<eval::MatchResult>(m, "MatchResult")
        .def_readonly("pairs", &eval::MatchResult::pairs)
        .def_readonly("false_positive_indices", &eval::MatchResult::false_positive_indices)
        .def_readonly("false_negative_indices", &eval::MatchResult::false_negative_indices)
        .def_readonly("confidence_threshold", &eval::MatchResult::confidence_threshold);

    py::class_<eval::EvaluationReport>(m, "EvaluationReport")
        .def_readwrite("model_label", &eval::EvaluationReport::model_label)
        .def_readwrite("resize_label", &eval::EvaluationReport::resize_label)
        .def_readonly("ct", &eval::EvaluationReport::ct)
        .def_readonly("dc", &eval::EvaluationReport::dc)
        .def_readonly("tc", &eval::EvaluationReport::tc)
        .def_readonly("tp", &eval::EvaluationReport::tp)
        .def_readonly("fp", &eval::EvaluationReport::fp)
        .def_readonly("fn", &eval::EvaluationReport::fn)
        .def_readonly("map50", &eval::EvaluationReport::map50)
        .def_readonly("mean_iou", &eval::EvaluationReport::mean_iou);

    m.def("iou", &eval::iou, py::arg("a"), py::arg("b"));
    m.def("nms", &eval::nms, py::arg("detections"), py::arg("iou_threshold"));
    m.def("match_detections", &eval::match_detections, py::arg("detections"),
          py::arg("truths"), py::arg("conf_threshold"), py::arg("iou_threshold"));
    m.def(
        "evaluate_dataset",
        [](const std::vector<DetectionSet>& dets, const std::vector<LabeledImage>& images,
           double ct, double iou_threshold, const std::string& model,
           const std::string& resize) {
            return eval::evaluate_dataset(dets, images, {ct, iou_threshold, model, resize});
        },
        py::arg("det_sets"), py::arg("images"), py::arg("ct") = 0.5,
        py::arg("iou_threshold") = 0.5, py::arg("model_label") = "",
        py::arg("resize_label") = "");

    // ----- statistics ----------------------------------------------------
    py::class_<stats::StatsSummary>(m, "StatsSummary")
        .def_readonly("n", &stats::StatsSummary::n)
        .def_readonly("r", &stats::StatsSummary::r)
        .def_readonly("ci_low", &stats::StatsSummary::ci_low)
        .def_readonly("ci_high", &stats::StatsSummary::ci_high)
        .def_readonly("p_value", &stats::StatsSummary::p_value)
        .def_readonly("covariance", &stats::StatsSummary::covariance)
        .def_readonly("mean_x", &stats::StatsSummary::mean_x)
        .def_readonly("mean_y", &stats::StatsSummary::mean_y)
        .def_readonly("sd_x", &stats::StatsSummary::sd_x)
        .def_readonly("sd_y", &stats::StatsSummary::sd_y)
        .def_readonly("slope", &stats::StatsSummary::slope)
        .def_readonly("intercept", &stats::StatsSummary::intercept)
        .def_readonly("r_squared", &stats::StatsSummary::r_squared);

    m.def("pearson", &stats::pearson, py::arg("x"), py::arg("y"));
    m.def("fisher_ci", &stats::fisher_ci, py::arg("r"), py::arg("n"),
          py::arg("level") = 0.95);
    m.def("p_value", &stats::p_value, py::arg("r"), py::arg("n"));
    m.def(
        "ols_fit",
        [](const std::vector<double>& x, const std::vector<double>& y) {
            stats::LinearFit fit = stats::ols_fit(x, y);
            return py::make_tuple(fit.slope, fit.intercept, fit.r_squared);
        },
        py::arg("x"), py::arg("y"));
    m.def("stats_summary", &stats::summarize, py::arg("x"), py::arg("y"),
          py::arg("level") = 0.95);

    // ----- synthetic scenes ----------------------------------------------
    py::class_<synth::SceneSpec>(m, "SceneSpec")
        .def(py::init<>())
        .def_readwrite("width", &synth::SceneSpec::width)
        .def_readwrite("height", &synth::SceneSpec::height)
        .def_readwrite("cherry_count", &synth::SceneSpec::cherry_count)
        .def_readwrite("radius_min", &synth::SceneSpec::radius_min)
        .def_readwrite("radius_max", &synth::SceneSpec::radius_max)
        .def_readwrite("palette_classes", &synth::SceneSpec::palette_classes)
        .def_readwrite("min_separation", &synth::SceneSpec::min_separation)
        .def_readwrite("mm_per_pixel", &synth::SceneSpec::mm_per_pixel)
        .def_readwrite("seed", &synth::SceneSpec::seed);

    py::class_<synth::NoiseSpec>(m, "NoiseSpec")
        .def(py::init<>())
        .def_readwrite("jitter_px", &synth::NoiseSpec::jitter_px)
        .def_readwrite("drop_prob", &synth::NoiseSpec::drop_prob)
        .def_readwrite("spurious_count", &synth::NoiseSpec::spurious_count)
        .def_readwrite("confidence_min", &synth::NoiseSpec::confidence_min)
        .def_readwrite("confidence_max", &synth::NoiseSpec::confidence_max)
        .def_readwrite("seed", &synth::NoiseSpec::seed);

    py::class_<synth::Scene>(m, "Scene")
        .def_readonly("truth", &synth::Scene::truth)
        .def_readonly("palette_classes", &synth::Scene::palette_classes)
        .def_property_readonly("mm_per_pixel",
                               [](const synth::Scene& s) {
                                   return s.calibration.mm_per_pixel;
                               })
        .def_property_readonly("image_bytes", [](const synth::Scene& s) {
            return py::bytes(img::write_ppm(s.image));
        });

    m.def("generate_scene",
          [](const synth::SceneSpec& spec) { return synth::generate_scene(spec); },
          py::arg("spec"));
    m.def("perturb_detections", &synth::perturb_detections, py::arg("truth"),
          py::arg("noise"));
}
