# SPDX-License-Identifier: Apache-2.0
"""Python bindings for the cherrymetrics C++ core."""

from ._core import (
    AbsBox,
    CherryError,
    Detection,
    DetectionSet,
    EvaluationReport,
    GroundTruthBox,
    LabeledImage,
    MatchPair,
    MatchResult,
    NoiseSpec,
    NormBox,
    Scene,
    SceneSpec,
    StatsSummary,
    absolute_to_yolo,
    evaluate_dataset,
    fisher_ci,
    generate_scene,
    iou,
    match_detections,
    nms,
    ols_fit,
    p_value,
    parse_detections_csv,
    parse_voc,
    parse_yolo_labels,
    pearson,
    perturb_detections,
    stats_summary,
    write_detections_csv,
    write_voc,
    yolo_to_absolute,
)

__all__ = [
    "AbsBox",
    "CherryError",
    "Detection",
    "DetectionSet",
    "EvaluationReport",
    "GroundTruthBox",
    "LabeledImage",
    "MatchPair",
    "MatchResult",
    "NoiseSpec",
    "NormBox",
    "Scene",
    "SceneSpec",
    "StatsSummary",
    "absolute_to_yolo",
    "evaluate_dataset",
    "fisher_ci",
    "generate_scene",
    "iou",
    "match_detections",
    "nms",
    "ols_fit",
    "p_value",
    "parse_detections_csv",
    "parse_voc",
    "parse_yolo_labels",
    "pearson",
    "perturb_detections",
    "stats_summary",
    "write_detections_csv",
    "write_voc",
    "yolo_to_absolute",
]

__version__ = "0.1.0"
