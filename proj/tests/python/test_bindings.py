# SPDX-License-Identifier: Apache-2.0
"""Smoke tests for the pybind11 bindings.

Skipped automatically when the extension is not importable (e.g. a pure
C++ build without `pip install -e .`).
"""

import math

import pytest

cm = pytest.importorskip("cherrymetrics")


def test_iou_matches_known_value():
    a = cm.AbsBox(0, 0, 10, 10)
    b = cm.AbsBox(5, 5, 15, 15)
    assert cm.iou(a, b) == pytest.approx(25.0 / 175.0)


def test_yolo_roundtrip():
    box = cm.AbsBox(10, 20, 50, 80)
    norm = cm.absolute_to_yolo(box, 100, 100)
    back = cm.yolo_to_absolute(norm, 100, 100)
    assert back.x_min == pytest.approx(10)
    assert back.y_max == pytest.approx(80)


def test_voc_roundtrip():
    img = cm.LabeledImage()
    img.image_id = "frame_001"
    img.width = 640
    img.height = 480
    gt = cm.GroundTruthBox()
    gt.box = cm.AbsBox(12, 34, 56, 78)
    gt.class_id = 0
    img.boxes = [gt]
    parsed = cm.parse_voc(cm.write_voc(img))
    assert parsed.image_id == "frame_001"
    assert len(parsed.boxes) == 1
    assert parsed.boxes[0].box.x_max == pytest.approx(56)


def test_detections_csv_roundtrip():
    ds = cm.DetectionSet()
    ds.image_id = "img_a"
    ds.detections = [cm.Detection(cm.AbsBox(1, 2, 3, 4), 0, 0.9)]
    sets = cm.parse_detections_csv(cm.write_detections_csv([ds]))
    assert len(sets) == 1
    assert sets[0].detections[0].confidence == pytest.approx(0.9)


def test_stats_against_scipy_style_values():
    # Frozen reference: r = 0.9, n = 5 gives t = 3.5762..., p = 0.037386
    assert cm.p_value(0.9, 5) == pytest.approx(0.037386, abs=5e-6)
    low, high = cm.fisher_ci(0.874896, 364, 0.95)
    assert low == pytest.approx(0.848403, abs=5e-4)
    assert high == pytest.approx(0.897017, abs=5e-4)


def test_pearson_and_ols():
    x = [1.0, 2.0, 3.0, 4.0, 5.0]
    y = [2.1, 3.9, 6.2, 8.0, 9.8]
    r = cm.pearson(x, y)
    assert 0.99 < r < 1.0
    slope, intercept, r2 = cm.ols_fit(x, y)
    assert slope == pytest.approx(1.96, abs=0.05)
    assert r2 == pytest.approx(r * r)


def test_synthetic_scene_end_to_end():
    spec = cm.SceneSpec()
    spec.width = 256
    spec.height = 256
    spec.cherry_count = 10
    spec.seed = 3
    scene = cm.generate_scene(spec)
    assert len(scene.truth.boxes) == 10
    assert scene.image_bytes.startswith(b"P6\n256 256\n255\n")

    noise = cm.NoiseSpec()
    dets = cm.perturb_detections(scene.truth, noise)
    report = cm.evaluate_dataset([dets], [scene.truth])
    assert report.tp == report.tc == 10
    assert report.fp == 0
    assert report.fn == 0
    assert report.map50 == pytest.approx(1.0)


def test_errors_surface_as_python_exceptions():
    with pytest.raises(cm.CherryError):
        cm.parse_voc("<annotation>")
    with pytest.raises(cm.CherryError):
        cm.fisher_ci(1.0, 100, 0.95)


def test_splitmix_determinism():
    spec = cm.SceneSpec()
    spec.width = 128
    spec.height = 128
    spec.cherry_count = 4
    spec.seed = 99
    a = cm.generate_scene(spec)
    b = cm.generate_scene(spec)
    assert a.image_bytes == b.image_bytes
