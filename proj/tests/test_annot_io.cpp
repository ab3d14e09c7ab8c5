// SPDX-License-Identifier: Apache-2.0

#include <map>
#include <random>
#include <sstream>

#include "cherrymetrics/annot_io.hpp"
#include "cherrymetrics/errors.hpp"
#include "doctest.h"

using namespace cherry;
using namespace cherry::annot;

namespace {

const char* kMinimalVoc = R"(<?xml version="1.0"?>
<annotation>
  <filename>img001.jpg</filename>
  <size><width>512</width><height>416</height><depth>3</depth></size>
  <object>
    <name>cherry</name>
    <bndbox><xmin>10</xmin><ymin>20</ymin><xmax>50</xmax><ymax>60</ymax></bndbox>
  </object>
</annotation>
)";

}  // namespace

TEST_CASE("parse_voc minimal document") {
    LabeledImage img = parse_voc(kMinimalVoc);
    CHECK(img.image_id == "img001.jpg");
    CHECK(img.width == 512);
    CHECK(img.height == 416);
    REQUIRE(img.boxes.size() == 1);
    CHECK(img.boxes[0].class_id == 0);
    CHECK(img.boxes[0].box == AbsBox{10, 20, 50, 60});
}

TEST_CASE("parse_voc with zero objects") {
    const char* doc =
        "<annotation><filename>e</filename>"
        "<size><width>10</width><height>10</height></size></annotation>";
    LabeledImage img = parse_voc(doc);
    CHECK(img.boxes.empty());
}

TEST_CASE("parse_voc ignores unknown elements and attributes") {
    const char* doc =
        "<annotation verified=\"yes\"><folder>x</folder><filename>f</filename>"
        "<source><database>d</database></source>"
        "<size><width>100</width><height>50</height><depth>3</depth></size>"
        "<segmented>0</segmented>"
        "<object><name>cherry</name><pose>left</pose><difficult>0</difficult>"
        "<bndbox><xmin>1</xmin><ymin>2</ymin><xmax>3</xmax><ymax>4</ymax></bndbox>"
        "</object></annotation>";
    LabeledImage img = parse_voc(doc);
    REQUIRE(img.boxes.size() == 1);
    CHECK(img.boxes[0].box == AbsBox{1, 2, 3, 4});
}

TEST_CASE("parse_voc error paths") {
    CHECK_THROWS_AS(parse_voc("<annotation><filename>x</filename>"), ParseError);
    CHECK_THROWS_AS(parse_voc("<annotation><filename>x</filename>"
                              "<size><width>5</width></size></annotation>"),
                    ParseError);  // missing height
    CHECK_THROWS_AS(parse_voc("<annotation><filename>x</filename>"
                              "<size><width>ten</width><height>5</height></size>"
                              "</annotation>"),
                    ValueError);
    CHECK_THROWS_AS(parse_voc("<annotation><filename>x</filename>"
                              "<size><width>9</width><height>9</height></size>"
                              "<object><name>pear</name><bndbox><xmin>1</xmin>"
                              "<ymin>1</ymin><xmax>2</xmax><ymax>2</ymax></bndbox>"
                              "</object></annotation>"),
                    ValueError);  // unknown class
}

TEST_CASE("parse_voc clamps out-of-bounds coordinates with a warning") {
    const char* doc =
        "<annotation><filename>x</filename>"
        "<size><width>100</width><height>100</height></size>"
        "<object><name>cherry</name><bndbox><xmin>-1</xmin><ymin>5</ymin>"
        "<xmax>101</xmax><ymax>50</ymax></bndbox></object></annotation>";
    std::vector<std::string> warnings;
    LabeledImage img = parse_voc(doc, default_class_list(), &warnings);
    CHECK(img.boxes[0].box == AbsBox{0, 5, 100, 50});
    CHECK(warnings.size() == 1);
}

TEST_CASE("write_voc emits no object elements for an empty image") {
    LabeledImage img{"empty", 10, 10, {}};
    std::string doc = write_voc(img);
    CHECK(doc.find("<object>") == std::string::npos);
    CHECK(parse_voc(doc).boxes.empty());
}

TEST_CASE("write_voc renders integer coordinates, rounding half-up") {
    LabeledImage img{"a", 100, 100, {{{10.0, 20.0, 50.0, 60.0}, 0}}};
    std::string doc = write_voc(img);
    CHECK(doc.find("<xmin>10</xmin>") != std::string::npos);
    CHECK(doc.find("<ymax>60</ymax>") != std::string::npos);
    LabeledImage half{"b", 100, 100, {{{10.5, 20.49, 50.5, 60.51}, 0}}};
    std::string doc2 = write_voc(half);
    CHECK(doc2.find("<xmin>11</xmin>") != std::string::npos);
    CHECK(doc2.find("<ymin>20</ymin>") != std::string::npos);
    CHECK(doc2.find("<xmax>51</xmax>") != std::string::npos);
    CHECK(doc2.find("<ymax>61</ymax>") != std::string::npos);
}

TEST_CASE("voc round trip on a three-box fixture") {
    const char* doc =
        "<annotation><filename>trip</filename>"
        "<size><width>640</width><height>480</height></size>"
        "<object><name>cherry</name><bndbox><xmin>1</xmin><ymin>2</ymin>"
        "<xmax>30</xmax><ymax>40</ymax></bndbox></object>"
        "<object><name>cherry</name><bndbox><xmin>100</xmin><ymin>120</ymin>"
        "<xmax>180</xmax><ymax>200</ymax></bndbox></object>"
        "<object><name>cherry</name><bndbox><xmin>600</xmin><ymin>400</ymin>"
        "<xmax>640</xmax><ymax>480</ymax></bndbox></object>"
        "</annotation>";
    LabeledImage once = parse_voc(doc);
    LabeledImage twice = parse_voc(write_voc(once));
    CHECK(twice.image_id == once.image_id);
    CHECK(twice.width == once.width);
    REQUIRE(twice.boxes.size() == once.boxes.size());
    for (size_t i = 0; i < once.boxes.size(); ++i)
        CHECK(twice.boxes[i].box == once.boxes[i].box);
}

TEST_CASE("voc round trip property on random integer images") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 100; ++trial) {
        int w = 64 + static_cast<int>(rng() % 1000);
        int h = 64 + static_cast<int>(rng() % 1000);
        LabeledImage img{"rt_" + std::to_string(trial), w, h, {}};
        int n = static_cast<int>(rng() % 6);
        for (int i = 0; i < n; ++i) {
            int x0 = static_cast<int>(rng() % (w - 2));
            int y0 = static_cast<int>(rng() % (h - 2));
            int x1 = x0 + 1 + static_cast<int>(rng() % (w - x0 - 1));
            int y1 = y0 + 1 + static_cast<int>(rng() % (h - y0 - 1));
            img.boxes.push_back({{double(x0), double(y0), double(x1), double(y1)}, 0});
        }
        LabeledImage back = parse_voc(write_voc(img));
        REQUIRE(back.boxes.size() == img.boxes.size());
        for (size_t i = 0; i < img.boxes.size(); ++i)
            CHECK(back.boxes[i].box == img.boxes[i].box);
    }
}

TEST_CASE("yolo_to_absolute arithmetic") {
    AbsBox b = yolo_to_absolute({0.5, 0.5, 0.25, 0.25}, 512, 416);
    CHECK(b.x_min == doctest::Approx(192));
    CHECK(b.y_min == doctest::Approx(156));
    CHECK(b.x_max == doctest::Approx(320));
    CHECK(b.y_max == doctest::Approx(260));

    AbsBox full = yolo_to_absolute({0.5, 0.5, 1.0, 1.0}, 640, 480);
    CHECK(full == AbsBox{0, 0, 640, 480});
}

TEST_CASE("yolo conversion inverse composition") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int done = 0;
    while (done < 100) {
        double w = 0.02 + 0.9 * u(rng), h = 0.02 + 0.9 * u(rng);
        double cx = u(rng), cy = u(rng);
        // Keep the box inside the frame so no clamping happens.
        if (cx - w / 2 < 0 || cx + w / 2 > 1 || cy - h / 2 < 0 || cy + h / 2 > 1) continue;
        ++done;
        NormBox n{cx, cy, w, h};
        NormBox back = absolute_to_yolo(yolo_to_absolute(n, 512, 416), 512, 416);
        CHECK(back.cx == doctest::Approx(n.cx).epsilon(1e-9));
        CHECK(back.cy == doctest::Approx(n.cy).epsilon(1e-9));
        CHECK(back.w == doctest::Approx(n.w).epsilon(1e-9));
        CHECK(back.h == doctest::Approx(n.h).epsilon(1e-9));
    }
}

TEST_CASE("parse_yolo_labels basics") {
    LabeledImage img = parse_yolo_labels("0 0.5 0.5 0.25 0.25\n", 512, 416, 1);
    REQUIRE(img.boxes.size() == 1);
    CHECK(img.boxes[0].box.x_min == doctest::Approx(192));
    CHECK(img.boxes[0].box.y_max == doctest::Approx(260));

    CHECK(parse_yolo_labels("", 512, 416, 1).boxes.empty());
    CHECK(parse_yolo_labels("# comment only\n\n", 512, 416, 1).boxes.empty());
}

TEST_CASE("parse_yolo_labels five-line fixture against hand conversion") {
    // Hand-converted on a 200x100 frame.
    const char* text =
        "0 0.5 0.5 0.5 0.5\n"    // (50,25,150,75)
        "0 0.1 0.2 0.1 0.2\n"    // (10,10,30,30)
        "0 0.9 0.9 0.2 0.2\n"    // (160,80,200,100)
        "0 0.25 0.75 0.5 0.5\n"  // (0,50,100,100)
        "0 0.5 0.5 1.0 1.0\n";   // (0,0,200,100)
    LabeledImage img = parse_yolo_labels(text, 200, 100, 1);
    REQUIRE(img.boxes.size() == 5);
    const AbsBox expected[5] = {{50, 25, 150, 75},
                                {10, 10, 30, 30},
                                {160, 80, 200, 100},
                                {0, 50, 100, 100},
                                {0, 0, 200, 100}};
    for (int i = 0; i < 5; ++i) {
        CHECK(img.boxes[i].box.x_min == doctest::Approx(expected[i].x_min));
        CHECK(img.boxes[i].box.y_min == doctest::Approx(expected[i].y_min));
        CHECK(img.boxes[i].box.x_max == doctest::Approx(expected[i].x_max));
        CHECK(img.boxes[i].box.y_max == doctest::Approx(expected[i].y_max));
    }
}

TEST_CASE("parse_yolo_labels error paths") {
    CHECK_THROWS_AS(parse_yolo_labels("0 0.5 0.5\n", 100, 100, 1), ParseError);
    CHECK_THROWS_AS(parse_yolo_labels("1 0.5 0.5 0.1 0.1\n", 100, 100, 1), ValueError);
    CHECK_THROWS_AS(parse_yolo_labels("0 1.5 0.5 0.1 0.1\n", 100, 100, 1), ValueError);
    CHECK_THROWS_AS(parse_yolo_labels("0 0.5 0.5 0 0.1\n", 100, 100, 1), ValueError);
}

TEST_CASE("parse_detections_csv groups by image in first-appearance order") {
    const char* text =
        "image_id,x_min,y_min,x_max,y_max,confidence,class_id\n"
        "img1,1,2,3,4,0.9,0\n"
        "img1,5,6,7,8,0.8,0\n"
        "img2,1,1,2,2,0.7,0\n";
    auto sets = parse_detections_csv(text);
    REQUIRE(sets.size() == 2);
    CHECK(sets[0].image_id == "img1");
    CHECK(sets[0].detections.size() == 2);
    CHECK(sets[1].image_id == "img2");
    CHECK(sets[1].detections.size() == 1);
    CHECK(sets[0].detections[1].box == AbsBox{5, 6, 7, 8});
}

TEST_CASE("parse_detections_csv header-only file yields empty list") {
    CHECK(parse_detections_csv("image_id,x_min,y_min,x_max,y_max,confidence,class_id\n")
              .empty());
}

TEST_CASE("parse_detections_csv tolerates CRLF") {
    const char* text =
        "image_id,x_min,y_min,x_max,y_max,confidence,class_id\r\n"
        "a,1,1,2,2,0.5,0\r\n";
    auto sets = parse_detections_csv(text);
    REQUIRE(sets.size() == 1);
    CHECK(sets[0].detections[0].confidence == doctest::Approx(0.5));
}

TEST_CASE("parse_detections_csv error paths") {
    CHECK_THROWS_AS(parse_detections_csv("id,x_min,y_min,x_max,y_max,confidence,class_id\n"),
                    ParseError);
    CHECK_THROWS_AS(
        parse_detections_csv("image_id,x_min,y_min,x_max,y_max,confidence,class_id\n"
                             "a,1,1,2,2,1.5,0\n"),
        ValueError);
    CHECK_THROWS_AS(
        parse_detections_csv("image_id,x_min,y_min,x_max,y_max,confidence,class_id\n"
                             "a,3,1,2,2,0.5,0\n"),
        GeometryError);
}

TEST_CASE("parse_detections_csv fifty-row fixture against a line-scan oracle") {
    std::mt19937_64 rng(99);
    std::ostringstream csv;
    csv << "image_id,x_min,y_min,x_max,y_max,confidence,class_id\n";
    std::map<std::string, int> oracle;
    for (int i = 0; i < 50; ++i) {
        std::string id = "img" + std::to_string(rng() % 7);
        ++oracle[id];  // independent count per image, straight off the rows
        int x0 = static_cast<int>(rng() % 100), y0 = static_cast<int>(rng() % 100);
        csv << id << ',' << x0 << ',' << y0 << ',' << x0 + 5 << ',' << y0 + 5 << ",0.5,0\n";
    }
    auto sets = parse_detections_csv(csv.str());
    int total = 0;
    for (const auto& set : sets) {
        CHECK(oracle.at(set.image_id) == static_cast<int>(set.detections.size()));
        total += static_cast<int>(set.detections.size());
    }
    CHECK(total == 50);
    CHECK(sets.size() == oracle.size());
}

TEST_CASE("detections csv write/parse round trip") {
    std::vector<DetectionSet> sets = {
        {"a", {{{1, 2, 3, 4}, 0, 0.9}, {{5.5, 6.25, 9, 12}, 0, 0.25}}},
        {"b", {{{0, 0, 10, 10}, 0, 1.0}}},
    };
    auto back = parse_detections_csv(write_detections_csv(sets));
    REQUIRE(back.size() == 2);
    CHECK(back[0].detections.size() == 2);
    CHECK(back[0].detections[1].box.x_min == doctest::Approx(5.5));
    CHECK(back[1].detections[0].confidence == doctest::Approx(1.0));
}
