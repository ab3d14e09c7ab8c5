// SPDX-License-Identifier: Apache-2.0

#include "cherrymetrics/annot_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "cherrymetrics/errors.hpp"

namespace cherry::annot {

namespace {

// ---------------------------------------------------------------------------
// Minimal XML reader, just enough for VOC annotation files. Elements and
// character data only; attributes are skipped, unknown elements kept so the
// caller can ignore them.

struct XmlNode {
    std::string name;
    std::string text;
    std::vector<XmlNode> children;
    int line = 0;

    const XmlNode* child(const std::string& n) const {
        for (const auto& c : children)
            if (c.name == n) return &c;
        return nullptr;
    }
};

class XmlReader {
public:
    explicit XmlReader(const std::string& src) : src_(src) {}

    XmlNode parse_document() {
        skip_misc();
        if (pos_ >= src_.size())
            fail("document contains no root element");
        XmlNode root = parse_element();
        skip_misc();
        if (pos_ < src_.size())
            fail("content after root element");
        return root;
    }

private:
    const std::string& src_;
    size_t pos_ = 0;
    int line_ = 1;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("malformed XML at line " + std::to_string(line_) + ": " + msg);
    }

    char peek() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }

    char take() {
        if (pos_ >= src_.size()) fail("unexpected end of input");
        char c = src_[pos_++];
        if (c == '\n') ++line_;
        return c;
    }

    bool starts_with(const char* s) const {
        return src_.compare(pos_, std::string::traits_type::length(s), s) == 0;
    }

    void skip_until(const char* terminator) {
        while (pos_ < src_.size() && !starts_with(terminator)) take();
        if (pos_ >= src_.size()) fail("unterminated markup");
        for (const char* p = terminator; *p; ++p) take();
    }

    // Whitespace, comments, processing instructions and doctype between elements.
    void skip_misc() {
        for (;;) {
            while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(peek()))) take();
            if (starts_with("<!--")) {
                skip_until("-->");
            } else if (starts_with("<?")) {
                skip_until("?>");
            } else if (starts_with("<!")) {
                skip_until(">");
            } else {
                return;
            }
        }
    }

    std::string parse_name() {
        std::string name;
        while (pos_ < src_.size()) {
            char c = peek();
            if (std::isspace(static_cast<unsigned char>(c)) || c == '>' || c == '/') break;
            name.push_back(take());
        }
        if (name.empty()) fail("expected element name");
        return name;
    }

    std::string decode_entity() {
        std::string ent;
        take();  // '&'
        while (pos_ < src_.size() && peek() != ';') ent.push_back(take());
        if (pos_ >= src_.size()) fail("unterminated entity reference");
        take();  // ';'
        if (ent == "lt") return "<";
        if (ent == "gt") return ">";
        if (ent == "amp") return "&";
        if (ent == "quot") return "\"";
        if (ent == "apos") return "'";
        fail("unknown entity reference &" + ent + ";");
    }

    XmlNode parse_element() {
        if (take() != '<') fail("expected '<'");
        XmlNode node;
        node.line = line_;
        node.name = parse_name();
        // Skip attributes.
        for (;;) {
            while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(peek()))) take();
            if (peek() == '/') {
                take();
                if (take() != '>') fail("malformed empty-element tag");
                return node;
            }
            if (peek() == '>') {
                take();
                break;
            }
            parse_name();
            while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(peek()))) take();
            if (peek() == '=') {
                take();
                while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(peek()))) take();
                char q = take();
                if (q != '"' && q != '\'') fail("attribute value must be quoted");
                while (pos_ < src_.size() && peek() != q) take();
                take();
            }
        }
        // Content: character data and child elements until the matching end tag.
        for (;;) {
            if (pos_ >= src_.size()) fail("missing end tag for <" + node.name + ">");
            if (starts_with("<!--")) {
                skip_until("-->");
            } else if (starts_with("</")) {
                take();
                take();
                std::string end = parse_name();
                if (end != node.name)
                    fail("end tag </" + end + "> does not match <" + node.name + ">");
                while (pos_ < src_.size() && peek() != '>') take();
                if (take() != '>') fail("malformed end tag");
                return node;
            } else if (peek() == '<') {
                node.children.push_back(parse_element());
            } else if (peek() == '&') {
                node.text += decode_entity();
            } else {
                node.text.push_back(take());
            }
        }
    }
};

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

const XmlNode& require_child(const XmlNode& parent, const std::string& name) {
    const XmlNode* c = parent.child(name);
    if (!c)
        throw ParseError("schema error: missing required element <" + name +
                         "> inside <" + parent.name + ">");
    return *c;
}

double numeric_text(const XmlNode& node) {
    std::string t = trim(node.text);
    size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != t.size() || t.empty())
        throw ValueError("non-numeric value '" + t + "' in element <" + node.name +
                         "> at line " + std::to_string(node.line));
    return v;
}

int class_id_for(const std::string& name, const std::vector<std::string>& classes) {
    auto it = std::find(classes.begin(), classes.end(), name);
    if (it == classes.end())
        throw ValueError("unknown class name '" + name + "'");
    return static_cast<int>(it - classes.begin());
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

long long round_half_up(double v) {
    return static_cast<long long>(std::floor(v + 0.5));
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

double parse_number(const std::string& s, const std::string& what, size_t row) {
    std::string t = trim(s);
    size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != t.size() || t.empty())
        throw ValueError("row " + std::to_string(row) + ": non-numeric " + what + " '" + s + "'");
    return v;
}

}  // namespace

const std::vector<std::string>& default_class_list() {
    static const std::vector<std::string> classes = {"cherry"};
    return classes;
}

LabeledImage parse_voc(const std::string& xml_text,
                       const std::vector<std::string>& classes,
                       std::vector<std::string>* warnings) {
    XmlNode root = XmlReader(xml_text).parse_document();
    if (root.name != "annotation")
        throw ParseError("schema error: root element is <" + root.name +
                         ">, expected <annotation>");

    LabeledImage img;
    img.image_id = trim(require_child(root, "filename").text);
    const XmlNode& size = require_child(root, "size");
    double w = numeric_text(require_child(size, "width"));
    double h = numeric_text(require_child(size, "height"));
    if (w < 1 || h < 1 || w != std::floor(w) || h != std::floor(h))
        throw ValueError("image dimensions must be positive integers, got " +
                         std::to_string(w) + "x" + std::to_string(h));
    img.width = static_cast<int>(w);
    img.height = static_cast<int>(h);

    for (const auto& node : root.children) {
        if (node.name != "object") continue;
        GroundTruthBox gt;
        gt.class_id = class_id_for(trim(require_child(node, "name").text), classes);
        const XmlNode& bb = require_child(node, "bndbox");
        AbsBox box{numeric_text(require_child(bb, "xmin")),
                   numeric_text(require_child(bb, "ymin")),
                   numeric_text(require_child(bb, "xmax")),
                   numeric_text(require_child(bb, "ymax"))};
        if (box.x_min > box.x_max || box.y_min > box.y_max)
            throw GeometryError("inverted bndbox at line " + std::to_string(bb.line));
        AbsBox clamped = box.clamped(w, h);
        if (clamped != box && warnings)
            warnings->push_back("box clamped to image bounds in '" + img.image_id + "'");
        gt.box = clamped;
        img.boxes.push_back(gt);
    }
    return img;
}

std::string write_voc(const LabeledImage& img, const std::vector<std::string>& classes) {
    std::ostringstream out;
    out << "<annotation>\n";
    out << "  <filename>" << xml_escape(img.image_id) << "</filename>\n";
    out << "  <size>\n";
    out << "    <width>" << img.width << "</width>\n";
    out << "    <height>" << img.height << "</height>\n";
    out << "    <depth>3</depth>\n";
    out << "  </size>\n";
    for (const auto& gt : img.boxes) {
        const std::string& name =
            gt.class_id >= 0 && gt.class_id < static_cast<int>(classes.size())
                ? classes[gt.class_id]
                : std::to_string(gt.class_id);
        out << "  <object>\n";
        out << "    <name>" << xml_escape(name) << "</name>\n";
        out << "    <bndbox>\n";
        out << "      <xmin>" << round_half_up(gt.box.x_min) << "</xmin>\n";
        out << "      <ymin>" << round_half_up(gt.box.y_min) << "</ymin>\n";
        out << "      <xmax>" << round_half_up(gt.box.x_max) << "</xmax>\n";
        out << "      <ymax>" << round_half_up(gt.box.y_max) << "</ymax>\n";
        out << "    </bndbox>\n";
        out << "  </object>\n";
    }
    out << "</annotation>\n";
    return out.str();
}

AbsBox yolo_to_absolute(const NormBox& n, double width, double height) {
    AbsBox box{(n.cx - n.w / 2.0) * width, (n.cy - n.h / 2.0) * height,
               (n.cx + n.w / 2.0) * width, (n.cy + n.h / 2.0) * height};
    return box.clamped(width, height);
}

NormBox absolute_to_yolo(const AbsBox& box, double width, double height) {
    return {(box.x_min + box.x_max) / 2.0 / width,
            (box.y_min + box.y_max) / 2.0 / height,
            box.width() / width,
            box.height() / height};
}

LabeledImage parse_yolo_labels(const std::string& text, int width, int height,
                               int class_count, const std::string& image_id) {
    LabeledImage img;
    img.image_id = image_id;
    img.width = width;
    img.height = height;

    std::istringstream lines(text);
    std::string line;
    size_t line_no = 0;
    while (std::getline(lines, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::istringstream tok(t);
        std::vector<std::string> fields;
        std::string f;
        while (tok >> f) fields.push_back(f);
        if (fields.size() != 5)
            throw ParseError("line " + std::to_string(line_no) + ": expected 5 fields, got " +
                             std::to_string(fields.size()));
        double vals[5];
        for (int i = 0; i < 5; ++i) vals[i] = parse_number(fields[i], "field", line_no);
        if (vals[0] != std::floor(vals[0]) || vals[0] < 0)
            throw ValueError("line " + std::to_string(line_no) + ": bad class id '" + fields[0] + "'");
        int cls = static_cast<int>(vals[0]);
        if (cls >= class_count)
            throw ValueError("line " + std::to_string(line_no) + ": unknown class id " +
                             std::to_string(cls));
        NormBox n{vals[1], vals[2], vals[3], vals[4]};
        if (!n.valid())
            throw ValueError("line " + std::to_string(line_no) +
                             ": coordinates must lie in [0,1] with positive extent");
        img.boxes.push_back({yolo_to_absolute(n, width, height), cls});
    }
    return img;
}

std::vector<DetectionSet> parse_detections_csv(const std::string& text) {
    static const std::vector<std::string> kHeader = {
        "image_id", "x_min", "y_min", "x_max", "y_max", "confidence", "class_id"};

    std::istringstream lines(text);
    std::string line;
    if (!std::getline(lines, line))
        throw ParseError("schema error: empty detections file, header row required");
    std::vector<std::string> header = split_csv_line(line);
    if (header != kHeader) {
        std::string want;
        for (const auto& h : kHeader) want += (want.empty() ? "" : ",") + h;
        throw ParseError("schema error: bad header, expected '" + want + "'");
    }

    std::vector<DetectionSet> sets;
    std::map<std::string, size_t> index;
    size_t row = 1;
    while (std::getline(lines, line)) {
        ++row;
        if (trim(line).empty()) continue;
        std::vector<std::string> f = split_csv_line(line);
        if (f.size() != kHeader.size())
            throw ParseError("row " + std::to_string(row) + ": expected " +
                             std::to_string(kHeader.size()) + " fields, got " +
                             std::to_string(f.size()));
        Detection det;
        det.box = {parse_number(f[1], "x_min", row), parse_number(f[2], "y_min", row),
                   parse_number(f[3], "x_max", row), parse_number(f[4], "y_max", row)};
        det.confidence = parse_number(f[5], "confidence", row);
        double cls = parse_number(f[6], "class_id", row);
        if (det.confidence < 0.0 || det.confidence > 1.0)
            throw ValueError("row " + std::to_string(row) + ": confidence " +
                             f[5] + " outside [0,1]");
        if (det.box.x_min > det.box.x_max || det.box.y_min > det.box.y_max)
            throw GeometryError("row " + std::to_string(row) + ": inverted box");
        if (!det.box.valid())
            throw GeometryError("row " + std::to_string(row) + ": invalid box coordinates");
        if (cls != std::floor(cls) || cls < 0)
            throw ValueError("row " + std::to_string(row) + ": bad class id '" + f[6] + "'");
        det.class_id = static_cast<int>(cls);

        const std::string& id = f[0];
        auto it = index.find(id);
        if (it == index.end()) {
            index.emplace(id, sets.size());
            sets.push_back({id, {det}});
        } else {
            sets[it->second].detections.push_back(det);
        }
    }
    return sets;
}

std::string write_detections_csv(const std::vector<DetectionSet>& sets) {
    std::ostringstream out;
    out << "image_id,x_min,y_min,x_max,y_max,confidence,class_id\n";
    char buf[256];
    for (const auto& set : sets) {
        for (const auto& d : set.detections) {
            std::snprintf(buf, sizeof(buf), "%s,%.6f,%.6f,%.6f,%.6f,%.6f,%d\n",
                          set.image_id.c_str(), d.box.x_min, d.box.y_min, d.box.x_max,
                          d.box.y_max, d.confidence, d.class_id);
            out << buf;
        }
    }
    return out.str();
}

}  // namespace cherry::annot
