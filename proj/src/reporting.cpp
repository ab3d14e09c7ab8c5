// SPDX-License-Identifier: Apache-2.0

#include "cherrymetrics/reporting.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "cherrymetrics/errors.hpp"

namespace cherry::report {

namespace {

constexpr const char* kSummaryHeader =
    "image_id,count,avg_size_mm,avg_size_mm_top50,avg_r,avg_g,avg_b,"
    "avg_r_top50,avg_g_top50,avg_b_top50,stem_avg_r,stem_avg_g,stem_avg_b,timestamp";
constexpr const char* kSizeHeader =
    "image_id,cherry_id,confidence,size_px,width_px,height_px,size_mm,width_mm,"
    "height_mm,top50,box_xmin,box_ymin,box_xmax,box_ymax,central_xmin,central_ymin,"
    "central_xmax,central_ymax,scaled_xmin,scaled_ymin,scaled_xmax,scaled_ymax,timestamp";
constexpr const char* kColourHeader =
    "image_id,cherry_id,avg_r,avg_g,avg_b,color_class,top50,timestamp";
constexpr const char* kStemHeader =
    "image_id,cherry_id,stem_avg_r,stem_avg_g,stem_avg_b,top50,timestamp";
constexpr const char* kEvalHeader = "model,resize,ct,dc,tc,tp,fp,fn,map50,mean_iou";

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

std::vector<std::string> split_line(const std::string& line) {
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

// Reads a CSV with a fixed header into rows of fields.
std::vector<std::vector<std::string>> read_table(const std::string& path,
                                                 const char* header, size_t columns) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line))
        throw ParseError("'" + path + "': missing header row");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != header)
        throw ParseError("'" + path + "': unexpected header '" + line + "'");
    std::vector<std::vector<std::string>> rows;
    size_t row_no = 1;
    while (std::getline(in, line)) {
        ++row_no;
        if (line.empty() || line == "\r") continue;
        std::vector<std::string> f = split_line(line);
        if (f.size() != columns)
            throw ParseError("'" + path + "' row " + std::to_string(row_no) +
                             ": expected " + std::to_string(columns) + " fields, got " +
                             std::to_string(f.size()));
        rows.push_back(std::move(f));
    }
    return rows;
}

double to_num(const std::string& s) {
    size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw ValueError("non-numeric cell '" + s + "'");
    return v;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace

SheetSet build_sheets(const std::vector<pheno::SummaryRow>& summaries,
                      const std::vector<pheno::CherryRecord>& records) {
    std::map<std::string, const pheno::SummaryRow*> by_id;
    for (const auto& s : summaries) by_id[s.image_id] = &s;
    for (const auto& rec : records)
        if (!by_id.count(rec.image_id))
            throw JoinError("record references image_id '" + rec.image_id +
                            "' with no summary row");

    SheetSet sheets;
    sheets.summary = summaries;
    std::sort(sheets.summary.begin(), sheets.summary.end(),
              [](const auto& a, const auto& b) { return a.image_id < b.image_id; });

    std::vector<const pheno::CherryRecord*> ordered;
    for (const auto& rec : records) ordered.push_back(&rec);
    std::sort(ordered.begin(), ordered.end(), [](const auto* a, const auto* b) {
        return std::tie(a->image_id, a->cherry_id) < std::tie(b->image_id, b->cherry_id);
    });

    for (const auto* rec : ordered) {
        const std::string& ts = by_id.at(rec->image_id)->timestamp;
        double mm_per_px = rec->size.size_px > 0 ? rec->size.size_mm / rec->size.size_px : 0.0;
        CherrySizeRow size_row;
        size_row.image_id = rec->image_id;
        size_row.cherry_id = rec->cherry_id;
        size_row.confidence = rec->confidence;
        size_row.size_px = rec->size.size_px;
        size_row.width_px = rec->size.width_px;
        size_row.height_px = rec->size.height_px;
        size_row.size_mm = rec->size.size_mm;
        size_row.width_mm = rec->size.width_mm;
        size_row.height_mm = rec->size.height_mm;
        size_row.top50 = rec->top50;
        size_row.box = rec->box;
        size_row.central_box = rec->central_box;
        size_row.scaled_box = {rec->box.x_min * mm_per_px, rec->box.y_min * mm_per_px,
                               rec->box.x_max * mm_per_px, rec->box.y_max * mm_per_px};
        size_row.timestamp = ts;
        sheets.cherry_size.push_back(std::move(size_row));

        sheets.cherry_colour.push_back(
            {rec->image_id, rec->cherry_id, rec->mean_rgb, rec->color_class, rec->top50, ts});
        if (rec->stem_rgb)
            sheets.stem_colour.push_back(
                {rec->image_id, rec->cherry_id, *rec->stem_rgb, rec->top50, ts});
    }
    return sheets;
}

void write_sheets(const SheetSet& sheets, const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (!fs::is_directory(out_dir))
        throw IoError("cannot create output directory '" + out_dir + "'");

    std::ostringstream summary;
    summary << kSummaryHeader << "\n";
    for (const auto& s : sheets.summary) {
        summary << s.image_id << ',' << s.count << ',' << num(s.avg_size_mm) << ','
                << num(s.avg_size_mm_top50) << ',' << num(s.avg_rgb.r) << ','
                << num(s.avg_rgb.g) << ',' << num(s.avg_rgb.b) << ','
                << num(s.avg_rgb_top50.r) << ',' << num(s.avg_rgb_top50.g) << ','
                << num(s.avg_rgb_top50.b) << ',';
        if (s.stem_avg_rgb)
            summary << num(s.stem_avg_rgb->r) << ',' << num(s.stem_avg_rgb->g) << ','
                    << num(s.stem_avg_rgb->b);
        else
            summary << ",,";
        summary << ',' << s.timestamp << "\n";
    }
    write_text_file(out_dir + "/summary.csv", summary.str());

    std::ostringstream size;
    size << kSizeHeader << "\n";
    for (const auto& r : sheets.cherry_size) {
        size << r.image_id << ',' << r.cherry_id << ',' << num(r.confidence) << ','
             << num(r.size_px) << ',' << num(r.width_px) << ',' << num(r.height_px) << ','
             << num(r.size_mm) << ',' << num(r.width_mm) << ',' << num(r.height_mm) << ','
             << (r.top50 ? 1 : 0) << ',' << num(r.box.x_min) << ',' << num(r.box.y_min)
             << ',' << num(r.box.x_max) << ',' << num(r.box.y_max) << ','
             << num(r.central_box.x_min) << ',' << num(r.central_box.y_min) << ','
             << num(r.central_box.x_max) << ',' << num(r.central_box.y_max) << ','
             << num(r.scaled_box.x_min) << ',' << num(r.scaled_box.y_min) << ','
             << num(r.scaled_box.x_max) << ',' << num(r.scaled_box.y_max) << ','
             << r.timestamp << "\n";
    }
    write_text_file(out_dir + "/cherry_size.csv", size.str());

    std::ostringstream colour;
    colour << kColourHeader << "\n";
    for (const auto& r : sheets.cherry_colour) {
        colour << r.image_id << ',' << r.cherry_id << ',' << num(r.avg.r) << ','
               << num(r.avg.g) << ',' << num(r.avg.b) << ',' << r.color_class << ','
               << (r.top50 ? 1 : 0) << ',' << r.timestamp << "\n";
    }
    write_text_file(out_dir + "/cherry_colour.csv", colour.str());

    std::ostringstream stem;
    stem << kStemHeader << "\n";
    for (const auto& r : sheets.stem_colour) {
        stem << r.image_id << ',' << r.cherry_id << ',' << num(r.stem_avg.r) << ','
             << num(r.stem_avg.g) << ',' << num(r.stem_avg.b) << ','
             << (r.top50 ? 1 : 0) << ',' << r.timestamp << "\n";
    }
    write_text_file(out_dir + "/stem_colour.csv", stem.str());
}

SheetSet read_sheets(const std::string& dir) {
    SheetSet sheets;
    for (const auto& f : read_table(dir + "/summary.csv", kSummaryHeader, 14)) {
        pheno::SummaryRow s;
        s.image_id = f[0];
        s.count = static_cast<std::size_t>(to_num(f[1]));
        s.avg_size_mm = to_num(f[2]);
        s.avg_size_mm_top50 = to_num(f[3]);
        s.avg_rgb = {to_num(f[4]), to_num(f[5]), to_num(f[6])};
        s.avg_rgb_top50 = {to_num(f[7]), to_num(f[8]), to_num(f[9])};
        if (!f[10].empty())
            s.stem_avg_rgb = img::MeanRGB{to_num(f[10]), to_num(f[11]), to_num(f[12])};
        s.timestamp = f[13];
        sheets.summary.push_back(std::move(s));
    }
    for (const auto& f : read_table(dir + "/cherry_size.csv", kSizeHeader, 23)) {
        CherrySizeRow r;
        r.image_id = f[0];
        r.cherry_id = static_cast<int>(to_num(f[1]));
        r.confidence = to_num(f[2]);
        r.size_px = to_num(f[3]);
        r.width_px = to_num(f[4]);
        r.height_px = to_num(f[5]);
        r.size_mm = to_num(f[6]);
        r.width_mm = to_num(f[7]);
        r.height_mm = to_num(f[8]);
        r.top50 = to_num(f[9]) != 0.0;
        r.box = {to_num(f[10]), to_num(f[11]), to_num(f[12]), to_num(f[13])};
        r.central_box = {to_num(f[14]), to_num(f[15]), to_num(f[16]), to_num(f[17])};
        r.scaled_box = {to_num(f[18]), to_num(f[19]), to_num(f[20]), to_num(f[21])};
        r.timestamp = f[22];
        sheets.cherry_size.push_back(std::move(r));
    }
    for (const auto& f : read_table(dir + "/cherry_colour.csv", kColourHeader, 8)) {
        CherryColourRow r;
        r.image_id = f[0];
        r.cherry_id = static_cast<int>(to_num(f[1]));
        r.avg = {to_num(f[2]), to_num(f[3]), to_num(f[4])};
        r.color_class = static_cast<int>(to_num(f[5]));
        r.top50 = to_num(f[6]) != 0.0;
        r.timestamp = f[7];
        sheets.cherry_colour.push_back(std::move(r));
    }
    for (const auto& f : read_table(dir + "/stem_colour.csv", kStemHeader, 7)) {
        StemColourRow r;
        r.image_id = f[0];
        r.cherry_id = static_cast<int>(to_num(f[1]));
        r.stem_avg = {to_num(f[2]), to_num(f[3]), to_num(f[4])};
        r.top50 = to_num(f[5]) != 0.0;
        r.timestamp = f[6];
        sheets.stem_colour.push_back(std::move(r));
    }
    return sheets;
}

std::vector<pheno::CherryRecord> records_from_sheets(const SheetSet& sheets) {
    std::map<std::pair<std::string, int>, const CherryColourRow*> colour;
    for (const auto& r : sheets.cherry_colour) colour[{r.image_id, r.cherry_id}] = &r;
    std::map<std::pair<std::string, int>, const StemColourRow*> stem;
    for (const auto& r : sheets.stem_colour) stem[{r.image_id, r.cherry_id}] = &r;

    std::vector<pheno::CherryRecord> records;
    for (const auto& r : sheets.cherry_size) {
        pheno::CherryRecord rec;
        rec.image_id = r.image_id;
        rec.cherry_id = r.cherry_id;
        rec.confidence = r.confidence;
        rec.box = r.box;
        rec.central_box = r.central_box;
        rec.size = {r.size_px, r.width_px, r.height_px, r.size_mm, r.width_mm, r.height_mm};
        rec.top50 = r.top50;
        auto ci = colour.find({r.image_id, r.cherry_id});
        if (ci == colour.end())
            throw JoinError("cherry " + std::to_string(r.cherry_id) + " in '" + r.image_id +
                            "' missing from the colour sheet");
        rec.mean_rgb = ci->second->avg;
        rec.color_class = ci->second->color_class;
        auto si = stem.find({r.image_id, r.cherry_id});
        if (si != stem.end()) rec.stem_rgb = si->second->stem_avg;
        records.push_back(std::move(rec));
    }
    return records;
}

std::string format_eval_report(const std::vector<eval::EvaluationReport>& reports) {
    if (reports.empty())
        throw ValueError("evaluation report list is empty");
    std::ostringstream out;
    out << kEvalHeader << "\n";
    for (const auto& r : reports) {
        out << r.model_label << ',' << r.resize_label << ',' << num(r.ct) << ',' << r.dc
            << ',' << r.tc << ',' << r.tp << ',' << r.fp << ',' << r.fn << ','
            << num(r.map50) << ',' << num(r.mean_iou) << "\n";
    }
    return out.str();
}

void write_eval_report(const std::vector<eval::EvaluationReport>& reports,
                       const std::string& path) {
    write_text_file(path, format_eval_report(reports));
}

}  // namespace cherry::report
