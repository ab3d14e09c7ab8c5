// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "cherrymetrics/eval.hpp"
#include "cherrymetrics/phenotype.hpp"

namespace cherry::report {

struct CherrySizeRow {
    std::string image_id;
    int cherry_id = 0;
    double confidence = 0.0;
    double size_px = 0.0;
    double width_px = 0.0;
    double height_px = 0.0;
    double size_mm = 0.0;
    double width_mm = 0.0;
    double height_mm = 0.0;
    bool top50 = false;
    AbsBox box;
    AbsBox central_box;
    AbsBox scaled_box;  // box coordinates times mm_per_pixel
    std::string timestamp;
};

struct CherryColourRow {
    std::string image_id;
    int cherry_id = 0;
    img::MeanRGB avg;
    int color_class = 0;
    bool top50 = false;
    std::string timestamp;
};

struct StemColourRow {
    std::string image_id;
    int cherry_id = 0;
    img::MeanRGB stem_avg;
    bool top50 = false;
    std::string timestamp;
};

// The four report sheets, rows sorted by (image_id, cherry_id).
struct SheetSet {
    std::vector<pheno::SummaryRow> summary;
    std::vector<CherrySizeRow> cherry_size;
    std::vector<CherryColourRow> cherry_colour;
    std::vector<StemColourRow> stem_colour;
};

// Summary one row per image; size/colour one row per record; stem colour
// one row per record that has a stem sample. Every record's image_id must
// appear in `summaries`.
SheetSet build_sheets(const std::vector<pheno::SummaryRow>& summaries,
                      const std::vector<pheno::CherryRecord>& records);

// summary.csv, cherry_size.csv, cherry_colour.csv, stem_colour.csv.
// UTF-8, LF endings, numeric cells with 4 decimals.
void write_sheets(const SheetSet& sheets, const std::string& out_dir);

SheetSet read_sheets(const std::string& dir);

// Rebuild per-cherry records from stored sheets (calibration recovered from
// the mm/px ratio). Summary rows are not consumed.
std::vector<pheno::CherryRecord> records_from_sheets(const SheetSet& sheets);

// Evaluation table, header: model,resize,ct,dc,tc,tp,fp,fn,map50,mean_iou.
std::string format_eval_report(const std::vector<eval::EvaluationReport>& reports);
void write_eval_report(const std::vector<eval::EvaluationReport>& reports,
                       const std::string& path);

}  // namespace cherry::report
