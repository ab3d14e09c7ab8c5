// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "cherrymetrics/annot_io.hpp"
#include "cherrymetrics/errors.hpp"
#include "cherrymetrics/eval.hpp"
#include "cherrymetrics/imaging.hpp"
#include "cherrymetrics/phenotype.hpp"
#include "cherrymetrics/reporting.hpp"
#include "cherrymetrics/stats.hpp"
#include "cherrymetrics/synthgen.hpp"

namespace fs = std::filesystem;
using namespace cherry;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw IoError("write failed for '" + path + "'");
}

std::string now_utc_iso8601() {
    std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

// Flat key=value config file; '#' comments and blank lines ignored.
std::map<std::string, std::string> load_config_file(const std::string& path) {
    std::map<std::string, std::string> kv;
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        size_t first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("config line " + std::to_string(line_no) + ": expected key=value");
        auto strip = [](std::string s) {
            size_t a = s.find_first_not_of(" \t");
            if (a == std::string::npos) return std::string();
            size_t b = s.find_last_not_of(" \t");
            return s.substr(a, b - a + 1);
        };
        kv[strip(line.substr(0, eq))] = strip(line.substr(eq + 1));
    }
    return kv;
}

// CLI flags win; config fills in anything the command line left at default.
void apply_config(CLI::App& cmd, const std::map<std::string, std::string>& kv) {
    for (const auto& [key, value] : kv) {
        CLI::Option* opt = cmd.get_option_no_throw("--" + key);
        if (opt && opt->count() == 0 && opt->get_expected_min() > 0) {
            opt->add_result(value);
            opt->run_callback();
        }
    }
}

std::vector<LabeledImage> load_truth_dir(const std::string& dir,
                                         const std::vector<std::string>& classes) {
    std::vector<fs::path> paths;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.path().extension() == ".xml") paths.push_back(entry.path());
    std::sort(paths.begin(), paths.end());
    std::vector<LabeledImage> images;
    for (const auto& p : paths) {
        try {
            images.push_back(annot::parse_voc(read_file(p.string()), classes));
        } catch (const Error& e) {
            throw ParseError("'" + p.string() + "': " + e.what());
        }
    }
    return images;
}

std::vector<std::string> parse_class_list(const std::string& csv) {
    std::vector<std::string> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    if (out.empty()) throw ValueError("class list is empty");
    return out;
}

// Ordered parallel map over indices; results land by index regardless of
// execution schedule.
template <typename Fn>
void parallel_for(size_t n, unsigned jobs, Fn&& fn) {
    if (jobs <= 1 || n <= 1) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::vector<std::thread> workers;
    std::exception_ptr error;
    std::mutex error_mutex;
    for (unsigned t = 0; t < std::min<size_t>(jobs, n); ++t) {
        workers.emplace_back([&] {
            for (;;) {
                size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& w : workers) w.join();
    if (error) std::rethrow_exception(error);
}

int run_synth(const std::string& out_dir, const synth::SceneSpec& spec,
              const synth::NoiseSpec& noise, bool with_detections,
              const std::string& palette_path) {
    pheno::ColorPalette palette =
        palette_path.empty() ? pheno::default_palette() : pheno::load_palette(palette_path);
    synth::Scene scene = synth::generate_scene(spec, palette);
    fs::create_directories(out_dir);
    img::write_ppm_file(scene.image, out_dir + "/image.ppm");
    write_file(out_dir + "/truth.xml", annot::write_voc(scene.truth));
    write_file(out_dir + "/calibration.csv",
               "image_id,mm_per_pixel\n" + scene.truth.image_id + "," +
                   std::to_string(scene.calibration.mm_per_pixel) + "\n");
    if (with_detections) {
        DetectionSet dets = synth::perturb_detections(scene.truth, noise);
        write_file(out_dir + "/detections.csv", annot::write_detections_csv({dets}));
    }
    std::cout << "wrote scene '" << scene.truth.image_id << "' with "
              << scene.truth.boxes.size() << " cherries to " << out_dir << "\n";
    return 0;
}

int run_eval(const std::string& dets_path, const std::string& truth_dir,
             const std::string& out_path, const eval::EvalConfig& cfg, double nms_threshold,
             bool use_nms, const std::vector<std::string>& classes) {
    std::vector<DetectionSet> det_sets = annot::parse_detections_csv(read_file(dets_path));
    if (use_nms)
        for (auto& set : det_sets) set.detections = eval::nms(set.detections, nms_threshold);
    std::vector<LabeledImage> images = load_truth_dir(truth_dir, classes);
    eval::EvaluationReport report = eval::evaluate_dataset(det_sets, images, cfg);
    std::string text = report::format_eval_report({report});
    if (out_path.empty())
        std::cout << text;
    else
        write_file(out_path, text);
    return 0;
}

struct CalibrationTable {
    double default_mm_per_pixel = 0.0;
    std::map<std::string, double> per_image;

    pheno::ScaleCalibration lookup(const std::string& image_id) const {
        auto it = per_image.find(image_id);
        if (it != per_image.end()) return {it->second};
        if (default_mm_per_pixel > 0.0) return {default_mm_per_pixel};
        throw ValueError("no calibration for image '" + image_id +
                         "' and no --mm-per-pixel default");
    }
};

CalibrationTable load_calibration(double mm_per_pixel, const std::string& sidecar) {
    CalibrationTable table;
    table.default_mm_per_pixel = mm_per_pixel;
    if (sidecar.empty()) return table;
    std::istringstream in(read_file(sidecar));
    std::string line;
    if (!std::getline(in, line))
        throw ParseError("'" + sidecar + "': empty calibration file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "image_id,mm_per_pixel")
        throw ParseError("'" + sidecar + "': expected header 'image_id,mm_per_pixel'");
    size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        size_t comma = line.find(',');
        if (comma == std::string::npos)
            throw ParseError("'" + sidecar + "' row " + std::to_string(row) + ": expected 2 fields");
        double v = std::atof(line.substr(comma + 1).c_str());
        if (v <= 0.0)
            throw ValueError("'" + sidecar + "' row " + std::to_string(row) +
                             ": mm_per_pixel must be positive");
        table.per_image[line.substr(0, comma)] = v;
    }
    return table;
}

int run_extract(const std::string& images_dir, const std::string& dets_path,
                const std::string& palette_path, const CalibrationTable& calibration,
                const pheno::PhenotypeConfig& pheno_cfg, const std::string& out_dir,
                std::string timestamp, unsigned jobs) {
    pheno::ColorPalette palette =
        palette_path.empty() ? pheno::default_palette() : pheno::load_palette(palette_path);
    std::vector<DetectionSet> det_sets = annot::parse_detections_csv(read_file(dets_path));
    if (timestamp.empty()) timestamp = now_utc_iso8601();

    std::vector<std::vector<pheno::CherryRecord>> per_image(det_sets.size());
    std::vector<pheno::SummaryRow> summaries(det_sets.size());
    parallel_for(det_sets.size(), jobs, [&](size_t i) {
        const DetectionSet& set = det_sets[i];
        std::string path = images_dir + "/" + set.image_id + ".ppm";
        if (!fs::exists(path))
            throw JoinError("no image file for image_id '" + set.image_id + "' (looked for '" +
                            path + "')");
        img::ImageRGB image = img::read_ppm_file(path);
        per_image[i] = pheno::extract_records(image, set, calibration.lookup(set.image_id),
                                              palette, pheno_cfg);
        summaries[i] = pheno::summarize(per_image[i], timestamp);
    });

    std::vector<pheno::CherryRecord> records;
    for (const auto& batch : per_image)
        records.insert(records.end(), batch.begin(), batch.end());
    report::SheetSet sheets = report::build_sheets(summaries, records);
    report::write_sheets(sheets, out_dir);
    std::cout << "extracted " << records.size() << " cherries from " << det_sets.size()
              << " images into " << out_dir << "\n";
    return 0;
}

int run_stats(const std::string& input_path) {
    std::istringstream in(read_file(input_path));
    std::string line;
    if (!std::getline(in, line))
        throw ParseError("'" + input_path + "': empty input");
    std::vector<double> x, y;
    size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        size_t comma = line.find(',');
        if (comma == std::string::npos)
            throw ParseError("'" + input_path + "' row " + std::to_string(row) +
                             ": expected 'x,y'");
        try {
            x.push_back(std::stod(line.substr(0, comma)));
            y.push_back(std::stod(line.substr(comma + 1)));
        } catch (const std::exception&) {
            throw ValueError("'" + input_path + "' row " + std::to_string(row) +
                             ": non-numeric value");
        }
    }
    stats::StatsSummary s = stats::summarize(x, y);
    std::printf("Count            %zu\n", s.n);
    std::printf("Correlation      %.6f\n", s.r);
    std::printf("Lower 95%%        %.6f\n", s.ci_low);
    std::printf("Upper 95%%        %.6f\n", s.ci_high);
    std::printf("Signif. Prob     %.6g\n", s.p_value);
    std::printf("Covariance       %.4f\n", s.covariance);
    std::printf("Mean x           %.6f\n", s.mean_x);
    std::printf("Std Dev x        %.6f\n", s.sd_x);
    std::printf("Mean y           %.6f\n", s.mean_y);
    std::printf("Std Dev y        %.6f\n", s.sd_y);
    std::printf("Slope            %.6f\n", s.slope);
    std::printf("Intercept        %.6f\n", s.intercept);
    std::printf("R-squared        %.6f\n", s.r_squared);
    std::printf("\nn,r,ci_low,ci_high,p_value,covariance,mean_x,mean_y,sd_x,sd_y,"
                "slope,intercept,r_squared\n");
    std::printf("%zu,%.6f,%.6f,%.6f,%.6g,%.4f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n",
                s.n, s.r, s.ci_low, s.ci_high, s.p_value, s.covariance, s.mean_x, s.mean_y,
                s.sd_x, s.sd_y, s.slope, s.intercept, s.r_squared);
    return 0;
}

int run_report(const std::string& in_dir, const std::string& out_dir) {
    report::SheetSet stored = report::read_sheets(in_dir);
    std::vector<pheno::CherryRecord> records = report::records_from_sheets(stored);

    // Regroup per image and re-derive summaries from the stored records;
    // timestamps are carried over from the stored summary rows.
    std::map<std::string, std::string> timestamps;
    for (const auto& s : stored.summary) timestamps[s.image_id] = s.timestamp;
    std::map<std::string, std::vector<pheno::CherryRecord>> grouped;
    for (auto& rec : records) grouped[rec.image_id].push_back(rec);
    std::vector<pheno::SummaryRow> summaries;
    for (auto& [id, group] : grouped) {
        auto ts = timestamps.find(id);
        summaries.push_back(
            pheno::summarize(group, ts != timestamps.end() ? ts->second : now_utc_iso8601()));
    }
    report::write_sheets(report::build_sheets(summaries, records), out_dir);
    std::cout << "re-emitted " << records.size() << " records into " << out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cherrymetrics: detection evaluation and fruit phenotyping toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    if (const char* env = std::getenv("CHERRYMETRICS_CONFIG")) config_path = env;
    app.add_option("--config", config_path, "flat key=value config file");

    // synth ------------------------------------------------------------
    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic scene with ground truth");
    synth::SceneSpec spec;
    synth::NoiseSpec noise;
    std::string synth_out = "synth_out";
    std::string synth_palette;
    bool with_detections = false;
    synth_cmd->add_option("--out", synth_out, "output directory");
    synth_cmd->add_option("--seed", spec.seed, "scene seed");
    synth_cmd->add_option("--count", spec.cherry_count, "number of cherries");
    synth_cmd->add_option("--width", spec.width, "scene width in pixels");
    synth_cmd->add_option("--height", spec.height, "scene height in pixels");
    synth_cmd->add_option("--radius-min", spec.radius_min, "minimum disc radius");
    synth_cmd->add_option("--radius-max", spec.radius_max, "maximum disc radius");
    synth_cmd->add_option("--min-separation", spec.min_separation, "edge-to-edge disc gap");
    synth_cmd->add_option("--mm-per-pixel", spec.mm_per_pixel, "scale calibration");
    synth_cmd->add_option("--palette", synth_palette, "palette file (class_id r g b)");
    synth_cmd->add_flag("--with-detections", with_detections, "also write detections.csv");
    synth_cmd->add_option("--noise-jitter", noise.jitter_px, "box corner jitter bound, px");
    synth_cmd->add_option("--noise-drop-prob", noise.drop_prob, "per-truth drop probability");
    synth_cmd->add_option("--noise-spurious", noise.spurious_count, "spurious detections");
    synth_cmd->add_option("--noise-seed", noise.seed, "noise seed");
    synth_cmd->add_option("--noise-conf-min", noise.confidence_min, "confidence lower bound");
    synth_cmd->add_option("--noise-conf-max", noise.confidence_max, "confidence upper bound");

    // eval -------------------------------------------------------------
    auto* eval_cmd = app.add_subcommand("eval", "evaluate detections against VOC truth");
    std::string dets_path, truth_dir, eval_out;
    eval::EvalConfig eval_cfg;
    double nms_threshold = 0.5;
    std::string class_csv = "cherry";
    eval_cmd->add_option("--dets", dets_path, "detections CSV")->required();
    eval_cmd->add_option("--truth-dir", truth_dir, "directory of VOC XML files")->required();
    eval_cmd->add_option("--out", eval_out, "report CSV path (stdout when omitted)");
    eval_cmd->add_option("--ct", eval_cfg.ct, "confidence threshold");
    eval_cmd->add_option("--iou-threshold", eval_cfg.iou_threshold, "IoU match threshold");
    auto* nms_opt =
        eval_cmd->add_option("--nms-threshold", nms_threshold, "apply NMS at this IoU first");
    eval_cmd->add_option("--model", eval_cfg.model_label, "model label for the report");
    eval_cmd->add_option("--resize", eval_cfg.resize_label, "resize label (free text)");
    eval_cmd->add_option("--classes", class_csv, "comma-separated class names");

    // extract ----------------------------------------------------------
    auto* extract_cmd = app.add_subcommand("extract", "extract per-fruit traits and sheets");
    std::string images_dir, ex_dets, ex_palette, ex_calibration, ex_out = "sheets", ex_timestamp;
    double mm_per_pixel = 0.0;
    pheno::PhenotypeConfig pheno_cfg;
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    extract_cmd->add_option("--images", images_dir, "directory of <image_id>.ppm files")
        ->required();
    extract_cmd->add_option("--dets", ex_dets, "detections CSV")->required();
    extract_cmd->add_option("--palette", ex_palette, "palette file (class_id r g b)");
    extract_cmd->add_option("--mm-per-pixel", mm_per_pixel, "default scale calibration");
    extract_cmd->add_option("--calibration", ex_calibration,
                            "per-image sidecar CSV (image_id,mm_per_pixel)");
    extract_cmd->add_option("--shrink", pheno_cfg.shrink, "central-region scale factor");
    extract_cmd->add_option("--rise", pheno_cfg.rise, "stem-region height fraction");
    extract_cmd->add_option("--out", ex_out, "output sheet directory");
    extract_cmd->add_option("--timestamp", ex_timestamp, "fixed ISO-8601 timestamp");
    extract_cmd->add_option("--jobs", jobs, "parallel worker count");

    // stats ------------------------------------------------------------
    auto* stats_cmd = app.add_subcommand("stats", "bivariate fit summary from a two-column CSV");
    std::string stats_input;
    stats_cmd->add_option("--input", stats_input, "CSV with header and x,y rows")->required();

    // report -----------------------------------------------------------
    auto* report_cmd = app.add_subcommand("report", "re-emit sheets from stored records");
    std::string report_in, report_out = "sheets";
    report_cmd->add_option("--in", report_in, "directory holding the four sheet CSVs")
        ->required();
    report_cmd->add_option("--out", report_out, "output sheet directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (!config_path.empty()) {
            auto kv = load_config_file(config_path);
            for (auto* cmd : {synth_cmd, eval_cmd, extract_cmd, stats_cmd, report_cmd})
                if (cmd->parsed()) apply_config(*cmd, kv);
        }
        if (synth_cmd->parsed())
            return run_synth(synth_out, spec, noise, with_detections, synth_palette);
        if (eval_cmd->parsed())
            return run_eval(dets_path, truth_dir, eval_out, eval_cfg, nms_threshold,
                            nms_opt->count() > 0, parse_class_list(class_csv));
        if (extract_cmd->parsed())
            return run_extract(images_dir, ex_dets, ex_palette,
                               load_calibration(mm_per_pixel, ex_calibration), pheno_cfg,
                               ex_out, ex_timestamp, jobs);
        if (stats_cmd->parsed()) return run_stats(stats_input);
        if (report_cmd->parsed()) return run_report(report_in, report_out);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
