#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fpd/eval.hpp"
#include "fpd/imageio.hpp"
#include "fpd/imgcore.hpp"
#include "fpd/pipeline.hpp"
#include "fpd/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitPartial = 2;

fpd::PipelineConfig load_config_opt(const std::string& path) {
    return path.empty() ? fpd::PipelineConfig{} : fpd::load_config(path);
}

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// ---- intermediate dumps ----

fpd::GrayImage upsample_variance(const fpd::VarianceImage& var, int width, int height) {
    fpd::GrayImage up(width, height);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            up.at(x, y) = var.valueAt(std::min(x / var.blockSize, var.cols - 1),
                                      std::min(y / var.blockSize, var.rows - 1));
    return up;
}

fpd::GrayImage draw_orientation(const fpd::GrayImage& base, const fpd::OrientationField& f) {
    fpd::GrayImage out = base;
    const double half = f.blockSize / 2.0 - 1.0;
    for (int by = 0; by < f.rows; ++by)
        for (int bx = 0; bx < f.cols; ++bx) {
            if (f.coherenceAt(bx, by) <= 0.0) continue;
            const double cx = std::min(bx * f.blockSize + f.blockSize / 2, base.width - 1);
            const double cy = std::min(by * f.blockSize + f.blockSize / 2, base.height - 1);
            const double th = f.thetaAt(bx, by);
            for (double t = -half; t <= half; t += 0.5) {
                const int px = static_cast<int>(std::lround(cx + t * std::cos(th)));
                const int py = static_cast<int>(std::lround(cy + t * std::sin(th)));
                if (out.inside(px, py)) out.at(px, py) = 1.0;
            }
        }
    return out;
}

fpd::GrayImage draw_core(const fpd::GrayImage& base, int x, int y) {
    fpd::GrayImage out = base;
    for (int d = -15; d <= 15; ++d) {
        if (out.inside(x + d, y)) out.at(x + d, y) = 1.0;
        if (out.inside(x, y + d)) out.at(x, y + d) = 1.0;
    }
    return out;
}

void write_dumps(const std::string& dir, const fpd::DetectionArtifacts& art,
                 const fpd::Detection& det) {
    fs::create_directories(dir);
    const fs::path d(dir);
    fpd::save_pgm((d / "mask.pgm").string(), art.mask);
    fpd::save_pgm((d / "gabor.pgm").string(), art.enhanced);
    const fpd::GradientPair grad = fpd::gradients(art.enhanced);
    fpd::save_pgm((d / "gradient_x.pgm").string(), fpd::normalize_minmax(grad.fx));
    fpd::save_pgm((d / "gradient_y.pgm").string(), fpd::normalize_minmax(grad.fy));
    fpd::save_pgm((d / "binary.pgm").string(), art.binary);
    fpd::save_pgm((d / "orientation.pgm").string(), draw_orientation(art.stretched, art.coarse));
    fpd::save_pgm((d / "orientation_fine.pgm").string(), draw_orientation(art.stretched, art.fine));
    fpd::save_pgm((d / "response.pgm").string(), fpd::normalize_minmax(art.responseMagnitude));
    fpd::save_pgm((d / "variance.pgm").string(),
                  upsample_variance(art.variance, art.stretched.width, art.stretched.height));
    fpd::save_pgm((d / "core.pgm").string(), draw_core(art.stretched, det.core.x, det.core.y));
}

// ---- synth spec JSON ----

void reject_unknown(const ordered_json& j, std::initializer_list<const char*> known,
                    const char* where) {
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const char* k : known)
            if (item.key() == k) ok = true;
        if (!ok) throw fpd::InvalidInput(std::string("synth spec: unknown key \"") + where +
                                         item.key() + "\"");
    }
}

fpd::SynthSpec synth_spec_from_json(const ordered_json& j) {
    if (!j.is_object()) throw fpd::InvalidInput("synth spec: expected a JSON object");
    reject_unknown(j,
                   {"width", "height", "pattern", "core", "ridgePeriod", "noiseSigma",
                    "foregroundRadius", "seed"},
                   "");
    fpd::SynthSpec spec;
    try {
        if (j.contains("width")) spec.width = j.at("width").get<int>();
        if (j.contains("height")) spec.height = j.at("height").get<int>();
        if (j.contains("pattern")) spec.pattern = fpd::pattern_from_string(j.at("pattern").get<std::string>());
        if (j.contains("core") && !j.at("core").is_null()) {
            const auto& c = j.at("core");
            reject_unknown(c, {"x", "y"}, "core.");
            spec.coreX = c.at("x").get<int>();
            spec.coreY = c.at("y").get<int>();
        }
        if (j.contains("ridgePeriod")) spec.ridgePeriod = j.at("ridgePeriod").get<double>();
        if (j.contains("noiseSigma")) spec.noiseSigma = j.at("noiseSigma").get<double>();
        if (j.contains("foregroundRadius"))
            spec.foregroundRadius = j.at("foregroundRadius").get<double>();
        if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        throw fpd::InvalidInput(std::string("synth spec: bad value: ") + e.what());
    }
    fpd::validate(spec);
    return spec;
}

ordered_json synth_spec_to_json(const fpd::SynthSpec& spec) {
    ordered_json j;
    j["width"] = spec.width;
    j["height"] = spec.height;
    j["pattern"] = fpd::to_string(spec.pattern);
    if (spec.pattern == fpd::Pattern::PlainArch)
        j["core"] = nullptr;
    else
        j["core"] = {{"x", spec.coreX}, {"y", spec.coreY}};
    j["ridgePeriod"] = spec.ridgePeriod;
    j["noiseSigma"] = spec.noiseSigma;
    j["foregroundRadius"] = spec.foregroundRadius;
    j["seed"] = spec.seed;
    return j;
}

// ---- metrics printing ----

std::string pct(const std::optional<double>& v) {
    if (!v) return "undefined";
    char buf[16];
    std::snprintf(buf, sizeof buf, "%.1f%%", *v * 100.0);
    return buf;
}

void print_metrics(const fpd::ConfusionMatrix& cm, const fpd::Metrics& m) {
    std::printf("TP %lld  FP %lld  TN %lld  FN %lld\n", cm.tp, cm.fp, cm.tn, cm.fn);
    std::printf("%-13s %-13s %s\n", "Sensitivity", "Specificity", "Accuracy");
    std::printf("%-13s %-13s %s\n", pct(m.sensitivity).c_str(), pct(m.specificity).c_str(),
                pct(m.accuracy).c_str());
}

ordered_json metrics_json(const fpd::Metrics& m) {
    ordered_json j;
    j["sensitivity"] = m.sensitivity ? ordered_json(*m.sensitivity) : ordered_json(nullptr);
    j["specificity"] = m.specificity ? ordered_json(*m.specificity) : ordered_json(nullptr);
    j["accuracy"] = m.accuracy ? ordered_json(*m.accuracy) : ordered_json(nullptr);
    return j;
}

ordered_json matrix_json(const fpd::ConfusionMatrix& cm) {
    return ordered_json{{"tp", cm.tp}, {"fp", cm.fp}, {"tn", cm.tn}, {"fn", cm.fn}};
}

std::vector<double> parse_sweep(const std::string& s) {
    double lo = 0, hi = 0, step = 0;
    char extra = 0;
    if (std::sscanf(s.c_str(), "%lf:%lf:%lf%c", &lo, &hi, &step, &extra) != 3)
        throw fpd::InvalidInput("bad --threshold-sweep, expected LO:HI:STEP");
    if (step <= 0.0 || lo <= 0.0 || hi > 1.0 || lo > hi)
        throw fpd::InvalidInput("bad --threshold-sweep range");
    std::vector<double> ts;
    for (double t = lo; t <= hi + 1e-9; t += step) {
        ts.push_back(std::min(t, 1.0));
        if (ts.size() > 1000) throw fpd::InvalidInput("--threshold-sweep has too many steps");
    }
    return ts;
}

// ---- subcommands ----

int cmd_detect(const std::string& imagePath, const std::string& configPath,
               const std::string& dumpDir, double thresholdOverride) {
    fpd::PipelineConfig cfg = load_config_opt(configPath);
    if (thresholdOverride > 0.0) {
        cfg.T = thresholdOverride;
        fpd::validate(cfg);
    }
    const fpd::GrayImage img = fpd::load_image(imagePath);
    fpd::DetectionArtifacts art;
    const fpd::Detection det = fpd::run_detection(img, cfg, dumpDir.empty() ? nullptr : &art);
    if (!dumpDir.empty()) write_dumps(dumpDir, art, det);
    std::cout << fpd::detection_to_json(det, imagePath).dump() << "\n";
    return det.partiality.isPartial ? kExitPartial : kExitOk;
}

int cmd_evaluate(const std::string& root, const std::string& labelsCsv,
                 const std::string& configPath, const std::string& reportPath,
                 const std::string& csvPath, int jobs, const std::string& sweepSpec) {
    const fpd::PipelineConfig cfg = load_config_opt(configPath);
    const std::vector<double> sweep = sweepSpec.empty() ? std::vector<double>{} : parse_sweep(sweepSpec);
    const auto samples = fpd::load_labels(labelsCsv, root);
    const fpd::EvalOutcome outcome = fpd::evaluate(samples, root, cfg, jobs);

    print_metrics(outcome.matrix, fpd::metrics(outcome.matrix));

    ordered_json report;
    report["config"] = fpd::config_to_json(cfg);
    report["matrix"] = matrix_json(outcome.matrix);
    report["metrics"] = metrics_json(fpd::metrics(outcome.matrix));
    report["samples"] = ordered_json::array();
    for (const auto& rec : outcome.records) {
        ordered_json row = fpd::detection_to_json(rec.detection, rec.file);
        row["label"] = rec.label;
        if (!rec.error.empty()) row["error"] = rec.error;
        report["samples"].push_back(std::move(row));
    }
    if (!sweep.empty()) {
        report["sweep"] = ordered_json::array();
        for (double t : sweep) {
            fpd::ConfusionMatrix cm;
            for (const auto& rec : outcome.records) {
                const bool partial = rec.detection.partiality.minRatio <= t;
                if (rec.label)
                    (partial ? cm.tp : cm.fn) += 1;
                else
                    (partial ? cm.fp : cm.tn) += 1;
            }
            const fpd::Metrics m = fpd::metrics(cm);
            std::printf("T=%.3f  sens %s  spec %s  acc %s\n", t, pct(m.sensitivity).c_str(),
                        pct(m.specificity).c_str(), pct(m.accuracy).c_str());
            report["sweep"].push_back(ordered_json{
                {"threshold", t}, {"matrix", matrix_json(cm)}, {"metrics", metrics_json(m)}});
        }
    }
    report["generatedAt"] = iso_timestamp();  // the one non-deterministic field

    if (!reportPath.empty()) {
        std::ofstream out(reportPath);
        if (!out) throw fpd::IoError("cannot write report " + reportPath);
        out << report.dump(2) << "\n";
    }
    if (!csvPath.empty()) {
        std::ofstream out(csvPath);
        if (!out) throw fpd::IoError("cannot write csv " + csvPath);
        out << "file,label,predicted,minRatio,diagnostic\n";
        for (const auto& rec : outcome.records)
            out << rec.file << "," << (rec.label ? 1 : 0) << "," << (rec.predicted ? 1 : 0) << ","
                << rec.detection.partiality.minRatio << "," << rec.detection.diagnostic << "\n";
    }
    return kExitOk;
}

int cmd_synth(const std::string& specPath, const std::string& outDir, int count,
              const std::string& cropMode) {
    if (count < 1) throw fpd::InvalidInput("--count must be at least 1");
    if (cropMode != "none" && cropMode != "half")
        throw fpd::InvalidInput("--crop must be none or half");

    std::ifstream in(specPath);
    if (!in) throw fpd::IoError("cannot open spec " + specPath);
    ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw fpd::InvalidInput(std::string("synth spec: parse error: ") + e.what());
    }
    const fpd::SynthSpec base = synth_spec_from_json(j);

    fs::create_directories(outDir);
    std::ofstream labels(fs::path(outDir) / "labels.csv");
    if (!labels) throw fpd::IoError("cannot write labels.csv");

    for (int i = 0; i < count; ++i) {
        fpd::SynthSpec spec = base;
        spec.seed = base.seed + static_cast<std::uint64_t>(i);
        if (spec.pattern != fpd::Pattern::PlainArch && count > 1) {
            // Deterministic per-image core jitter, kept inside the disk.
            std::mt19937_64 rng(base.seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(i));
            std::uniform_int_distribution<int> d(-15, 15);
            const int jx = d(rng), jy = d(rng);
            fpd::SynthSpec jittered = spec;
            jittered.coreX += jx;
            jittered.coreY += jy;
            try {
                fpd::validate(jittered);
                spec = jittered;
            } catch (const fpd::InvalidInput&) {
                // jitter pushed the core out of the disk; keep the base core
            }
        }
        const fpd::SynthOutput out = fpd::generate(spec);

        char stem[64];
        std::snprintf(stem, sizeof stem, "%s_%03d", fpd::to_string(spec.pattern).c_str(), i);
        const std::string imgName = std::string(stem) + ".pgm";
        fpd::save_pgm((fs::path(outDir) / imgName).string(), out.image);

        ordered_json side;
        side["file"] = imgName;
        side["pattern"] = fpd::to_string(spec.pattern);
        side["core"] = out.core ? ordered_json{{"x", out.core->x}, {"y", out.core->y}}
                                : ordered_json(nullptr);
        side["partial"] = false;
        side["spec"] = synth_spec_to_json(spec);
        std::ofstream sideOut(fs::path(outDir) / (std::string(stem) + ".json"));
        sideOut << side.dump(2) << "\n";
        labels << imgName << ",0\n";

        if (cropMode == "half") {
            const fpd::Point core =
                out.core ? *out.core : fpd::Point{spec.width / 2, spec.height / 2};
            const fpd::GrayImage cropped = fpd::crop_half(out.image, core, i % 2 == 1);
            const std::string cropName = std::string(stem) + "_crop.pgm";
            fpd::save_pgm((fs::path(outDir) / cropName).string(), cropped);
            ordered_json cside;
            cside["file"] = cropName;
            cside["pattern"] = fpd::to_string(spec.pattern);
            cside["core"] = side["core"];
            cside["partial"] = true;
            cside["croppedFrom"] = imgName;
            std::ofstream csideOut(fs::path(outDir) / (std::string(stem) + "_crop.json"));
            csideOut << cside.dump(2) << "\n";
            labels << cropName << ",1\n";
        }
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Partial fingerprint capture detector"};
    app.require_subcommand(1);

    std::string imagePath, configPath, dumpDir;
    double thresholdOverride = -1.0;
    auto* detect = app.add_subcommand("detect", "Classify a single image as partial/non-partial");
    detect->add_option("image", imagePath, "Image file (PGM or 8-bit grayscale TIFF)")->required();
    detect->add_option("--config", configPath, "Pipeline config JSON")->envname("FPDETECT_CONFIG");
    detect->add_option("--dump", dumpDir, "Directory for intermediate-image dumps");
    detect->add_option("--threshold", thresholdOverride, "Override the partiality threshold");

    std::string root, labelsCsv, reportPath, csvPath, sweepSpec;
    int jobs = 1;
    auto* evaluate = app.add_subcommand("evaluate", "Batch-classify a labeled dataset");
    evaluate->add_option("root", root, "Image root directory")->required();
    evaluate->add_option("labels", labelsCsv, "CSV of filename,partial rows")->required();
    evaluate->add_option("--config", configPath, "Pipeline config JSON")->envname("FPDETECT_CONFIG");
    evaluate->add_option("--report", reportPath, "Write the full JSON report here");
    evaluate->add_option("--csv", csvPath, "Write per-sample rows as CSV");
    evaluate->add_option("--jobs", jobs, "Worker threads");
    evaluate->add_option("--threshold-sweep", sweepSpec, "Re-score verdicts at LO:HI:STEP thresholds");

    std::string specPath, outDir, cropMode = "none";
    int count = 1;
    auto* synth = app.add_subcommand("synth", "Generate synthetic prints with ground truth");
    synth->add_option("spec", specPath, "Generator spec JSON")->required();
    synth->add_option("outdir", outDir, "Output directory")->required();
    synth->add_option("--count", count, "Number of images");
    synth->add_option("--crop", cropMode, "none, or half to also emit half-cropped variants");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (detect->parsed()) return cmd_detect(imagePath, configPath, dumpDir, thresholdOverride);
        if (evaluate->parsed())
            return cmd_evaluate(root, labelsCsv, configPath, reportPath, csvPath, jobs, sweepSpec);
        if (synth->parsed()) return cmd_synth(specPath, outDir, count, cropMode);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
