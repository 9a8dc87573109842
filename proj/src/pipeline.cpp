#include "fpd/pipeline.hpp"

#include <fstream>

#include "fpd/imgcore.hpp"

namespace fpd {

using nlohmann::ordered_json;

void validate(const PipelineConfig& cfg) {
    if (cfg.W < 4) throw InvalidInput("config: W must be at least 4");
    if (cfg.sigmaFilter <= 0.0) throw InvalidInput("config: sigmaFilter must be positive");
    if (cfg.segBlock < 2 || cfg.orientCoarse < 2 || cfg.orientFine < 2)
        throw InvalidInput("config: block sizes must be at least 2");
    if (cfg.T <= 0.0 || cfg.T > 1.0) throw InvalidInput("config: T must be in (0, 1]");
    if (cfg.minResponse <= 0.0) throw InvalidInput("config: minResponse must be positive");
    if (cfg.gabor.frequency <= 0.0 || cfg.gabor.frequency > 0.5)
        throw InvalidInput("config: gabor frequency must be in (0, 0.5]");
    if (cfg.gabor.sigmaX <= 0.0 || cfg.gabor.sigmaY <= 0.0)
        throw InvalidInput("config: gabor sigmas must be positive");
    if (cfg.gabor.kernelSize < 3 || cfg.gabor.kernelSize % 2 == 0)
        throw InvalidInput("config: gabor kernel size must be odd and >= 3");
}

namespace {

void reject_unknown_keys(const ordered_json& j, std::initializer_list<const char*> known,
                         const std::string& where) {
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const char* k : known)
            if (item.key() == k) {
                ok = true;
                break;
            }
        if (!ok) throw InvalidInput("config: unknown key \"" + where + item.key() + "\"");
    }
}

template <typename T>
void read_field(const ordered_json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw InvalidInput(std::string("config: bad value for \"") + key + "\"");
    }
}

}  // namespace

PipelineConfig config_from_json(const ordered_json& j) {
    if (!j.is_object()) throw InvalidInput("config: expected a JSON object");
    reject_unknown_keys(j,
                        {"W", "sigmaFilter", "gabor", "segBlock", "orientCoarse", "orientFine",
                         "T", "minResponse", "tensorSquared"},
                        "");
    PipelineConfig cfg;
    read_field(j, "W", cfg.W);
    read_field(j, "sigmaFilter", cfg.sigmaFilter);
    if (j.contains("gabor")) {
        const auto& g = j.at("gabor");
        if (!g.is_object()) throw InvalidInput("config: gabor must be an object");
        reject_unknown_keys(g, {"frequency", "sigmaX", "sigmaY", "kernelSize"}, "gabor.");
        read_field(g, "frequency", cfg.gabor.frequency);
        read_field(g, "sigmaX", cfg.gabor.sigmaX);
        read_field(g, "sigmaY", cfg.gabor.sigmaY);
        read_field(g, "kernelSize", cfg.gabor.kernelSize);
    }
    read_field(j, "segBlock", cfg.segBlock);
    read_field(j, "orientCoarse", cfg.orientCoarse);
    read_field(j, "orientFine", cfg.orientFine);
    read_field(j, "T", cfg.T);
    read_field(j, "minResponse", cfg.minResponse);
    read_field(j, "tensorSquared", cfg.tensorSquared);
    validate(cfg);
    return cfg;
}

ordered_json config_to_json(const PipelineConfig& cfg) {
    ordered_json j;
    j["W"] = cfg.W;
    j["sigmaFilter"] = cfg.sigmaFilter;
    j["gabor"] = {{"frequency", cfg.gabor.frequency},
                  {"sigmaX", cfg.gabor.sigmaX},
                  {"sigmaY", cfg.gabor.sigmaY},
                  {"kernelSize", cfg.gabor.kernelSize}};
    j["segBlock"] = cfg.segBlock;
    j["orientCoarse"] = cfg.orientCoarse;
    j["orientFine"] = cfg.orientFine;
    j["T"] = cfg.T;
    j["minResponse"] = cfg.minResponse;
    j["tensorSquared"] = cfg.tensorSquared;
    return j;
}

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path);
    ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput("config: parse error in " + path + ": " + e.what());
    }
    return config_from_json(j);
}

namespace {

PartialityResult degenerate_partial(double T) {
    PartialityResult r;
    r.threshold = T;
    r.minRatio = 0.0;
    r.isPartial = true;
    return r;
}

GrayImage mask_to_gray(const Mask& m) {
    GrayImage g(m.width, m.height);
    for (std::size_t i = 0; i < m.data.size(); ++i) g.data[i] = m.data[i] ? 1.0 : 0.0;
    return g;
}

}  // namespace

Detection run_detection(const GrayImage& img, const PipelineConfig& cfg,
                        DetectionArtifacts* artifacts) {
    validate(cfg);
    if (img.empty()) throw InvalidInput("run_detection: empty image");

    Detection out;
    out.partiality = degenerate_partial(cfg.T);

    Mask mask;
    try {
        mask = segment(img, cfg.segBlock);
    } catch (const NoForeground&) {
        out.diagnostic = "no-foreground";
        return out;
    }

    const GrayImage stretched = contrast_stretch(img);
    const OrientationField coarse = estimate_orientation(stretched, cfg.orientCoarse);
    const GrayImage enhanced = gabor_enhance(stretched, coarse, cfg.gabor);
    const Mask binary = binarize(enhanced, cfg.segBlock);

    const ComplexField field = tensor_field(gradients(enhanced));
    const int ksize = cfg.W % 2 ? cfg.W : cfg.W + 1;
    const auto kPlus = complex_filter_kernel(+1, cfg.sigmaFilter, ksize);
    const auto kMinus = complex_filter_kernel(-1, cfg.sigmaFilter, ksize);
    const ComplexRaster rPlus =
        cfg.tensorSquared ? filter_response_squared(field, kPlus) : filter_response(field, kPlus);
    const ComplexRaster rMinus =
        cfg.tensorSquared ? filter_response_squared(field, kMinus) : filter_response(field, kMinus);
    const VarianceImage varPlus = variance_image(rPlus, cfg.W);
    const VarianceImage varMinus = variance_image(rMinus, cfg.W);
    const int margin = (ksize - 1) / 2 + varPlus.blockSize;

    if (artifacts) {
        artifacts->stretched = stretched;
        artifacts->mask = mask;
        artifacts->coarse = coarse;
        artifacts->enhanced = enhanced;
        artifacts->binary = binary;
        artifacts->fine = estimate_orientation(mask_to_gray(binary), cfg.orientFine);
        artifacts->responseMagnitude = RealRaster(rPlus.width, rPlus.height);
        for (std::size_t i = 0; i < rPlus.data.size(); ++i)
            artifacts->responseMagnitude.data[i] = std::abs(rPlus.data[i]);
        artifacts->variance = varPlus;
    }

    CoreDetection core;
    try {
        core = locate_core(varPlus, mask, cfg.minResponse, margin);
    } catch (const NoForeground&) {
        out.diagnostic = "no-core";
        return out;
    }
    try {
        const CoreDetection d = locate_core(varMinus, mask, cfg.minResponse, margin);
        core.secondary = CorePeak{d.found, d.x, d.y, d.peakResponse, d.relResponse};
    } catch (const NoForeground&) {
    }
    out.core = core;

    if (!core.found) {
        out.diagnostic = "no-core";
        return out;
    }
    const AxisCounts counts = axis_counts(mask, {core.x, core.y});
    if (counts.left == 0 && counts.right == 0 && counts.up == 0 && counts.down == 0) {
        out.diagnostic = "degenerate-core";
        return out;
    }
    out.partiality = classify(counts, cfg.T);
    return out;
}

ordered_json detection_to_json(const Detection& det, const std::string& file) {
    ordered_json j;
    j["file"] = file;
    j["core"] = {{"x", det.core.x}, {"y", det.core.y}, {"found", det.core.found}};
    j["counts"] = {{"left", det.partiality.counts.left},
                   {"right", det.partiality.counts.right},
                   {"up", det.partiality.counts.up},
                   {"down", det.partiality.counts.down}};
    j["normalized"] = {{"left", det.partiality.normLeft},
                       {"right", det.partiality.normRight},
                       {"up", det.partiality.normUp},
                       {"down", det.partiality.normDown}};
    j["minRatio"] = det.partiality.minRatio;
    j["threshold"] = det.partiality.threshold;
    j["partial"] = det.partiality.isPartial;
    j["diagnostic"] = det.diagnostic;
    return j;
}

}  // namespace fpd
