#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "fpd/corepoint.hpp"
#include "fpd/enhancement.hpp"
#include "fpd/orientation.hpp"
#include "fpd/partiality.hpp"
#include "fpd/raster.hpp"
#include "fpd/segmentation.hpp"

namespace fpd {

struct PipelineConfig {
    int W = 32;                 // filter window; kernel spans W+1 taps when W is even
    double sigmaFilter = 8.0;   // gaussian sigma of the complex filter
    GaborParams gabor{};
    int segBlock = 16;          // segmentation block size
    int orientCoarse = 16;      // orientation grid feeding the Gabor stage
    int orientFine = 8;         // re-estimation grid after binarization
    double T = 0.6;             // partiality threshold on the min axis ratio
    double minResponse = 4.0;   // raw peak variance must reach this multiple of the mean
    bool tensorSquared = false; // filter c^2 instead of ||c|| (flagged alternate mode)
};

void validate(const PipelineConfig& cfg);

// Strict schema: unknown keys are rejected, all values type-checked.
PipelineConfig config_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json config_to_json(const PipelineConfig& cfg);
PipelineConfig load_config(const std::string& path);

// Intermediate rasters for --dump; populated only when requested.
struct DetectionArtifacts {
    GrayImage stretched;
    Mask mask;
    OrientationField coarse;
    GrayImage enhanced;
    Mask binary;
    OrientationField fine;
    RealRaster responseMagnitude;
    VarianceImage variance;
};

struct Detection {
    PartialityResult partiality;
    CoreDetection core;
    // "" on the normal path; otherwise "no-foreground", "no-core", or
    // "degenerate-core", each of which forces a partial verdict.
    std::string diagnostic;
};

Detection run_detection(const GrayImage& img, const PipelineConfig& cfg,
                        DetectionArtifacts* artifacts = nullptr);

nlohmann::ordered_json detection_to_json(const Detection& det, const std::string& file);

}  // namespace fpd
