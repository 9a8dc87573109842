#pragma once

#include "fpd/raster.hpp"

namespace fpd {

// Contiguous foreground runs from the core along -x, +x, -y, +y. The core
// pixel itself counts once in each direction; a background core gives zeros.
struct AxisCounts {
    int left = 0;
    int right = 0;
    int up = 0;
    int down = 0;
};

AxisCounts axis_counts(const Mask& mask, Point core);

struct PartialityResult {
    AxisCounts counts;
    double normLeft = 0.0;
    double normRight = 0.0;
    double normUp = 0.0;
    double normDown = 0.0;
    double minRatio = 0.0;
    double threshold = 0.6;
    bool isPartial = true;
};

// Normalizes each count by the max count; partial iff min(normalized) <= T.
// Throws DegenerateCore when every count is zero.
PartialityResult classify(const AxisCounts& counts, double T = 0.6);

}  // namespace fpd
