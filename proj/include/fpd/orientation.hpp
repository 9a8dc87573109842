#pragma once

#include <vector>

#include "fpd/raster.hpp"

namespace fpd {

// Per-block ridge direction (radians, [0, pi)) with coherence in [0, 1].
// Grid covers the image with ceil division; edge blocks may be smaller.
struct OrientationField {
    int blockSize = 16;
    int cols = 0;
    int rows = 0;
    std::vector<double> theta;
    std::vector<double> coherence;

    double thetaAt(int bx, int by) const { return theta[static_cast<std::size_t>(by) * cols + bx]; }
    double coherenceAt(int bx, int by) const {
        return coherence[static_cast<std::size_t>(by) * cols + bx];
    }
};

// Averaged squared gradients: theta = atan2(sum 2 fx fy, sum fx^2 - fy^2) / 2 + pi/2.
// Flat blocks get theta 0 and coherence 0.
OrientationField estimate_orientation(const GrayImage& img, int blockSize);

}  // namespace fpd
