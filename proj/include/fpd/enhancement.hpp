#pragma once

#include "fpd/orientation.hpp"
#include "fpd/raster.hpp"

namespace fpd {

struct GaborParams {
    double frequency = 1.0 / 9.0;  // cycles/pixel, tuned to a ~9 px ridge period
    double sigmaX = 4.0;
    double sigmaY = 4.0;
    int kernelSize = 17;
};

// Even-symmetric (cosine) Gabor tuned to `theta`, DC-compensated so flat input
// yields zero response.
Kernel2D gabor_kernel(double theta, const GaborParams& params);

// Filters each block with the kernel aligned to the block's orientation;
// zero-coherence blocks pass through unfiltered. Output min-max normalized.
GrayImage gabor_enhance(const GrayImage& img, const OrientationField& field,
                        const GaborParams& params);

// Per-pixel threshold at the local block mean; >= mean becomes foreground.
Mask binarize(const GrayImage& img, int blockSize = 16);

}  // namespace fpd
