#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "fpd/imgcore.hpp"
#include "fpd/raster.hpp"

namespace fpd {

// Per-pixel complex gradient c = fx + i*fy with its magnitude raster.
struct ComplexField {
    int width = 0;
    int height = 0;
    ComplexRaster values;
    RealRaster magnitude;
};

ComplexField tensor_field(const GradientPair& grad);

// First-order rotational filter: tap(x, y) = (x + i*y)^order * exp(-(x^2+y^2)/2 sigma^2),
// order in {+1, -1}. The center tap is exactly zero; order -1 taps are the
// complex conjugates of order +1.
struct ComplexFilterKernel {
    int order = 1;
    double sigma = 8.0;
    int size = 33;
    std::vector<std::complex<double>> taps;

    int radius() const { return (size - 1) / 2; }
    const std::complex<double>& at(int dx, int dy) const {
        return taps[static_cast<std::size_t>(dy + radius()) * size + (dx + radius())];
    }
};

ComplexFilterKernel complex_filter_kernel(int order, double sigma, int size);

// Correlates the magnitude raster ||c|| with the kernel (replicated edges).
// The kernel factors as (x +/- i*y) * g(x) * g(y), so the 2-D correlation is
// evaluated as two separable passes per component; per-axis index clamping
// makes that identical to the direct 2-D window.
ComplexRaster filter_response(const ComplexField& field, const ComplexFilterKernel& kernel);

// Alternate mode: correlates the squared complex field c^2 instead of ||c||,
// which makes the two filter orders genuinely different responses.
ComplexRaster filter_response_squared(const ComplexField& field, const ComplexFilterKernel& kernel);

// Block-wise population variance of |R| over non-overlapping (W/4)^2 blocks.
// `values` is min-max normalized to [0,1]; `raw` keeps the unnormalized
// variances, which the detection threshold is relative to.
struct VarianceImage {
    int blockSize = 8;
    int cols = 0;
    int rows = 0;
    std::vector<double> values;
    std::vector<double> raw;

    double valueAt(int bx, int by) const { return values[static_cast<std::size_t>(by) * cols + bx]; }
    double rawAt(int bx, int by) const { return raw[static_cast<std::size_t>(by) * cols + bx]; }
};

VarianceImage variance_image(const ComplexRaster& response, int W);

struct CorePeak {
    bool found = false;
    int x = 0;
    int y = 0;
    double peakResponse = 0.0;  // normalized variance at the peak block
    double relResponse = 0.0;   // raw peak / mean raw variance over candidates
};

struct CoreDetection {
    bool found = false;
    int x = 0;
    int y = 0;
    double peakResponse = 0.0;
    double relResponse = 0.0;
    std::optional<CorePeak> secondary;  // order -1 pass; filled by the pipeline
};

// Argmax block among candidates, reported as the block-center pixel; row-major
// tie-break. Candidates are blocks whose surrounding (2*margin+1)^2 pixel
// window lies fully inside the frame and fully in mask foreground — gradient
// steps at frame borders and mask rims produce response bands that would
// otherwise outgun any genuine singular point. found requires the raw peak to
// reach minResponse times the mean raw variance over the candidates.
CoreDetection locate_core(const VarianceImage& var, const Mask& mask, double minResponse,
                          int margin = 24);

}  // namespace fpd
