#pragma once

#include <algorithm>
#include <type_traits>

#include "fpd/raster.hpp"

namespace fpd {

struct GradientPair {
    RealRaster fx;
    RealRaster fy;
};

// Linear remap of [min, max] onto [0, 1]; constant images map to all-zero.
GrayImage contrast_stretch(const GrayImage& img);

// Same remap for arbitrary real rasters (used on variance and response rasters).
GrayImage normalize_minmax(const RealRaster& img);

// 3x3 Sobel, responses scaled by 1/8, replicated edges. fy grows downward (+y).
GradientPair gradients(const GrayImage& img);

// Unnormalized taps exp(-(x^2+y^2) / 2 sigma^2); downstream stages min-max
// normalize their outputs, so the absolute scale is irrelevant.
Kernel2D gaussian_kernel(double sigma, int size);

// Sliding-window correlation (no kernel flip) with replicated edges. Output
// dimensions match the input. Works for real or complex taps; any type with
// {size, taps, radius()} shaped like Kernel2DT qualifies.
template <typename S, typename KernelLike>
auto convolve(const Raster<S>& img, const KernelLike& kernel) {
    using KT = std::decay_t<decltype(kernel.taps[0])>;
    using OT = decltype(std::declval<S>() * std::declval<KT>());
    if (img.empty()) throw InvalidInput("convolve: empty image");
    if (kernel.size < 3 || kernel.size % 2 == 0 ||
        kernel.taps.size() != static_cast<std::size_t>(kernel.size) * kernel.size)
        throw InvalidInput("convolve: malformed kernel");

    const int r = kernel.radius();
    Raster<OT> out(img.width, img.height);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            OT acc{};
            for (int dy = -r; dy <= r; ++dy) {
                const int sy = std::clamp(y + dy, 0, img.height - 1);
                const std::size_t krow = static_cast<std::size_t>(dy + r) * kernel.size;
                for (int dx = -r; dx <= r; ++dx) {
                    const int sx = std::clamp(x + dx, 0, img.width - 1);
                    acc += img.at(sx, sy) * kernel.taps[krow + (dx + r)];
                }
            }
            out.at(x, y) = acc;
        }
    }
    return out;
}

}  // namespace fpd
