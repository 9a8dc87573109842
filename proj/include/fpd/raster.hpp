#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "fpd/errors.hpp"

namespace fpd {

struct Point {
    int x = 0;
    int y = 0;
};

// Row-major 2-D sample grid. GrayImage holds intensities in [0,1]; intermediate
// rasters (gradients, filter responses) are unbounded.
template <typename T>
struct Raster {
    int width = 0;
    int height = 0;
    std::vector<T> data;

    Raster() = default;
    Raster(int w, int h, T fill = T{}) : width(w), height(h) {
        if (w <= 0 || h <= 0) throw InvalidInput("raster dimensions must be positive");
        data.assign(static_cast<std::size_t>(w) * h, fill);
    }

    bool empty() const { return width <= 0 || height <= 0; }
    std::size_t size() const { return data.size(); }

    T& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    const T& at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }

    bool inside(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }

    bool same_dims(const Raster& o) const { return width == o.width && height == o.height; }
};

using GrayImage = Raster<double>;
using RealRaster = Raster<double>;
using ComplexRaster = Raster<std::complex<double>>;
// 0 = background, 1 = foreground. PGM dumps map foreground to 255.
using Mask = Raster<std::uint8_t>;

// Square kernel with odd span, centered at (size-1)/2. Taps row-major over
// offsets (dx, dy) in [-radius, +radius].
template <typename T>
struct Kernel2DT {
    int size = 0;
    std::vector<T> taps;

    Kernel2DT() = default;
    Kernel2DT(int s, T fill = T{}) : size(s) {
        if (s < 3 || s % 2 == 0) throw InvalidInput("kernel size must be odd and >= 3");
        taps.assign(static_cast<std::size_t>(s) * s, fill);
    }

    int radius() const { return (size - 1) / 2; }
    T& at(int dx, int dy) { return taps[static_cast<std::size_t>(dy + radius()) * size + (dx + radius())]; }
    const T& at(int dx, int dy) const {
        return taps[static_cast<std::size_t>(dy + radius()) * size + (dx + radius())];
    }
};

using Kernel2D = Kernel2DT<double>;

}  // namespace fpd
