#include "fpd/imgcore.hpp"

#include <cmath>

namespace fpd {

GrayImage normalize_minmax(const RealRaster& img) {
    if (img.empty()) throw InvalidInput("normalize_minmax: empty raster");
    double lo = img.data[0], hi = img.data[0];
    for (double v : img.data) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    GrayImage out(img.width, img.height);
    if (hi <= lo) return out;  // constant raster -> all zero
    const double span = hi - lo;
    for (std::size_t i = 0; i < img.data.size(); ++i) out.data[i] = (img.data[i] - lo) / span;
    return out;
}

GrayImage contrast_stretch(const GrayImage& img) {
    if (img.empty()) throw InvalidInput("contrast_stretch: empty image");
    return normalize_minmax(img);
}

GradientPair gradients(const GrayImage& img) {
    if (img.width < 3 || img.height < 3)
        throw InvalidInput("gradients: image must be at least 3x3");
    GradientPair g{RealRaster(img.width, img.height), RealRaster(img.width, img.height)};
    const int w = img.width, h = img.height;
    for (int y = 0; y < h; ++y) {
        const int ym = std::max(y - 1, 0), yp = std::min(y + 1, h - 1);
        for (int x = 0; x < w; ++x) {
            const int xm = std::max(x - 1, 0), xp = std::min(x + 1, w - 1);
            g.fx.at(x, y) = (img.at(xp, ym) - img.at(xm, ym) + 2.0 * (img.at(xp, y) - img.at(xm, y)) +
                             img.at(xp, yp) - img.at(xm, yp)) /
                            8.0;
            g.fy.at(x, y) = (img.at(xm, yp) - img.at(xm, ym) + 2.0 * (img.at(x, yp) - img.at(x, ym)) +
                             img.at(xp, yp) - img.at(xp, ym)) /
                            8.0;
        }
    }
    return g;
}

Kernel2D gaussian_kernel(double sigma, int size) {
    if (sigma <= 0.0) throw InvalidInput("gaussian_kernel: sigma must be positive");
    Kernel2D k(size);
    const double denom = 2.0 * sigma * sigma;
    for (int dy = -k.radius(); dy <= k.radius(); ++dy)
        for (int dx = -k.radius(); dx <= k.radius(); ++dx)
            k.at(dx, dy) = std::exp(-(static_cast<double>(dx) * dx + static_cast<double>(dy) * dy) / denom);
    return k;
}

}  // namespace fpd
