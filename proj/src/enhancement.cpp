#include "fpd/enhancement.hpp"

#include <algorithm>
#include <cmath>

#include "fpd/imgcore.hpp"

namespace fpd {

namespace {

void check_params(const GaborParams& p) {
    if (p.frequency <= 0.0 || p.frequency > 0.5)
        throw InvalidInput("gabor: frequency must be in (0, 0.5]");
    if (p.sigmaX <= 0.0 || p.sigmaY <= 0.0) throw InvalidInput("gabor: sigmas must be positive");
    if (p.kernelSize < 3 || p.kernelSize % 2 == 0)
        throw InvalidInput("gabor: kernel size must be odd and >= 3");
}

}  // namespace

Kernel2D gabor_kernel(double theta, const GaborParams& params) {
    check_params(params);
    Kernel2D k(params.kernelSize);
    const double s = std::sin(theta), c = std::cos(theta);
    const double twoSx2 = 2.0 * params.sigmaX * params.sigmaX;
    const double twoSy2 = 2.0 * params.sigmaY * params.sigmaY;
    double sum = 0.0;
    for (int dy = -k.radius(); dy <= k.radius(); ++dy)
        for (int dx = -k.radius(); dx <= k.radius(); ++dx) {
            // u runs across the ridges (normal direction), v along them.
            const double u = dx * s - dy * c;
            const double v = dx * c + dy * s;
            const double tap = std::exp(-(u * u / twoSx2 + v * v / twoSy2)) *
                               std::cos(2.0 * M_PI * params.frequency * u);
            k.at(dx, dy) = tap;
            sum += tap;
        }
    const double mean = sum / (static_cast<double>(params.kernelSize) * params.kernelSize);
    for (auto& t : k.taps) t -= mean;
    return k;
}

GrayImage gabor_enhance(const GrayImage& img, const OrientationField& field,
                        const GaborParams& params) {
    check_params(params);
    if (img.empty()) throw InvalidInput("gabor_enhance: empty image");
    const int bs = field.blockSize;
    if (bs < 2 || field.cols != (img.width + bs - 1) / bs || field.rows != (img.height + bs - 1) / bs)
        throw InvalidInput("gabor_enhance: orientation field does not cover the image");

    RealRaster out(img.width, img.height);
    const int r = (params.kernelSize - 1) / 2;
    for (int by = 0; by < field.rows; ++by) {
        for (int bx = 0; bx < field.cols; ++bx) {
            const int x0 = bx * bs, y0 = by * bs;
            const int x1 = std::min(x0 + bs, img.width), y1 = std::min(y0 + bs, img.height);
            if (field.coherenceAt(bx, by) <= 0.0) {
                for (int y = y0; y < y1; ++y)
                    for (int x = x0; x < x1; ++x) out.at(x, y) = img.at(x, y);
                continue;
            }
            const Kernel2D k = gabor_kernel(field.thetaAt(bx, by), params);
            for (int y = y0; y < y1; ++y)
                for (int x = x0; x < x1; ++x) {
                    double acc = 0.0;
                    for (int dy = -r; dy <= r; ++dy) {
                        const int sy = std::clamp(y + dy, 0, img.height - 1);
                        for (int dx = -r; dx <= r; ++dx) {
                            const int sx = std::clamp(x + dx, 0, img.width - 1);
                            acc += img.at(sx, sy) * k.at(dx, dy);
                        }
                    }
                    out.at(x, y) = acc;
                }
        }
    }
    return normalize_minmax(out);
}

Mask binarize(const GrayImage& img, int blockSize) {
    if (img.empty()) throw InvalidInput("binarize: empty image");
    if (blockSize < 1) throw InvalidInput("binarize: block size too small");
    Mask out(img.width, img.height);
    for (int y0 = 0; y0 < img.height; y0 += blockSize) {
        for (int x0 = 0; x0 < img.width; x0 += blockSize) {
            const int x1 = std::min(x0 + blockSize, img.width);
            const int y1 = std::min(y0 + blockSize, img.height);
            double mean = 0.0;
            for (int y = y0; y < y1; ++y)
                for (int x = x0; x < x1; ++x) mean += img.at(x, y);
            mean /= (x1 - x0) * (y1 - y0);
            for (int y = y0; y < y1; ++y)
                for (int x = x0; x < x1; ++x) out.at(x, y) = img.at(x, y) >= mean ? 1 : 0;
        }
    }
    return out;
}

}  // namespace fpd
