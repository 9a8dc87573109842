#include "fpd/orientation.hpp"

#include <algorithm>
#include <cmath>

#include "fpd/imgcore.hpp"

namespace fpd {

OrientationField estimate_orientation(const GrayImage& img, int blockSize) {
    if (blockSize < 2) throw InvalidInput("estimate_orientation: block size too small");
    if (img.width < blockSize || img.height < blockSize)
        throw InvalidInput("estimate_orientation: image smaller than one block");

    const GradientPair g = gradients(img);
    OrientationField field;
    field.blockSize = blockSize;
    field.cols = (img.width + blockSize - 1) / blockSize;
    field.rows = (img.height + blockSize - 1) / blockSize;
    field.theta.assign(static_cast<std::size_t>(field.cols) * field.rows, 0.0);
    field.coherence.assign(field.theta.size(), 0.0);

    for (int by = 0; by < field.rows; ++by) {
        for (int bx = 0; bx < field.cols; ++bx) {
            const int x0 = bx * blockSize, y0 = by * blockSize;
            const int x1 = std::min(x0 + blockSize, img.width);
            const int y1 = std::min(y0 + blockSize, img.height);
            double sa = 0.0, sb = 0.0, se = 0.0;
            for (int y = y0; y < y1; ++y)
                for (int x = x0; x < x1; ++x) {
                    const double fx = g.fx.at(x, y), fy = g.fy.at(x, y);
                    sa += 2.0 * fx * fy;
                    sb += fx * fx - fy * fy;
                    se += fx * fx + fy * fy;
                }
            const std::size_t idx = static_cast<std::size_t>(by) * field.cols + bx;
            if (se <= 0.0) continue;  // flat block: theta 0, coherence 0
            double t = 0.5 * std::atan2(sa, sb) + M_PI / 2.0;
            if (t >= M_PI) t -= M_PI;
            field.theta[idx] = t;
            field.coherence[idx] = std::min(std::hypot(sa, sb) / se, 1.0);
        }
    }
    return field;
}

}  // namespace fpd
