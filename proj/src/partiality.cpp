#include "fpd/partiality.hpp"

#include <algorithm>

namespace fpd {

AxisCounts axis_counts(const Mask& mask, Point core) {
    if (mask.empty()) throw InvalidInput("axis_counts: empty mask");
    if (!mask.inside(core.x, core.y)) throw InvalidInput("axis_counts: core outside image bounds");

    AxisCounts c;
    if (!mask.at(core.x, core.y)) return c;  // background core: all zeros
    for (int x = core.x; x >= 0 && mask.at(x, core.y); --x) ++c.left;
    for (int x = core.x; x < mask.width && mask.at(x, core.y); ++x) ++c.right;
    for (int y = core.y; y >= 0 && mask.at(core.x, y); --y) ++c.up;
    for (int y = core.y; y < mask.height && mask.at(core.x, y); ++y) ++c.down;
    return c;
}

PartialityResult classify(const AxisCounts& counts, double T) {
    if (counts.left < 0 || counts.right < 0 || counts.up < 0 || counts.down < 0)
        throw InvalidInput("classify: negative count");
    if (T <= 0.0 || T > 1.0) throw InvalidInput("classify: threshold must be in (0, 1]");
    const int maxCount = std::max({counts.left, counts.right, counts.up, counts.down});
    if (maxCount == 0) throw DegenerateCore("classify: all axis counts are zero");

    PartialityResult r;
    r.counts = counts;
    r.threshold = T;
    r.normLeft = counts.left / static_cast<double>(maxCount);
    r.normRight = counts.right / static_cast<double>(maxCount);
    r.normUp = counts.up / static_cast<double>(maxCount);
    r.normDown = counts.down / static_cast<double>(maxCount);
    r.minRatio = std::min({r.normLeft, r.normRight, r.normUp, r.normDown});
    r.isPartial = r.minRatio <= T;
    return r;
}

}  // namespace fpd
