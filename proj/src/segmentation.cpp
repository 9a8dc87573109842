#include "fpd/segmentation.hpp"

#include <algorithm>
#include <queue>
#include <vector>

namespace fpd {

namespace {

struct BlockGrid {
    int cols = 0, rows = 0;
    std::vector<std::uint8_t> fg;

    std::uint8_t& at(int bx, int by) { return fg[static_cast<std::size_t>(by) * cols + bx]; }
    std::uint8_t at(int bx, int by) const { return fg[static_cast<std::size_t>(by) * cols + bx]; }
};

std::vector<double> block_variances(const GrayImage& img, int bs, int cols, int rows) {
    std::vector<double> var(static_cast<std::size_t>(cols) * rows);
    for (int by = 0; by < rows; ++by) {
        for (int bx = 0; bx < cols; ++bx) {
            const int x0 = bx * bs, y0 = by * bs;
            const int x1 = std::min(x0 + bs, img.width), y1 = std::min(y0 + bs, img.height);
            const int n = (x1 - x0) * (y1 - y0);
            double mean = 0.0;
            for (int y = y0; y < y1; ++y)
                for (int x = x0; x < x1; ++x) mean += img.at(x, y);
            mean /= n;
            double acc = 0.0;
            for (int y = y0; y < y1; ++y)
                for (int x = x0; x < x1; ++x) {
                    const double d = img.at(x, y) - mean;
                    acc += d * d;
                }
            var[static_cast<std::size_t>(by) * cols + bx] = acc / n;
        }
    }
    return var;
}

// Otsu over 256 uniform bins of [0, max]; lowest threshold among ties.
// Returns the bin index; blocks with bin > k are foreground.
int otsu_threshold(const std::vector<double>& values, double vmax) {
    constexpr int kBins = 256;
    std::vector<double> hist(kBins, 0.0);
    for (double v : values) {
        int bin = static_cast<int>(v / vmax * (kBins - 1));
        hist[std::clamp(bin, 0, kBins - 1)] += 1.0;
    }
    const double total = static_cast<double>(values.size());
    double sumAll = 0.0;
    for (int i = 0; i < kBins; ++i) sumAll += hist[i] * i;

    int best = 0;
    double bestObj = -1.0;
    double w0 = 0.0, sum0 = 0.0;
    for (int k = 0; k < kBins - 1; ++k) {
        w0 += hist[k];
        sum0 += hist[k] * k;
        const double w1 = total - w0;
        if (w0 == 0.0 || w1 == 0.0) continue;
        const double m0 = sum0 / w0, m1 = (sumAll - sum0) / w1;
        const double obj = w0 * w1 * (m0 - m1) * (m0 - m1);
        if (obj > bestObj + 1e-12) {
            bestObj = obj;
            best = k;
        }
    }
    return best;
}

BlockGrid dilate(const BlockGrid& g) {
    BlockGrid out{g.cols, g.rows, std::vector<std::uint8_t>(g.fg.size(), 0)};
    for (int by = 0; by < g.rows; ++by)
        for (int bx = 0; bx < g.cols; ++bx) {
            std::uint8_t v = 0;
            for (int dy = -1; dy <= 1 && !v; ++dy)
                for (int dx = -1; dx <= 1 && !v; ++dx) {
                    const int nx = bx + dx, ny = by + dy;
                    if (nx >= 0 && nx < g.cols && ny >= 0 && ny < g.rows && g.at(nx, ny)) v = 1;
                }
            out.at(bx, by) = v;
        }
    return out;
}

// Off-grid neighbors count as foreground so closing does not eat the frame edge.
BlockGrid erode(const BlockGrid& g) {
    BlockGrid out{g.cols, g.rows, std::vector<std::uint8_t>(g.fg.size(), 0)};
    for (int by = 0; by < g.rows; ++by)
        for (int bx = 0; bx < g.cols; ++bx) {
            std::uint8_t v = 1;
            for (int dy = -1; dy <= 1 && v; ++dy)
                for (int dx = -1; dx <= 1 && v; ++dx) {
                    const int nx = bx + dx, ny = by + dy;
                    if (nx >= 0 && nx < g.cols && ny >= 0 && ny < g.rows && !g.at(nx, ny)) v = 0;
                }
            out.at(bx, by) = v;
        }
    return out;
}

// 4-connected component labels for cells matching `value`; 0 = unlabeled.
std::vector<int> components4(const BlockGrid& g, std::uint8_t value, int& count) {
    std::vector<int> label(g.fg.size(), 0);
    count = 0;
    for (int by = 0; by < g.rows; ++by)
        for (int bx = 0; bx < g.cols; ++bx) {
            const std::size_t idx = static_cast<std::size_t>(by) * g.cols + bx;
            if (g.fg[idx] != value || label[idx]) continue;
            ++count;
            std::queue<std::pair<int, int>> q;
            q.push({bx, by});
            label[idx] = count;
            while (!q.empty()) {
                auto [cx, cy] = q.front();
                q.pop();
                constexpr int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
                for (int d = 0; d < 4; ++d) {
                    const int nx = cx + dx[d], ny = cy + dy[d];
                    if (nx < 0 || nx >= g.cols || ny < 0 || ny >= g.rows) continue;
                    const std::size_t ni = static_cast<std::size_t>(ny) * g.cols + nx;
                    if (g.fg[ni] == value && !label[ni]) {
                        label[ni] = count;
                        q.push({nx, ny});
                    }
                }
            }
        }
    return label;
}

}  // namespace

Mask segment(const GrayImage& img, int blockSize) {
    if (blockSize < 2) throw InvalidInput("segment: block size too small");
    if (img.width < blockSize || img.height < blockSize)
        throw InvalidInput("segment: image smaller than one block");

    const int cols = (img.width + blockSize - 1) / blockSize;
    const int rows = (img.height + blockSize - 1) / blockSize;
    const auto var = block_variances(img, blockSize, cols, rows);
    const double vmax = *std::max_element(var.begin(), var.end());
    if (vmax <= 0.0) throw NoForeground("segment: no block exceeds the variance threshold");

    const int k = otsu_threshold(var, vmax);
    BlockGrid grid{cols, rows, std::vector<std::uint8_t>(var.size(), 0)};
    for (std::size_t i = 0; i < var.size(); ++i) {
        const int bin = std::clamp(static_cast<int>(var[i] / vmax * 255.0), 0, 255);
        grid.fg[i] = bin > k ? 1 : 0;
    }

    // A unimodal variance histogram (ridges everywhere) still gets split by Otsu;
    // when the two classes are not separated, treat everything as foreground.
    double loSum = 0.0, hiSum = 0.0;
    std::size_t loN = 0, hiN = 0;
    for (std::size_t i = 0; i < var.size(); ++i)
        (grid.fg[i] ? hiSum : loSum) += var[i], (grid.fg[i] ? hiN : loN) += 1;
    const double hiMean = hiN ? hiSum / hiN : 0.0;
    const double loMean = loN ? loSum / loN : 0.0;
    if (hiMean > 0.0 && loN > 0 && loMean >= 0.5 * hiMean)
        std::fill(grid.fg.begin(), grid.fg.end(), std::uint8_t{1});

    // Closing bridges single-block gaps between ridges.
    BlockGrid closed = erode(erode(dilate(dilate(grid))));
    if (std::find(closed.fg.begin(), closed.fg.end(), std::uint8_t{1}) == closed.fg.end())
        closed = grid;  // closing erased a sliver-thin foreground; keep the raw map

    int nComp = 0;
    auto labels = components4(closed, 1, nComp);
    if (nComp > 1) {
        std::vector<std::size_t> sizes(static_cast<std::size_t>(nComp) + 1, 0);
        for (int l : labels)
            if (l) ++sizes[static_cast<std::size_t>(l)];
        const int keep = static_cast<int>(
            std::max_element(sizes.begin() + 1, sizes.end()) - sizes.begin());
        for (std::size_t i = 0; i < closed.fg.size(); ++i) closed.fg[i] = labels[i] == keep ? 1 : 0;
    }

    // Fill holes: background components that never touch the grid border.
    int nBg = 0;
    auto bgLabels = components4(closed, 0, nBg);
    if (nBg > 0) {
        std::vector<std::uint8_t> touches(static_cast<std::size_t>(nBg) + 1, 0);
        for (int by = 0; by < rows; ++by)
            for (int bx = 0; bx < cols; ++bx) {
                const bool border = bx == 0 || by == 0 || bx == cols - 1 || by == rows - 1;
                const int l = bgLabels[static_cast<std::size_t>(by) * cols + bx];
                if (border && l) touches[static_cast<std::size_t>(l)] = 1;
            }
        for (std::size_t i = 0; i < closed.fg.size(); ++i)
            if (!closed.fg[i] && !touches[static_cast<std::size_t>(bgLabels[i])]) closed.fg[i] = 1;
    }

    Mask mask(img.width, img.height);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            mask.at(x, y) = closed.at(x / blockSize, y / blockSize);
    return mask;
}

}  // namespace fpd
