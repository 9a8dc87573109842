#include "fpd/corepoint.hpp"

#include <algorithm>
#include <cmath>

namespace fpd {

namespace {

// out(x) = sum_t k[t] f(clamp(x+t)) along rows; taps indexed t in [-r, r].
RealRaster correlate_rows(const RealRaster& f, const std::vector<double>& taps) {
    const int r = (static_cast<int>(taps.size()) - 1) / 2;
    RealRaster out(f.width, f.height);
    for (int y = 0; y < f.height; ++y)
        for (int x = 0; x < f.width; ++x) {
            double acc = 0.0;
            for (int t = -r; t <= r; ++t)
                acc += taps[static_cast<std::size_t>(t + r)] * f.at(std::clamp(x + t, 0, f.width - 1), y);
            out.at(x, y) = acc;
        }
    return out;
}

RealRaster correlate_cols(const RealRaster& f, const std::vector<double>& taps) {
    const int r = (static_cast<int>(taps.size()) - 1) / 2;
    RealRaster out(f.width, f.height);
    for (int y = 0; y < f.height; ++y)
        for (int x = 0; x < f.width; ++x) {
            double acc = 0.0;
            for (int t = -r; t <= r; ++t)
                acc += taps[static_cast<std::size_t>(t + r)] * f.at(x, std::clamp(y + t, 0, f.height - 1));
            out.at(x, y) = acc;
        }
    return out;
}

struct SeparableTaps {
    std::vector<double> g0;  // exp(-t^2 / 2 sigma^2)
    std::vector<double> g1;  // t * g0(t)
};

SeparableTaps separable_taps(const ComplexFilterKernel& k) {
    SeparableTaps s;
    const int r = k.radius();
    s.g0.resize(static_cast<std::size_t>(k.size));
    s.g1.resize(s.g0.size());
    const double denom = 2.0 * k.sigma * k.sigma;
    for (int t = -r; t <= r; ++t) {
        const double g = std::exp(-(static_cast<double>(t) * t) / denom);
        s.g0[static_cast<std::size_t>(t + r)] = g;
        s.g1[static_cast<std::size_t>(t + r)] = t * g;
    }
    return s;
}

// corr(f, x*g) and corr(f, y*g) for a real plane f.
std::pair<RealRaster, RealRaster> moment_responses(const RealRaster& f, const SeparableTaps& s) {
    RealRaster rx = correlate_cols(correlate_rows(f, s.g1), s.g0);
    RealRaster ry = correlate_cols(correlate_rows(f, s.g0), s.g1);
    return {std::move(rx), std::move(ry)};
}

void check_kernel(const ComplexFilterKernel& k) {
    if (k.order != 1 && k.order != -1) throw UnsupportedOrder("filter order must be +1 or -1");
    if (k.sigma <= 0.0 || k.size < 3 || k.size % 2 == 0)
        throw InvalidInput("malformed complex filter kernel");
}

}  // namespace

ComplexField tensor_field(const GradientPair& grad) {
    if (grad.fx.empty() || !grad.fx.same_dims(grad.fy))
        throw InvalidInput("tensor_field: gradient rasters must share dimensions");
    ComplexField f;
    f.width = grad.fx.width;
    f.height = grad.fx.height;
    f.values = ComplexRaster(f.width, f.height);
    f.magnitude = RealRaster(f.width, f.height);
    for (std::size_t i = 0; i < f.values.data.size(); ++i) {
        f.values.data[i] = {grad.fx.data[i], grad.fy.data[i]};
        f.magnitude.data[i] = std::hypot(grad.fx.data[i], grad.fy.data[i]);
    }
    return f;
}

ComplexFilterKernel complex_filter_kernel(int order, double sigma, int size) {
    if (order != 1 && order != -1)
        throw UnsupportedOrder("complex_filter_kernel: only first-order filters supported");
    if (sigma <= 0.0) throw InvalidInput("complex_filter_kernel: sigma must be positive");
    if (size < 3 || size % 2 == 0)
        throw InvalidInput("complex_filter_kernel: size must be odd and >= 3");

    ComplexFilterKernel k;
    k.order = order;
    k.sigma = sigma;
    k.size = size;
    k.taps.assign(static_cast<std::size_t>(size) * size, {});
    const double denom = 2.0 * sigma * sigma;
    const int r = k.radius();
    for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx) {
            const double g =
                std::exp(-(static_cast<double>(dx) * dx + static_cast<double>(dy) * dy) / denom);
            const std::complex<double> z{dx * g, order * dy * g};
            k.taps[static_cast<std::size_t>(dy + r) * size + (dx + r)] = z;
        }
    return k;
}

ComplexRaster filter_response(const ComplexField& field, const ComplexFilterKernel& kernel) {
    check_kernel(kernel);
    if (field.magnitude.empty()) throw InvalidInput("filter_response: empty field");

    const SeparableTaps s = separable_taps(kernel);
    auto [re, im] = moment_responses(field.magnitude, s);
    ComplexRaster out(field.width, field.height);
    const double sign = kernel.order;
    for (std::size_t i = 0; i < out.data.size(); ++i)
        out.data[i] = {re.data[i], sign * im.data[i]};
    return out;
}

ComplexRaster filter_response_squared(const ComplexField& field, const ComplexFilterKernel& kernel) {
    check_kernel(kernel);
    if (field.values.empty()) throw InvalidInput("filter_response_squared: empty field");

    RealRaster zr(field.width, field.height), zi(field.width, field.height);
    for (std::size_t i = 0; i < field.values.data.size(); ++i) {
        const auto z2 = field.values.data[i] * field.values.data[i];
        zr.data[i] = z2.real();
        zi.data[i] = z2.imag();
    }
    const SeparableTaps s = separable_taps(kernel);
    auto [rxr, ryr] = moment_responses(zr, s);
    auto [rxi, ryi] = moment_responses(zi, s);
    ComplexRaster out(field.width, field.height);
    const double sign = kernel.order;
    // (zr + i*zi) * (x + i*order*y) summed over the window.
    for (std::size_t i = 0; i < out.data.size(); ++i)
        out.data[i] = {rxr.data[i] - sign * ryi.data[i], sign * ryr.data[i] + rxi.data[i]};
    return out;
}

VarianceImage variance_image(const ComplexRaster& response, int W) {
    if (W < 4) throw InvalidInput("variance_image: window must be at least 4");
    const int bs = W / 4;
    if (response.width < bs || response.height < bs)
        throw InvalidInput("variance_image: image smaller than one block");

    VarianceImage v;
    v.blockSize = bs;
    v.cols = (response.width + bs - 1) / bs;
    v.rows = (response.height + bs - 1) / bs;
    v.raw.assign(static_cast<std::size_t>(v.cols) * v.rows, 0.0);

    for (int by = 0; by < v.rows; ++by)
        for (int bx = 0; bx < v.cols; ++bx) {
            const int x0 = bx * bs, y0 = by * bs;
            const int x1 = std::min(x0 + bs, response.width);
            const int y1 = std::min(y0 + bs, response.height);
            const int n = (x1 - x0) * (y1 - y0);
            double mean = 0.0;
            for (int y = y0; y < y1; ++y)
                for (int x = x0; x < x1; ++x) mean += std::abs(response.at(x, y));
            mean /= n;
            double acc = 0.0;
            for (int y = y0; y < y1; ++y)
                for (int x = x0; x < x1; ++x) {
                    const double d = std::abs(response.at(x, y)) - mean;
                    acc += d * d;
                }
            v.raw[static_cast<std::size_t>(by) * v.cols + bx] = acc / n;
        }

    v.values = v.raw;
    const double lo = *std::min_element(v.raw.begin(), v.raw.end());
    const double hi = *std::max_element(v.raw.begin(), v.raw.end());
    if (hi > lo)
        for (auto& x : v.values) x = (x - lo) / (hi - lo);
    else
        std::fill(v.values.begin(), v.values.end(), 0.0);
    return v;
}

CoreDetection locate_core(const VarianceImage& var, const Mask& mask, double minResponse,
                          int margin) {
    if (var.cols <= 0 || var.rows <= 0) throw InvalidInput("locate_core: empty variance image");
    if (mask.empty()) throw InvalidInput("locate_core: empty mask");
    if (margin < 0) throw InvalidInput("locate_core: negative margin");

    // Integral image of the mask for O(1) all-foreground window tests.
    const int w = mask.width, h = mask.height;
    std::vector<std::uint64_t> integral(static_cast<std::size_t>(w + 1) * (h + 1), 0);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            integral[static_cast<std::size_t>(y + 1) * (w + 1) + (x + 1)] =
                integral[static_cast<std::size_t>(y) * (w + 1) + (x + 1)] +
                integral[static_cast<std::size_t>(y + 1) * (w + 1) + x] -
                integral[static_cast<std::size_t>(y) * (w + 1) + x] + (mask.at(x, y) ? 1 : 0);
    auto window_all_fg = [&](int cx, int cy) {
        const int x0 = cx - margin, y0 = cy - margin;
        const int x1 = cx + margin, y1 = cy + margin;
        if (x0 < 0 || y0 < 0 || x1 >= w || y1 >= h) return false;
        const std::uint64_t sum = integral[static_cast<std::size_t>(y1 + 1) * (w + 1) + (x1 + 1)] -
                                  integral[static_cast<std::size_t>(y0) * (w + 1) + (x1 + 1)] -
                                  integral[static_cast<std::size_t>(y1 + 1) * (w + 1) + x0] +
                                  integral[static_cast<std::size_t>(y0) * (w + 1) + x0];
        return sum == static_cast<std::uint64_t>(x1 - x0 + 1) * (y1 - y0 + 1);
    };

    const int bs = var.blockSize;
    double best = -1.0;
    int bestX = 0, bestY = 0;
    double bestNorm = 0.0;
    double sum = 0.0;
    std::size_t count = 0;
    for (int by = 0; by < var.rows; ++by)
        for (int bx = 0; bx < var.cols; ++bx) {
            const int cx = std::min(bx * bs + bs / 2, w - 1);
            const int cy = std::min(by * bs + bs / 2, h - 1);
            if (!window_all_fg(cx, cy)) continue;
            const double raw = var.rawAt(bx, by);
            sum += raw;
            ++count;
            if (raw > best) {  // strict: row-major scan keeps the first peak on ties
                best = raw;
                bestX = cx;
                bestY = cy;
                bestNorm = var.valueAt(bx, by);
            }
        }
    if (count == 0) throw NoForeground("locate_core: no candidate block inside the mask");

    const double mean = sum / static_cast<double>(count);
    CoreDetection det;
    det.x = bestX;
    det.y = bestY;
    det.peakResponse = bestNorm;
    det.relResponse = mean > 0.0 ? best / mean : 0.0;
    det.found = best > 0.0 && mean > 0.0 && best >= minResponse * mean;
    return det;
}

}  // namespace fpd
