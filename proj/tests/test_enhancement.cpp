#include <cmath>
#include <random>

#include <doctest.h>

#include "fpd/enhancement.hpp"

using namespace fpd;

namespace {

GrayImage ridges(int size, double period = 9.0, double amp = 0.5) {
    GrayImage img(size, size);
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) img.at(x, y) = 0.5 + amp * std::cos(2.0 * M_PI * x / period);
    return img;
}

double pearson(const GrayImage& a, const GrayImage& b) {
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        ma += a.data[i];
        mb += b.data[i];
    }
    ma /= static_cast<double>(a.data.size());
    mb /= static_cast<double>(b.data.size());
    double num = 0, va = 0, vb = 0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        const double da = a.data[i] - ma, db = b.data[i] - mb;
        num += da * db;
        va += da * da;
        vb += db * db;
    }
    return num / std::sqrt(va * vb);
}

}  // namespace

TEST_CASE("gabor kernel is DC-free and even-symmetric") {
    const GaborParams p;
    for (double theta : {0.0, 0.4, M_PI / 2, 2.2}) {
        const Kernel2D k = gabor_kernel(theta, p);
        double sum = 0.0;
        for (double t : k.taps) sum += t;
        CHECK(std::abs(sum) <= 1e-12);
        for (int dy = -k.radius(); dy <= k.radius(); ++dy)
            for (int dx = -k.radius(); dx <= k.radius(); ++dx)
                CHECK(k.at(dx, dy) == k.at(-dx, -dy));
    }
}

TEST_CASE("gabor parameter validation") {
    GaborParams p;
    p.frequency = 0.0;
    CHECK_THROWS_AS(gabor_kernel(0.0, p), InvalidInput);
    p = GaborParams{};
    p.frequency = 0.6;
    CHECK_THROWS_AS(gabor_kernel(0.0, p), InvalidInput);
    p = GaborParams{};
    p.sigmaX = 0.0;
    CHECK_THROWS_AS(gabor_kernel(0.0, p), InvalidInput);
    p = GaborParams{};
    p.kernelSize = 16;
    CHECK_THROWS_AS(gabor_kernel(0.0, p), InvalidInput);
}

TEST_CASE("constant input enhances to all zero") {
    const GrayImage img(64, 64, 0.42);
    const OrientationField f = estimate_orientation(img, 16);
    const GrayImage out = gabor_enhance(img, f, GaborParams{});
    for (double v : out.data) CHECK(v == 0.0);
}

TEST_CASE("enhancement pulls noisy ridges toward the clean pattern") {
    const GrayImage clean = ridges(128);
    GrayImage noisy = clean;
    std::mt19937_64 rng(77);
    std::normal_distribution<double> n(0.0, 0.15);
    for (auto& v : noisy.data) v = std::clamp(v + n(rng), 0.0, 1.0);

    const OrientationField f = estimate_orientation(noisy, 16);
    const GrayImage enhanced = gabor_enhance(noisy, f, GaborParams{});
    CHECK(pearson(enhanced, clean) >= pearson(noisy, clean) + 0.05);
    CHECK(pearson(enhanced, clean) >= 0.9);
}

TEST_CASE("enhancement commutes with negation on fully coherent input") {
    const GrayImage img = ridges(96, 9.0, 0.4);
    const OrientationField f = estimate_orientation(img, 16);
    for (double c : f.coherence) REQUIRE(c > 0.0);

    GrayImage neg(img.width, img.height);
    for (std::size_t i = 0; i < img.data.size(); ++i) neg.data[i] = 1.0 - img.data[i];
    const GrayImage a = gabor_enhance(img, f, GaborParams{});
    const GrayImage b = gabor_enhance(neg, estimate_orientation(neg, 16), GaborParams{});
    for (std::size_t i = 0; i < a.data.size(); ++i)
        CHECK(std::abs(b.data[i] - (1.0 - a.data[i])) <= 1e-9);
}

TEST_CASE("gabor_enhance validates the field geometry") {
    const GrayImage img(64, 64, 0.5);
    OrientationField f = estimate_orientation(img, 16);
    f.cols += 1;  // no longer covers the image
    CHECK_THROWS_AS(gabor_enhance(img, f, GaborParams{}), InvalidInput);
}

TEST_CASE("binarize splits ridge bands at the block mean") {
    const GrayImage img = ridges(36);
    const Mask m = binarize(img, 36);
    for (int y = 0; y < 36; ++y) {
        CHECK(m.at(0, y) == 1);   // crest: cos = 1
        CHECK(m.at(4, y) == 0);   // near trough
        CHECK(m.at(9, y) == 1);   // next crest
        CHECK(m.at(13, y) == 0);
    }
    // Foreground fraction of a balanced wave stays near one half.
    std::size_t fg = 0;
    for (auto v : m.data) fg += v;
    const double frac = static_cast<double>(fg) / static_cast<double>(m.data.size());
    CHECK(frac >= 0.4);
    CHECK(frac <= 0.62);
}

TEST_CASE("binarize marks constant blocks as foreground") {
    const Mask m = binarize(GrayImage(32, 32, 0.7), 16);
    for (auto v : m.data) CHECK(v == 1);
}

TEST_CASE("binarize rejects bad input") {
    CHECK_THROWS_AS(binarize(GrayImage{}, 16), InvalidInput);
    CHECK_THROWS_AS(binarize(GrayImage(8, 8, 0.5), 0), InvalidInput);
}
