#include <cmath>
#include <complex>
#include <random>

#include <doctest.h>

#include "fpd/imgcore.hpp"

using namespace fpd;

namespace {

GrayImage make(int w, int h, std::initializer_list<double> vals) {
    GrayImage img(w, h);
    std::size_t i = 0;
    for (double v : vals) img.data[i++] = v;
    return img;
}

GrayImage random_image(int w, int h, unsigned seed, double lo = 0.0, double hi = 1.0) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> d(lo, hi);
    GrayImage img(w, h);
    for (auto& v : img.data) v = d(rng);
    return img;
}

// Independent oracle: replicate-pad the image explicitly, then take direct
// dot products against the window. Shares no code with convolve().
template <typename S, typename K>
Raster<decltype(std::declval<S>() * std::declval<K>())> brute_convolve(const Raster<S>& img,
                                                                       const Kernel2DT<K>& k) {
    using OT = decltype(std::declval<S>() * std::declval<K>());
    const int r = k.radius();
    Raster<S> pad(img.width + 2 * r, img.height + 2 * r);
    for (int y = 0; y < pad.height; ++y)
        for (int x = 0; x < pad.width; ++x) {
            const int sx = std::clamp(x - r, 0, img.width - 1);
            const int sy = std::clamp(y - r, 0, img.height - 1);
            pad.at(x, y) = img.at(sx, sy);
        }
    Raster<OT> out(img.width, img.height);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            OT acc{};
            for (int dy = -r; dy <= r; ++dy)
                for (int dx = -r; dx <= r; ++dx) acc += pad.at(x + dx + r, y + dy + r) * k.at(dx, dy);
            out.at(x, y) = acc;
        }
    return out;
}

}  // namespace

TEST_CASE("contrast_stretch maps the observed range onto [0,1]") {
    const GrayImage a = contrast_stretch(make(3, 1, {0.2, 0.4, 0.6}));
    CHECK(a.at(0, 0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(a.at(1, 0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(a.at(2, 0) == doctest::Approx(1.0).epsilon(1e-12));

    const GrayImage b = contrast_stretch(make(2, 1, {0.5, 0.5}));
    CHECK(b.at(0, 0) == 0.0);  // constant image collapses to zero
    CHECK(b.at(1, 0) == 0.0);

    const GrayImage c = contrast_stretch(make(2, 1, {0.25, 0.75}));
    CHECK(c.at(0, 0) == 0.0);
    CHECK(c.at(1, 0) == 1.0);
}

TEST_CASE("contrast_stretch is idempotent bitwise") {
    const GrayImage img = random_image(17, 13, 7, 0.1, 0.9);
    const GrayImage once = contrast_stretch(img);
    const GrayImage twice = contrast_stretch(once);
    REQUIRE(once.same_dims(twice));
    for (std::size_t i = 0; i < once.data.size(); ++i) CHECK(once.data[i] == twice.data[i]);
}

TEST_CASE("normalize_minmax on arbitrary real rasters") {
    RealRaster r(3, 1);
    r.data = {2.0, 6.0, 10.0};
    const GrayImage n = normalize_minmax(r);
    CHECK(n.at(0, 0) == 0.0);
    CHECK(n.at(1, 0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(n.at(2, 0) == 1.0);

    RealRaster flat(3, 1, 7.0);
    const GrayImage z = normalize_minmax(flat);
    for (double v : z.data) CHECK(v == 0.0);

    CHECK_THROWS_AS(normalize_minmax(RealRaster{}), InvalidInput);
}

TEST_CASE("gradients of a linear ramp recover the slope exactly") {
    GrayImage img(12, 10);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) img.at(x, y) = 0.1 * x;
    const GradientPair g = gradients(img);
    for (int y = 0; y < img.height; ++y)
        for (int x = 1; x < img.width - 1; ++x) {
            CHECK(g.fx.at(x, y) == doctest::Approx(0.1).epsilon(1e-12));
            CHECK(g.fy.at(x, y) == doctest::Approx(0.0).epsilon(1e-12));
        }
}

TEST_CASE("gradients of a constant image are zero") {
    const GradientPair g = gradients(GrayImage(8, 8, 0.37));
    for (double v : g.fx.data) CHECK(v == 0.0);
    for (double v : g.fy.data) CHECK(v == 0.0);
}

TEST_CASE("gradients commute with transposition") {
    const GrayImage img = random_image(9, 7, 11);
    GrayImage t(img.height, img.width);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) t.at(y, x) = img.at(x, y);
    const GradientPair g = gradients(img);
    const GradientPair gt = gradients(t);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            CHECK(gt.fx.at(y, x) == doctest::Approx(g.fy.at(x, y)).epsilon(1e-12));
            CHECK(gt.fy.at(y, x) == doctest::Approx(g.fx.at(x, y)).epsilon(1e-12));
        }
}

TEST_CASE("gradients reject sub-3x3 images") {
    CHECK_THROWS_AS(gradients(GrayImage(2, 5)), InvalidInput);
    CHECK_THROWS_AS(gradients(GrayImage(5, 2)), InvalidInput);
}

TEST_CASE("gaussian_kernel hits its closed form") {
    const Kernel2D k = gaussian_kernel(2.0, 9);
    CHECK(k.at(0, 0) == 1.0);  // unnormalized: center tap is exactly one
    CHECK(k.at(2, 0) == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
    CHECK(k.at(0, 2) == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
    for (int dy = -4; dy <= 4; ++dy)
        for (int dx = -4; dx <= 4; ++dx) {
            CHECK(k.at(dx, dy) == k.at(-dx, dy));
            CHECK(k.at(dx, dy) == k.at(dx, -dy));
            CHECK(k.at(dx, dy) == k.at(dy, dx));
        }
    CHECK_THROWS_AS(gaussian_kernel(0.0, 9), InvalidInput);
    CHECK_THROWS_AS(gaussian_kernel(-1.0, 9), InvalidInput);
    CHECK_THROWS_AS(gaussian_kernel(1.0, 8), InvalidInput);
    CHECK_THROWS_AS(gaussian_kernel(1.0, 1), InvalidInput);
}

TEST_CASE("convolve with a delta kernel is the identity") {
    const GrayImage img = random_image(6, 5, 3);
    Kernel2D delta(3);
    delta.at(0, 0) = 1.0;
    const auto out = convolve(img, delta);
    for (std::size_t i = 0; i < img.data.size(); ++i) CHECK(out.data[i] == img.data[i]);
}

TEST_CASE("convolve matches the brute-force oracle, real taps") {
    std::mt19937 rng(21);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (int w : {1, 2, 3, 5, 8})
        for (int h : {1, 4, 8})
            for (int ks : {3, 5}) {
                const GrayImage img = random_image(w, h, static_cast<unsigned>(w * 100 + h * 10 + ks));
                Kernel2D k(ks);
                for (auto& t : k.taps) t = d(rng);
                const auto got = convolve(img, k);
                const auto want = brute_convolve(img, k);
                for (std::size_t i = 0; i < got.data.size(); ++i)
                    CHECK(std::abs(got.data[i] - want.data[i]) <= 1e-12);
            }
}

TEST_CASE("convolve matches the brute-force oracle, complex taps") {
    std::mt19937 rng(22);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (int w : {1, 3, 8})
        for (int h : {2, 7})
            for (int ks : {3, 5}) {
                const GrayImage img = random_image(w, h, static_cast<unsigned>(w * 37 + h * 5 + ks));
                Kernel2DT<std::complex<double>> k(ks);
                for (auto& t : k.taps) t = {d(rng), d(rng)};
                const auto got = convolve(img, k);
                const auto want = brute_convolve(img, k);
                for (std::size_t i = 0; i < got.data.size(); ++i)
                    CHECK(std::abs(got.data[i] - want.data[i]) <= 1e-12);
            }
}

TEST_CASE("convolve of a constant image yields value times tap sum") {
    Kernel2D k(5);
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    double sum = 0.0;
    for (auto& t : k.taps) {
        t = d(rng);
        sum += t;
    }
    const auto out = convolve(GrayImage(7, 7, 0.4), k);
    for (double v : out.data) CHECK(v == doctest::Approx(0.4 * sum).epsilon(1e-12));
}

TEST_CASE("convolve is linear") {
    const GrayImage f = random_image(10, 9, 31);
    const GrayImage g = random_image(10, 9, 32);
    Kernel2D k(5);
    std::mt19937 rng(33);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (auto& t : k.taps) t = d(rng);

    GrayImage mix(10, 9);
    for (std::size_t i = 0; i < mix.data.size(); ++i) mix.data[i] = 2.5 * f.data[i] - 0.75 * g.data[i];
    const auto a = convolve(f, k);
    const auto b = convolve(g, k);
    const auto c = convolve(mix, k);
    for (std::size_t i = 0; i < c.data.size(); ++i)
        CHECK(c.data[i] == doctest::Approx(2.5 * a.data[i] - 0.75 * b.data[i]).epsilon(1e-9));
}

TEST_CASE("convolve rejects malformed input") {
    CHECK_THROWS_AS(convolve(GrayImage{}, gaussian_kernel(1.0, 3)), InvalidInput);
    Kernel2D bad;  // default: size 0, no taps
    CHECK_THROWS_AS(convolve(GrayImage(4, 4, 0.0), bad), InvalidInput);
}
