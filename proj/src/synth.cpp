#include "fpd/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace fpd {

namespace {
constexpr double kBackground = 0.5;
constexpr double kEdgeFade = 10.0;  // px of pattern-to-background blend inside the disk
constexpr double kArchBowAmp = 6.0;
constexpr double kArchBowWidth = 80.0;
}  // namespace

std::string to_string(Pattern p) {
    switch (p) {
        case Pattern::Whorl: return "whorl";
        case Pattern::Loop: return "loop";
        case Pattern::PlainArch: return "plain-arch";
    }
    throw InvalidInput("unknown pattern");
}

Pattern pattern_from_string(const std::string& s) {
    if (s == "whorl") return Pattern::Whorl;
    if (s == "loop") return Pattern::Loop;
    if (s == "plain-arch") return Pattern::PlainArch;
    throw InvalidInput("unknown pattern name: " + s);
}

void validate(const SynthSpec& spec) {
    if (spec.width < 1 || spec.height < 1) throw InvalidInput("synth: dimensions must be positive");
    if (spec.ridgePeriod < 4.0) throw InvalidInput("synth: ridge period must be >= 4");
    if (spec.noiseSigma < 0.0 || spec.noiseSigma >= 0.5)
        throw InvalidInput("synth: noise sigma must be in [0, 0.5)");
    if (spec.foregroundRadius <= 0.0) throw InvalidInput("synth: foreground radius must be positive");
    if (spec.pattern != Pattern::PlainArch) {
        const double dx = spec.coreX - spec.width / 2.0;
        const double dy = spec.coreY - spec.height / 2.0;
        if (std::hypot(dx, dy) >= spec.foregroundRadius)
            throw InvalidInput("synth: core must lie inside the foreground disk");
    }
}

SynthOutput generate(const SynthSpec& spec) {
    validate(spec);
    GrayImage img(spec.width, spec.height);
    const double ccx = spec.width / 2.0, ccy = spec.height / 2.0;
    const double twoPiOverT = 2.0 * M_PI / spec.ridgePeriod;

    for (int y = 0; y < spec.height; ++y) {
        for (int x = 0; x < spec.width; ++x) {
            double phase;  // ridge-normal coordinate; one ridge per period
            switch (spec.pattern) {
                case Pattern::Whorl:
                    phase = std::hypot(x - spec.coreX, y - spec.coreY);
                    break;
                case Pattern::Loop: {
                    const double u = x - spec.coreX, v = y - spec.coreY;
                    phase = v - u * u / (4.0 * spec.ridgePeriod);
                    break;
                }
                case Pattern::PlainArch:
                default: {
                    const double u = x - ccx, v = y - ccy;
                    phase = v + kArchBowAmp *
                                    std::exp(-u * u / (2.0 * kArchBowWidth * kArchBowWidth));
                    break;
                }
            }
            const double ridge = 0.5 * (1.0 + std::cos(twoPiOverT * phase));
            const double dcen = std::hypot(x - ccx, y - ccy);
            const double amp = std::clamp((spec.foregroundRadius - dcen) / kEdgeFade, 0.0, 1.0);
            img.at(x, y) = kBackground + (ridge - kBackground) * amp;
        }
    }

    if (spec.noiseSigma > 0.0) {
        std::mt19937_64 rng(spec.seed);
        std::normal_distribution<double> noise(0.0, spec.noiseSigma);
        for (auto& v : img.data) v = std::clamp(v + noise(rng), 0.0, 1.0);
    } else {
        for (auto& v : img.data) v = std::clamp(v, 0.0, 1.0);
    }

    SynthOutput out{std::move(img), std::nullopt};
    if (spec.pattern != Pattern::PlainArch) out.core = Point{spec.coreX, spec.coreY};
    return out;
}

GrayImage crop_half(const GrayImage& img, Point core, bool verticalAxis) {
    if (img.empty()) throw InvalidInput("crop_half: empty image");
    if (!img.inside(core.x, core.y)) throw InvalidInput("crop_half: core outside image");
    GrayImage out = img;
    if (!verticalAxis) {
        const bool dropRight = img.width - core.x >= core.x;  // larger side goes
        for (int y = 0; y < img.height; ++y)
            for (int x = dropRight ? core.x : 0; x < (dropRight ? img.width : core.x + 1); ++x)
                out.at(x, y) = kBackground;
    } else {
        const bool dropBottom = img.height - core.y >= core.y;
        for (int y = dropBottom ? core.y : 0; y < (dropBottom ? img.height : core.y + 1); ++y)
            for (int x = 0; x < img.width; ++x) out.at(x, y) = kBackground;
    }
    return out;
}

}  // namespace fpd
