#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "fpd/raster.hpp"

namespace fpd {

enum class Pattern { Whorl, Loop, PlainArch };

std::string to_string(Pattern p);
Pattern pattern_from_string(const std::string& s);

// Synthetic ridge pattern with known core location (whorl/loop). The pattern
// lives inside a disk of foregroundRadius around the image center and blends
// into flat 0.5 background over the last 10 px of the disk; a radius well past
// the image diagonal yields a frame-filling print.
struct SynthSpec {
    int width = 256;
    int height = 256;
    Pattern pattern = Pattern::Whorl;
    int coreX = 128;  // ignored for plain-arch
    int coreY = 128;
    double ridgePeriod = 9.0;
    double noiseSigma = 0.02;
    double foregroundRadius = 110.0;
    std::uint64_t seed = 0;
};

void validate(const SynthSpec& spec);

struct SynthOutput {
    GrayImage image;
    std::optional<Point> core;  // absent for plain-arch
};

// Deterministic per spec (including seed). Whorl: concentric rings around the
// core, one ring per ridgePeriod. Loop: parabolic ridge flow with the apex at
// the core. Plain-arch: gently bowed parallel ridges, no singular point.
// Zero-mean Gaussian noise of std noiseSigma is added everywhere, then clamped.
SynthOutput generate(const SynthSpec& spec);

// Replaces everything on one side of `core` with flat background (0.5),
// choosing the larger side so at least half the image is removed.
// verticalAxis=false splits at core.x, true splits at core.y.
GrayImage crop_half(const GrayImage& img, Point core, bool verticalAxis);

}  // namespace fpd
