#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include "fpd/synth.hpp"

namespace testutil {

// Per-process scratch directory; tests run single-threaded within one binary.
inline std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("fpd_tests_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline void write_bytes(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

// Frame-filling print: the foreground disk radius far exceeds the diagonal, so
// segmentation sees ridges everywhere and no disk rim enters the tensor field.
inline fpd::SynthSpec full_frame_spec(fpd::Pattern p, int size, std::uint64_t seed,
                                      int coreX = -1, int coreY = -1) {
    fpd::SynthSpec spec;
    spec.width = size;
    spec.height = size;
    spec.pattern = p;
    spec.coreX = coreX < 0 ? size / 2 : coreX;
    spec.coreY = coreY < 0 ? size / 2 : coreY;
    spec.ridgePeriod = 9.0;
    spec.noiseSigma = 0.02;
    spec.foregroundRadius = 10.0 * size;
    spec.seed = seed;
    return spec;
}

}  // namespace testutil
