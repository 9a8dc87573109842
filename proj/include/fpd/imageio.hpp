#pragma once

#include <string>

#include "fpd/raster.hpp"

namespace fpd {

// Dispatches on magic bytes: PGM (P5 binary / P2 ascii) and 8-bit grayscale
// TIFF (uncompressed or PackBits, strip layout). Intensities come out in [0,1].
GrayImage load_image(const std::string& path);

GrayImage load_pgm(const std::string& path);
GrayImage load_tiff(const std::string& path);

// Binary 8-bit PGM, maxval 255. Round-trips bit-exactly with load_pgm.
void save_pgm(const std::string& path, const GrayImage& img);
void save_pgm(const std::string& path, const Mask& mask);  // foreground -> 255

}  // namespace fpd
