#pragma once

#include "fpd/raster.hpp"

namespace fpd {

// Foreground mask from block gray-level variance: 16x16 blocks, Otsu threshold
// over the block-variance histogram, morphological closing on the block map,
// largest 4-connected component kept, holes filled, block map upsampled to
// pixel resolution. Throws NoForeground when every block is flat.
Mask segment(const GrayImage& img, int blockSize = 16);

}  // namespace fpd
