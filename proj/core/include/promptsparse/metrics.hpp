#pragma once

#include "promptsparse/types.hpp"

namespace promptsparse {

// |a & b| / |a | b|. Two empty masks score 1.0 (identical predictions).
// Throws Error(DimensionMismatch) when shapes differ.
double iou(const BinaryMask& a, const BinaryMask& b);

// Nearest pixel to p, rounding halves up and clamping into the raster.
struct PixelIndex {
  int x;
  int y;
};
PixelIndex nearest_pixel(const Point& p, int width, int height);

bool point_in_mask(const Point& p, const BinaryMask& m);

}  // namespace promptsparse
