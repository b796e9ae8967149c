#pragma once

#include "promptsparse/types.hpp"

namespace promptsparse {

struct StructuringElement {
  enum class Shape { Square, Disk };

  Shape shape = Shape::Square;
  // Square side / disk diameter is 2 * radius + 1.
  int radius = 2;

  void validate() const;
  // Horizontal half-extent of the element on row offset dy, |dy| <= radius.
  int half_width(int dy) const;

  bool operator==(const StructuringElement&) const = default;
};

// Border handling: pixels outside the raster never constrain the result.
// Erosion treats them as foreground and dilation as background, so
// erode(m) == ~dilate(~m) exactly and open/close are a true opening/closing
// on the bounded raster.
BinaryMask erode(const BinaryMask& m, const StructuringElement& k);
BinaryMask dilate(const BinaryMask& m, const StructuringElement& k);

BinaryMask open(const BinaryMask& m, const StructuringElement& k);
BinaryMask close(const BinaryMask& m, const StructuringElement& k);

// Opening followed by closing: drops specks, then fills small holes.
BinaryMask refine_mask(const BinaryMask& m, const StructuringElement& k);

}  // namespace promptsparse
