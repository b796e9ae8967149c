#include "promptsparse/refine.hpp"

#include <cmath>
#include <vector>

namespace promptsparse {

void StructuringElement::validate() const {
  if (radius < 1) {
    throw Error(ErrorCode::InvalidArgument, "structuring element radius must be >= 1");
  }
}

int StructuringElement::half_width(int dy) const {
  if (shape == Shape::Square) return radius;
  const int rem = radius * radius - dy * dy;
  return static_cast<int>(std::floor(std::sqrt(static_cast<double>(rem)) + 1e-9));
}

namespace {

// The element is decomposed into one horizontal run per row offset. For
// each row a prefix count of foreground pixels answers "how many of the
// in-bounds pixels in [x-w, x+w] are foreground" in O(1).
//
// erode:  every in-bounds pixel under the element is foreground.
// dilate: some in-bounds pixel under the element is foreground.
BinaryMask apply(const BinaryMask& m, const StructuringElement& k, bool erosion) {
  k.validate();
  const int W = m.width();
  const int H = m.height();
  const auto src = m.data();

  std::vector<int> prefix(static_cast<std::size_t>(H) * (W + 1), 0);
  for (int y = 0; y < H; ++y) {
    int* row = &prefix[static_cast<std::size_t>(y) * (W + 1)];
    for (int x = 0; x < W; ++x) row[x + 1] = row[x] + src[static_cast<std::size_t>(y) * W + x];
  }

  std::vector<std::uint8_t> out(static_cast<std::size_t>(W) * H, erosion ? 1 : 0);
  for (int dy = -k.radius; dy <= k.radius; ++dy) {
    const int hw = k.half_width(dy);
    for (int y = 0; y < H; ++y) {
      const int sy = y + dy;
      if (sy < 0 || sy >= H) continue;
      const int* row = &prefix[static_cast<std::size_t>(sy) * (W + 1)];
      std::uint8_t* dst = &out[static_cast<std::size_t>(y) * W];
      for (int x = 0; x < W; ++x) {
        const int x0 = x - hw < 0 ? 0 : x - hw;
        const int x1 = x + hw >= W ? W - 1 : x + hw;
        const int fg = row[x1 + 1] - row[x0];
        if (erosion) {
          if (fg != x1 - x0 + 1) dst[x] = 0;
        } else if (fg > 0) {
          dst[x] = 1;
        }
      }
    }
  }
  return BinaryMask(W, H, std::move(out));
}

}  // namespace

BinaryMask erode(const BinaryMask& m, const StructuringElement& k) {
  return apply(m, k, true);
}

BinaryMask dilate(const BinaryMask& m, const StructuringElement& k) {
  return apply(m, k, false);
}

BinaryMask open(const BinaryMask& m, const StructuringElement& k) {
  return dilate(erode(m, k), k);
}

BinaryMask close(const BinaryMask& m, const StructuringElement& k) {
  return erode(dilate(m, k), k);
}

BinaryMask refine_mask(const BinaryMask& m, const StructuringElement& k) {
  return close(open(m, k), k);
}

}  // namespace promptsparse
