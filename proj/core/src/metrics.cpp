#include "promptsparse/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace promptsparse {

double iou(const BinaryMask& a, const BinaryMask& b) {
  if (!a.same_shape(b)) {
    throw Error(ErrorCode::DimensionMismatch,
                "iou: " + std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                    " vs " + std::to_string(b.width()) + "x" + std::to_string(b.height()));
  }
  const auto da = a.data();
  const auto db = b.data();
  std::size_t inter = 0;
  std::size_t uni = 0;
  for (std::size_t i = 0; i < da.size(); ++i) {
    inter += da[i] & db[i];
    uni += da[i] | db[i];
  }
  if (uni == 0) return 1.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

PixelIndex nearest_pixel(const Point& p, int width, int height) {
  const double rx = std::floor(p.x + 0.5);
  const double ry = std::floor(p.y + 0.5);
  const double cx = std::clamp(rx, 0.0, static_cast<double>(width - 1));
  const double cy = std::clamp(ry, 0.0, static_cast<double>(height - 1));
  return {static_cast<int>(cx), static_cast<int>(cy)};
}

bool point_in_mask(const Point& p, const BinaryMask& m) {
  const auto px = nearest_pixel(p, m.width(), m.height());
  return m.at(px.x, px.y);
}

}  // namespace promptsparse
