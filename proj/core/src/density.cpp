#include "promptsparse/density.hpp"

#include <algorithm>
#include <set>
#include <utility>

#include "promptsparse/metrics.hpp"

namespace promptsparse {

DensityCandidates::DensityCandidates(std::vector<int> values) : values_(std::move(values)) {
  if (values_.empty()) {
    throw Error(ErrorCode::InvalidArgument, "density candidates must not be empty");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] < 1) {
      throw Error(ErrorCode::InvalidArgument, "density candidates must be >= 1");
    }
    if (i > 0 && values_[i] <= values_[i - 1]) {
      throw Error(ErrorCode::InvalidArgument, "density candidates must be strictly increasing");
    }
  }
}

double DensityVerdict::score_of(int density) const {
  for (std::size_t i = 0; i < densities.size(); ++i) {
    if (densities[i] == density) return scores[i];
  }
  throw Error(ErrorCode::InvalidArgument, "density " + std::to_string(density) +
                                              " is not part of the verdict");
}

PointSet sample_reference_grid(int image_h, int image_w, int density) {
  if (density < 1) {
    throw Error(ErrorCode::InvalidArgument, "density must be >= 1");
  }
  if (image_h < 1 || image_w < 1) {
    throw Error(ErrorCode::InvalidArgument, "image extents must be positive");
  }
  const double max_x = image_w - 1;
  const double max_y = image_h - 1;
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(density + 1) * (density + 1));
  for (int n = 0; n <= density; ++n) {
    const double y = std::min(static_cast<double>(n) * image_h / density, max_y);
    for (int m = 0; m <= density; ++m) {
      const double x = std::min(static_cast<double>(m) * image_w / density, max_x);
      pts.push_back({x, y});
    }
  }
  return PointSet::deduplicated(std::move(pts), PointSpace::image_pixels(image_h, image_w));
}

PointSet filter_foreground(const PointSet& ps, const BinaryMask& mask) {
  std::vector<Point> kept;
  for (const auto& p : ps) {
    if (point_in_mask(p, mask)) kept.push_back(p);
  }
  return PointSet(std::move(kept), ps.space());
}

double score_density(const Image& image, const BinaryMask& mask, int density,
                     const SegmenterBackend& seg) {
  const auto prompts =
      filter_foreground(sample_reference_grid(image.height(), image.width(), density), mask);
  if (prompts.empty()) return 0.0;
  try {
    return iou(seg.segment(image, prompts), mask);
  } catch (const Error& e) {
    throw e.with_context("density " + std::to_string(density));
  }
}

DensityVerdict lookup_reference_density(std::span<const Reference> refs,
                                        const DensityCandidates& candidates,
                                        const SegmenterBackend& seg) {
  if (refs.empty()) {
    throw Error(ErrorCode::InvalidArgument, "density lookup needs at least one reference");
  }
  DensityVerdict v;
  v.densities = candidates.values();
  v.per_reference.assign(refs.size(), std::vector<double>(candidates.size(), 0.0));
  for (std::size_t k = 0; k < refs.size(); ++k) {
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      try {
        v.per_reference[k][i] = score_density(refs[k].image, refs[k].mask, candidates[i], seg);
      } catch (const Error& e) {
        throw e.with_context("reference " + std::to_string(k));
      }
    }
  }

  v.scores.assign(candidates.size(), 0.0);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    double sum = 0.0;
    for (std::size_t k = 0; k < refs.size(); ++k) sum += v.per_reference[k][i];
    v.scores[i] = sum / static_cast<double>(refs.size());
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < v.scores.size(); ++i) {
    if (v.scores[i] > v.scores[best]) best = i;
  }
  v.selected = candidates[best];
  return v;
}

}  // namespace promptsparse
