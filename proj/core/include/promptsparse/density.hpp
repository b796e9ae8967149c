#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "promptsparse/backend.hpp"
#include "promptsparse/types.hpp"

namespace promptsparse {

// Non-empty, strictly increasing list of grid densities, each >= 1.
class DensityCandidates {
 public:
  DensityCandidates() : DensityCandidates({2, 4, 6, 8, 12, 16}) {}
  DensityCandidates(std::initializer_list<int> values)
      : DensityCandidates(std::vector<int>(values)) {}
  explicit DensityCandidates(std::vector<int> values);

  const std::vector<int>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  int operator[](std::size_t i) const { return values_[i]; }
  int smallest() const { return values_.front(); }

  bool operator==(const DensityCandidates&) const = default;

 private:
  std::vector<int> values_;
};

struct DensityVerdict {
  std::vector<int> densities;
  // Mean IoU over references, aligned with `densities`.
  std::vector<double> scores;
  // per_reference[k][i]: IoU of reference k at densities[i].
  std::vector<std::vector<double>> per_reference;
  int selected = 0;

  double score_of(int density) const;
};

// Corner-aligned lattice {(m*W/D, n*H/D) : m, n in 0..D}, clamped into the
// raster and de-duplicated, in row-major order (n outer, m inner).
PointSet sample_reference_grid(int image_h, int image_w, int density);

PointSet filter_foreground(const PointSet& ps, const BinaryMask& mask);

// Segments the reference from its own foreground lattice points and scores
// the prediction against the reference mask. Returns 0.0 without calling the
// backend when no lattice point hits the foreground.
double score_density(const Image& image, const BinaryMask& mask, int density,
                     const SegmenterBackend& seg);

// Picks the density with the best mean IoU over the references; ties go to
// the smaller density.
DensityVerdict lookup_reference_density(std::span<const Reference> refs,
                                        const DensityCandidates& candidates,
                                        const SegmenterBackend& seg);

}  // namespace promptsparse
