#pragma once

#include <cstddef>

#include "promptsparse/feature_map.hpp"
#include "promptsparse/types.hpp"

namespace promptsparse {

struct MatchConfig {
  // Minimum cosine similarity to the foreground prototype.
  double similarity_threshold = 0.5;
  std::size_t max_points = 400;
  // Also require a cell to be closer to the foreground than to the
  // background prototype.
  bool use_background_negatives = true;

  void validate() const;
};

// Pools a pixel mask onto a grid_h x grid_w grid. A cell is foreground when
// at least half of the pixels it covers are. Cell (i, j) covers rows
// [i*H/h, (i+1)*H/h) and columns [j*W/w, (j+1)*W/w) in integer division.
BinaryMask downsample_mask(const BinaryMask& m, int grid_h, int grid_w);

// Positive/negative prototype alignment. The reference mask is pooled onto
// the reference grid, the foreground and background descriptor means are
// L2-normalised, and each target cell is kept when its cosine similarity to
// the foreground prototype is >= the threshold and (optionally) strictly
// greater than its similarity to the background prototype. At most
// max_points cells survive, ordered by descending similarity with ties
// broken by row-major cell index.
//
// Errors: DimensionMismatch when descriptor dims differ;
// EmptyReferenceForeground when no pooled cell is foreground;
// NoCandidatePoints when nothing qualifies.
PointSet match_points(const FeatureMap& f_ref, const BinaryMask& m_ref, const FeatureMap& f_tgt,
                      const MatchConfig& cfg);

// Maps feature-grid cells to the centres of their image regions:
// X = (x + 1/2) * W / w, Y = (y + 1/2) * H / h.
PointSet project_to_image(const PointSet& grid_points, int image_h, int image_w);

}  // namespace promptsparse
