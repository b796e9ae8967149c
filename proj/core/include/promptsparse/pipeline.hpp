#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "promptsparse/backend.hpp"
#include "promptsparse/density.hpp"
#include "promptsparse/matching.hpp"
#include "promptsparse/refine.hpp"
#include "promptsparse/types.hpp"

namespace promptsparse {

struct SparsifyMode {
  enum class Kind { Off, Fixed, Adaptive };

  Kind kind = Kind::Adaptive;
  int density = 0;  // Fixed only

  static SparsifyMode off() { return {Kind::Off, 0}; }
  static SparsifyMode fixed(int d) { return {Kind::Fixed, d}; }
  static SparsifyMode adaptive() { return {Kind::Adaptive, 0}; }

  // "off", "adaptive" or "fixed:<D>".
  static SparsifyMode parse(const std::string& text);
  std::string to_string() const;

  bool operator==(const SparsifyMode&) const = default;
};

struct PipelineToggles {
  bool pruning = true;
  SparsifyMode sparsification = SparsifyMode::adaptive();
  bool refinement = true;
};

struct PipelineConfig {
  MatchConfig match;
  DensityCandidates candidates;
  StructuringElement kernel;
  PipelineToggles toggles;
  std::size_t min_keep = 1;

  void validate() const;
};

enum class Stage { Encode, Match, Project, Prune, Lookup, Sparsify, Segment, Refine };
const char* to_string(Stage stage);

struct StageRecord {
  Stage stage;
  // Points (or mask pixels for Segment/Refine) leaving the stage.
  std::size_t count;
};

struct Trace {
  std::vector<StageRecord> stages;
  std::size_t n_matched = 0;
  std::size_t n_pruned = 0;
  std::size_t n_sparse = 0;
  std::optional<int> selected_density;
};

struct EpisodeResult {
  BinaryMask mask;
  std::optional<DensityVerdict> verdict;
  Trace trace;
  // Prompts actually sent to the segmenter.
  PointSet prompts;
  std::optional<double> iou_vs_gt;
};

// encode -> match (union over references) -> project -> prune -> density
// lookup -> sparsify -> segment -> refine, each optional stage gated by the
// config toggles. Errors carry the failing stage in their message;
// Error(NoCandidatePoints) when no reference produces a match.
EpisodeResult run_episode(const Episode& ep, const PipelineConfig& cfg, const EncoderBackend& enc,
                          const SegmenterBackend& seg);

// Fraction of points whose nearest pixel is foreground. Error on an empty
// set.
double point_accuracy(const PointSet& points, const BinaryMask& gt);

struct DensityStudyRow {
  int density = 0;
  std::size_t n_prompts = 0;
  double iou = 0.0;
};

// Sweeps the lattice-prompt procedure used for reference density lookup
// over `densities` on one annotated image.
std::vector<DensityStudyRow> density_sensitivity_study(const Image& image, const BinaryMask& gt,
                                                       const DensityCandidates& densities,
                                                       const SegmenterBackend& seg);

// density,n_prompts,iou
std::string density_study_csv(const std::vector<DensityStudyRow>& rows);

}  // namespace promptsparse
