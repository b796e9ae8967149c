#pragma once

#include <mutex>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

#include "promptsparse/backend.hpp"
#include "promptsparse/types.hpp"

namespace promptsparse {

// Analytic stand-in for a promptable segmenter. Every mode returns an empty
// mask unless at least one prompt lands inside the ground truth.
struct OracleSpec {
  enum class Mode {
    // Ground truth, exactly.
    Perfect,
    // Ground truth thinned so that IoU = floor(q * |gt|) / |gt| with
    // q = 1 / (1 + falloff * |n - peak|), n = prompt count and peak = the
    // number of foreground lattice points the ground truth receives at
    // `peak_density`. Peaks where the prompt count matches that density.
    DensityPeaked,
    // Ground truth eroded by a square of radius floor(rate * n).
    ErosionProportional,
  };

  Mode mode = Mode::Perfect;
  int peak_density = 4;
  double falloff = 0.1;
  double rate = 0.05;

  void validate() const;
};

const char* to_string(OracleSpec::Mode mode);

// Prompt count at which DensityPeaked is exact for this ground truth.
std::size_t oracle_peak_count(const OracleSpec& spec, const BinaryMask& gt);

// The oracle's answer for a known ground truth.
BinaryMask oracle_segment(const OracleSpec& spec, const BinaryMask& gt, const PointSet& prompts);

// Segmenter backed by registered (image, ground truth) pairs. Registration
// is expected before concurrent use but is itself thread-safe.
class OracleSegmenter final : public SegmenterBackend {
 public:
  explicit OracleSegmenter(OracleSpec spec);

  const OracleSpec& spec() const { return spec_; }

  // Throws Error(InvalidArgument) if the image is already registered with a
  // different mask.
  void add_truth(const Image& image, const BinaryMask& gt);
  // References and (when present) the target ground truth.
  void register_episode(const Episode& ep);

  SegmenterCapabilities segmenter_capabilities() const override;
  // Error(Backend) for an image without a registered ground truth.
  BinaryMask segment(const Image& image, const PointSet& prompts) const override;

 private:
  struct Entry {
    Image image;
    BinaryMask gt;
  };
  const BinaryMask* find(const Image& image) const;

  OracleSpec spec_;
  mutable std::shared_mutex mu_;
  std::unordered_map<std::size_t, std::vector<Entry>> truths_;
};

// Colour-statistics encoder: the image is split into grid_h x grid_w cells
// and each cell's descriptor is its mean RGB, centred and scaled to [-1, 1]
// (gray images are replicated over the three channels). Pairs with images
// whose objects differ from the background in colour.
class PatchStatsEncoder final : public EncoderBackend {
 public:
  PatchStatsEncoder(int grid_h, int grid_w);

  EncoderCapabilities encoder_capabilities() const override;
  FeatureMap encode(const Image& image) const override;

 private:
  int grid_h_;
  int grid_w_;
};

}  // namespace promptsparse
