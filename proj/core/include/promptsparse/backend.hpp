#pragma once

#include "promptsparse/feature_map.hpp"
#include "promptsparse/types.hpp"

namespace promptsparse {

struct EncoderCapabilities {
  int input_resolution = 518;
  int grid_h = 37;
  int grid_w = 37;
  int dim = 1024;
};

// Dense descriptor extractor. Implementations must be deterministic for a
// fixed model and safe to call from several threads.
class EncoderBackend {
 public:
  virtual ~EncoderBackend() = default;
  virtual EncoderCapabilities encoder_capabilities() const = 0;
  // Returns a map with exactly the advertised (grid_h, grid_w, dim).
  virtual FeatureMap encode(const Image& image) const = 0;
};

struct SegmenterCapabilities {
  int input_resolution = 1024;
  int max_in_flight = 1;
};

// Point-promptable segmenter. Prompts are positive points in the image's
// pixel space; the result is a mask at the image's resolution.
class SegmenterBackend {
 public:
  virtual ~SegmenterBackend() = default;
  virtual SegmenterCapabilities segmenter_capabilities() const = 0;
  // Throws Error(InvalidArgument) for an empty prompt set.
  virtual BinaryMask segment(const Image& image, const PointSet& prompts) const = 0;
};

// Throws Error(DimensionMismatch) unless `fm` has the advertised shape.
void check_feature_map(const EncoderCapabilities& caps, const FeatureMap& fm);

// Shared precondition check for segment(): non-empty prompts living in the
// image's pixel space.
void check_segment_request(const Image& image, const PointSet& prompts);

}  // namespace promptsparse
