#include "promptsparse/backend.hpp"

#include <string>

namespace promptsparse {

void check_feature_map(const EncoderCapabilities& caps, const FeatureMap& fm) {
  if (fm.grid_h() != caps.grid_h || fm.grid_w() != caps.grid_w || fm.dim() != caps.dim) {
    throw Error(ErrorCode::DimensionMismatch,
                "encoder returned " + std::to_string(fm.grid_h()) + "x" +
                    std::to_string(fm.grid_w()) + "x" + std::to_string(fm.dim()) +
                    ", capabilities declare " + std::to_string(caps.grid_h) + "x" +
                    std::to_string(caps.grid_w) + "x" + std::to_string(caps.dim));
  }
}

void check_segment_request(const Image& image, const PointSet& prompts) {
  if (prompts.empty()) {
    throw Error(ErrorCode::InvalidArgument, "segment: empty prompt set");
  }
  const auto& s = prompts.space();
  if (s.kind != PointSpace::Kind::ImagePixels || s.width != image.width() ||
      s.height != image.height()) {
    throw Error(ErrorCode::InvalidArgument,
                "segment: prompts are not in the image's pixel space");
  }
}

}  // namespace promptsparse
