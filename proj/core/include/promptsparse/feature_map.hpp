#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "promptsparse/types.hpp"

namespace promptsparse {

// h x w grid of d-dimensional float descriptors, row-major, channel-last.
class FeatureMap {
 public:
  FeatureMap() = default;
  // Throws Error(InvalidArgument) on zero extents, wrong data length or a
  // non-finite value.
  FeatureMap(int grid_h, int grid_w, int dim, std::vector<float> data);

  int grid_h() const { return grid_h_; }
  int grid_w() const { return grid_w_; }
  int dim() const { return dim_; }
  std::span<const float> data() const { return data_; }

  std::span<const float> descriptor(int x, int y) const {
    return std::span<const float>(data_).subspan(
        (static_cast<std::size_t>(y) * grid_w_ + x) * dim_, dim_);
  }

  bool operator==(const FeatureMap&) const = default;

 private:
  int grid_h_ = 0;
  int grid_w_ = 0;
  int dim_ = 0;
  std::vector<float> data_;
};

// Binary layout: u32 h, u32 w, u32 d (little-endian), then h*w*d
// little-endian f32 values.
std::vector<std::uint8_t> serialize(const FeatureMap& fm);
FeatureMap deserialize_feature_map(std::span<const std::uint8_t> bytes);

// Raw little-endian f32 payload without the header (wire protocol body).
std::vector<std::uint8_t> float_payload(const FeatureMap& fm);
FeatureMap feature_map_from_payload(int grid_h, int grid_w, int dim,
                                    std::span<const std::uint8_t> payload);

}  // namespace promptsparse
