#include "promptsparse/feature_map.hpp"

#include <bit>
#include <cmath>
#include <cstring>

namespace promptsparse {

static_assert(std::endian::native == std::endian::little,
              "feature map codec assumes a little-endian host");

FeatureMap::FeatureMap(int grid_h, int grid_w, int dim, std::vector<float> data)
    : grid_h_(grid_h), grid_w_(grid_w), dim_(dim), data_(std::move(data)) {
  if (grid_h < 1 || grid_w < 1 || dim < 1) {
    throw Error(ErrorCode::InvalidArgument, "feature map extents must be positive");
  }
  if (data_.size() != static_cast<std::size_t>(grid_h) * grid_w * dim) {
    throw Error(ErrorCode::InvalidArgument, "feature map data length does not match h*w*d");
  }
  for (float v : data_) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::InvalidArgument, "feature map contains a non-finite value");
    }
  }
}

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) | static_cast<std::uint32_t>(b[at + 1]) << 8 |
         static_cast<std::uint32_t>(b[at + 2]) << 16 |
         static_cast<std::uint32_t>(b[at + 3]) << 24;
}

}  // namespace

std::vector<std::uint8_t> float_payload(const FeatureMap& fm) {
  std::vector<std::uint8_t> out(fm.data().size() * sizeof(float));
  std::memcpy(out.data(), fm.data().data(), out.size());
  return out;
}

FeatureMap feature_map_from_payload(int grid_h, int grid_w, int dim,
                                    std::span<const std::uint8_t> payload) {
  if (grid_h < 1 || grid_w < 1 || dim < 1) {
    throw Error(ErrorCode::Decode, "feature map header has a zero extent");
  }
  const std::size_t n = static_cast<std::size_t>(grid_h) * grid_w * dim;
  if (payload.size() != n * sizeof(float)) {
    throw Error(ErrorCode::Decode, "feature map payload is " + std::to_string(payload.size()) +
                                       " bytes, expected " + std::to_string(n * sizeof(float)));
  }
  std::vector<float> data(n);
  std::memcpy(data.data(), payload.data(), payload.size());
  try {
    return FeatureMap(grid_h, grid_w, dim, std::move(data));
  } catch (const Error& e) {
    throw Error(ErrorCode::Decode, e.what());
  }
}

std::vector<std::uint8_t> serialize(const FeatureMap& fm) {
  std::vector<std::uint8_t> out;
  out.reserve(12 + fm.data().size() * sizeof(float));
  put_u32(out, static_cast<std::uint32_t>(fm.grid_h()));
  put_u32(out, static_cast<std::uint32_t>(fm.grid_w()));
  put_u32(out, static_cast<std::uint32_t>(fm.dim()));
  const auto payload = float_payload(fm);
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

FeatureMap deserialize_feature_map(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12) {
    throw Error(ErrorCode::Decode, "feature map shorter than its 12-byte header");
  }
  const auto h = get_u32(bytes, 0);
  const auto w = get_u32(bytes, 4);
  const auto d = get_u32(bytes, 8);
  constexpr std::uint32_t kMaxExtent = 1u << 16;
  if (h > kMaxExtent || w > kMaxExtent || d > kMaxExtent) {
    throw Error(ErrorCode::Decode, "feature map header extents are implausible");
  }
  return feature_map_from_payload(static_cast<int>(h), static_cast<int>(w),
                                  static_cast<int>(d), bytes.subspan(12));
}

}  // namespace promptsparse
