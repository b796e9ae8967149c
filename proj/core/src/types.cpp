#include "promptsparse/types.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

namespace promptsparse {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::DimensionMismatch: return "dimension mismatch";
    case ErrorCode::EmptyReferenceForeground: return "empty reference foreground";
    case ErrorCode::NoCandidatePoints: return "no candidate points";
    case ErrorCode::Decode: return "decode error";
    case ErrorCode::Io: return "io error";
    case ErrorCode::Backend: return "backend error";
    case ErrorCode::Transport: return "transport error";
  }
  return "unknown";
}

Image::Image(int width, int height, int channels)
    : Image(width, height, channels,
            std::vector<std::uint8_t>(static_cast<std::size_t>(std::max(width, 0)) *
                                      std::max(height, 0) * std::max(channels, 0))) {}

Image::Image(int width, int height, int channels, std::vector<std::uint8_t> data)
    : width_(width), height_(height), channels_(channels), data_(std::move(data)) {
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::InvalidArgument, "image dimensions must be positive");
  }
  if (channels != 1 && channels != 3) {
    throw Error(ErrorCode::InvalidArgument, "image must have 1 or 3 channels");
  }
  if (data_.size() != static_cast<std::size_t>(width) * height * channels) {
    throw Error(ErrorCode::InvalidArgument, "image data length does not match W*H*C");
  }
}

BinaryMask::BinaryMask(int width, int height, bool fill)
    : BinaryMask(width, height,
                 std::vector<std::uint8_t>(
                     static_cast<std::size_t>(std::max(width, 0)) * std::max(height, 0),
                     fill ? 1 : 0)) {}

BinaryMask::BinaryMask(int width, int height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::InvalidArgument, "mask dimensions must be positive");
  }
  if (data_.size() != static_cast<std::size_t>(width) * height) {
    throw Error(ErrorCode::InvalidArgument, "mask data length does not match W*H");
  }
  for (auto& v : data_) v = v ? 1 : 0;
}

std::size_t BinaryMask::count() const {
  return static_cast<std::size_t>(std::count(data_.begin(), data_.end(), std::uint8_t{1}));
}

BinaryMask BinaryMask::complement() const {
  BinaryMask out = *this;
  for (auto& v : out.data_) v = v ? 0 : 1;
  return out;
}

namespace {

void check_point(const Point& p, const PointSpace& space) {
  if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
    throw Error(ErrorCode::InvalidArgument, "point coordinates must be finite");
  }
  if (p.x < 0.0 || p.y < 0.0 || p.x >= space.width || p.y >= space.height) {
    throw Error(ErrorCode::InvalidArgument,
                "point (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                    ") outside " + std::to_string(space.width) + "x" +
                    std::to_string(space.height) + " space");
  }
}

}  // namespace

PointSet::PointSet(std::vector<Point> points, PointSpace space)
    : points_(std::move(points)), space_(space) {
  if (space_.width < 1 || space_.height < 1) {
    throw Error(ErrorCode::InvalidArgument, "point space dimensions must be positive");
  }
  std::set<std::pair<double, double>> seen;
  for (const auto& p : points_) {
    check_point(p, space_);
    if (!seen.emplace(p.x, p.y).second) {
      throw Error(ErrorCode::InvalidArgument, "duplicate point in point set");
    }
  }
}

PointSet PointSet::deduplicated(std::vector<Point> points, PointSpace space) {
  std::set<std::pair<double, double>> seen;
  std::vector<Point> unique;
  unique.reserve(points.size());
  for (const auto& p : points) {
    if (seen.emplace(p.x, p.y).second) unique.push_back(p);
  }
  return PointSet(std::move(unique), space);
}

void Episode::validate() const {
  if (references.empty()) {
    throw Error(ErrorCode::InvalidArgument, "episode needs at least one reference");
  }
  for (std::size_t i = 0; i < references.size(); ++i) {
    const auto& r = references[i];
    if (r.mask.width() != r.image.width() || r.mask.height() != r.image.height()) {
      throw Error(ErrorCode::DimensionMismatch,
                  "reference " + std::to_string(i) + " mask does not match its image");
    }
  }
  if (target_gt && (target_gt->width() != target.width() ||
                    target_gt->height() != target.height())) {
    throw Error(ErrorCode::DimensionMismatch, "target mask does not match target image");
  }
}

}  // namespace promptsparse
