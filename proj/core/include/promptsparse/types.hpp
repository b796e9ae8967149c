#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace promptsparse {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  EmptyReferenceForeground,
  NoCandidatePoints,
  Decode,
  Io,
  Backend,
  Transport,
};

const char* to_string(ErrorCode code);

// Single exception type for the library. The code decides how callers
// (notably the CLI exit-code mapping) classify a failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  // Same code, message prefixed with `context: `.
  Error with_context(const std::string& context) const {
    return Error(code_, context + ": " + what());
  }

 private:
  ErrorCode code_;
};

// 8-bit raster, row-major, interleaved channels (1 = gray, 3 = RGB).
class Image {
 public:
  Image() = default;
  Image(int width, int height, int channels);
  Image(int width, int height, int channels, std::vector<std::uint8_t> data);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  std::span<const std::uint8_t> data() const { return data_; }
  std::span<std::uint8_t> data() { return data_; }

  std::uint8_t at(int x, int y, int c = 0) const {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }
  std::uint8_t& at(int x, int y, int c = 0) {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }

  bool operator==(const Image&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  int channels_ = 1;
  std::vector<std::uint8_t> data_;
};

// H x W boolean raster; foreground = true. Stored one byte per pixel.
class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(int width, int height, bool fill = false);
  BinaryMask(int width, int height, std::vector<std::uint8_t> data);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }

  bool at(int x, int y) const {
    return data_[static_cast<std::size_t>(y) * width_ + x] != 0;
  }
  void set(int x, int y, bool value) {
    data_[static_cast<std::size_t>(y) * width_ + x] = value ? 1 : 0;
  }
  // Row-major view, values are 0 or 1.
  std::span<const std::uint8_t> data() const { return data_; }

  std::size_t count() const;
  bool empty_foreground() const { return count() == 0; }
  bool same_shape(const BinaryMask& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

  BinaryMask complement() const;

  bool operator==(const BinaryMask&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

struct Point {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point&) const = default;
};

// Coordinate space a point set lives in. For a feature grid, width/height
// are the grid's w/h cell counts; for image pixels they are W/H.
struct PointSpace {
  enum class Kind { FeatureGrid, ImagePixels };

  Kind kind = Kind::ImagePixels;
  int width = 0;
  int height = 0;

  static PointSpace feature_grid(int grid_h, int grid_w) {
    return {Kind::FeatureGrid, grid_w, grid_h};
  }
  static PointSpace image_pixels(int height, int width) {
    return {Kind::ImagePixels, width, height};
  }

  bool operator==(const PointSpace&) const = default;
};

// Ordered, duplicate-free list of points that all lie inside `space`.
class PointSet {
 public:
  PointSet() = default;
  // Throws Error(InvalidArgument) if a point is non-finite, out of bounds,
  // or repeated.
  PointSet(std::vector<Point> points, PointSpace space);

  // Drops exact duplicates (keeping the first occurrence) before validating.
  static PointSet deduplicated(std::vector<Point> points, PointSpace space);

  const std::vector<Point>& points() const { return points_; }
  const PointSpace& space() const { return space_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const Point& operator[](std::size_t i) const { return points_[i]; }
  auto begin() const { return points_.begin(); }
  auto end() const { return points_.end(); }

  bool operator==(const PointSet&) const = default;

 private:
  std::vector<Point> points_;
  PointSpace space_;
};

struct Reference {
  Image image;
  BinaryMask mask;
};

// K >= 1 annotated references plus one target image.
struct Episode {
  std::vector<Reference> references;
  Image target;
  std::optional<BinaryMask> target_gt;

  // Throws Error(InvalidArgument) when K == 0 or a mask does not match its
  // image.
  void validate() const;
};

}  // namespace promptsparse
