#include "promptsparse/oracle.hpp"

#include <cmath>
#include <functional>
#include <string_view>

#include "promptsparse/density.hpp"
#include "promptsparse/metrics.hpp"
#include "promptsparse/refine.hpp"

namespace promptsparse {

void OracleSpec::validate() const {
  if (peak_density < 1) {
    throw Error(ErrorCode::InvalidArgument, "oracle peak_density must be >= 1");
  }
  if (!(falloff > 0.0) || !std::isfinite(falloff)) {
    throw Error(ErrorCode::InvalidArgument, "oracle falloff must be positive");
  }
  if (!(rate >= 0.0) || !std::isfinite(rate)) {
    throw Error(ErrorCode::InvalidArgument, "oracle rate must be non-negative");
  }
}

const char* to_string(OracleSpec::Mode mode) {
  switch (mode) {
    case OracleSpec::Mode::Perfect: return "perfect";
    case OracleSpec::Mode::DensityPeaked: return "density_peaked";
    case OracleSpec::Mode::ErosionProportional: return "erosion_proportional";
  }
  return "unknown";
}

std::size_t oracle_peak_count(const OracleSpec& spec, const BinaryMask& gt) {
  return filter_foreground(sample_reference_grid(gt.height(), gt.width(), spec.peak_density), gt)
      .size();
}

namespace {

BinaryMask keep_prefix(const BinaryMask& gt, std::size_t keep) {
  BinaryMask out(gt.width(), gt.height());
  std::size_t kept = 0;
  for (int y = 0; y < gt.height() && kept < keep; ++y) {
    for (int x = 0; x < gt.width() && kept < keep; ++x) {
      if (gt.at(x, y)) {
        out.set(x, y, true);
        ++kept;
      }
    }
  }
  return out;
}

}  // namespace

BinaryMask oracle_segment(const OracleSpec& spec, const BinaryMask& gt, const PointSet& prompts) {
  bool hit = false;
  for (const auto& p : prompts) {
    if (point_in_mask(p, gt)) {
      hit = true;
      break;
    }
  }
  if (!hit) return BinaryMask(gt.width(), gt.height());

  const std::size_t n = prompts.size();
  switch (spec.mode) {
    case OracleSpec::Mode::Perfect:
      return gt;
    case OracleSpec::Mode::DensityPeaked: {
      const std::size_t peak = oracle_peak_count(spec, gt);
      const double gap = n > peak ? static_cast<double>(n - peak) : static_cast<double>(peak - n);
      if (gap == 0.0) return gt;
      const double q = 1.0 / (1.0 + spec.falloff * gap);
      return keep_prefix(gt, static_cast<std::size_t>(std::floor(q * gt.count())));
    }
    case OracleSpec::Mode::ErosionProportional: {
      const int radius = static_cast<int>(std::floor(spec.rate * static_cast<double>(n)));
      if (radius < 1) return gt;
      return erode(gt, {StructuringElement::Shape::Square, radius});
    }
  }
  return gt;
}

OracleSegmenter::OracleSegmenter(OracleSpec spec) : spec_(spec) { spec_.validate(); }

namespace {

std::size_t image_key(const Image& image) {
  const auto bytes = image.data();
  const std::string_view view(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  std::size_t h = std::hash<std::string_view>{}(view);
  h ^= static_cast<std::size_t>(image.width()) * 0x9e3779b97f4a7c15ull;
  h ^= static_cast<std::size_t>(image.height()) << 17;
  return h;
}

}  // namespace

const BinaryMask* OracleSegmenter::find(const Image& image) const {
  const auto it = truths_.find(image_key(image));
  if (it == truths_.end()) return nullptr;
  for (const auto& e : it->second) {
    if (e.image == image) return &e.gt;
  }
  return nullptr;
}

void OracleSegmenter::add_truth(const Image& image, const BinaryMask& gt) {
  if (gt.width() != image.width() || gt.height() != image.height()) {
    throw Error(ErrorCode::DimensionMismatch, "oracle ground truth does not match its image");
  }
  std::unique_lock lock(mu_);
  if (const auto* existing = find(image)) {
    if (!(*existing == gt)) {
      throw Error(ErrorCode::InvalidArgument,
                  "oracle: image already registered with a different mask");
    }
    return;
  }
  truths_[image_key(image)].push_back({image, gt});
}

void OracleSegmenter::register_episode(const Episode& ep) {
  for (const auto& r : ep.references) add_truth(r.image, r.mask);
  if (ep.target_gt) add_truth(ep.target, *ep.target_gt);
}

SegmenterCapabilities OracleSegmenter::segmenter_capabilities() const {
  return {.input_resolution = 0, .max_in_flight = 64};
}

BinaryMask OracleSegmenter::segment(const Image& image, const PointSet& prompts) const {
  check_segment_request(image, prompts);
  std::shared_lock lock(mu_);
  const auto* gt = find(image);
  if (gt == nullptr) {
    throw Error(ErrorCode::Backend, "oracle: no ground truth registered for this image");
  }
  return oracle_segment(spec_, *gt, prompts);
}

PatchStatsEncoder::PatchStatsEncoder(int grid_h, int grid_w) : grid_h_(grid_h), grid_w_(grid_w) {
  if (grid_h < 1 || grid_w < 1) {
    throw Error(ErrorCode::InvalidArgument, "encoder grid must be positive");
  }
}

EncoderCapabilities PatchStatsEncoder::encoder_capabilities() const {
  return {.input_resolution = 0, .grid_h = grid_h_, .grid_w = grid_w_, .dim = 3};
}

FeatureMap PatchStatsEncoder::encode(const Image& image) const {
  const int H = image.height();
  const int W = image.width();
  if (H < grid_h_ || W < grid_w_) {
    throw Error(ErrorCode::InvalidArgument, "image is smaller than the encoder grid");
  }
  std::vector<float> data(static_cast<std::size_t>(grid_h_) * grid_w_ * 3);
  for (int i = 0; i < grid_h_; ++i) {
    const int y0 = static_cast<int>(static_cast<long long>(i) * H / grid_h_);
    const int y1 = static_cast<int>(static_cast<long long>(i + 1) * H / grid_h_);
    for (int j = 0; j < grid_w_; ++j) {
      const int x0 = static_cast<int>(static_cast<long long>(j) * W / grid_w_);
      const int x1 = static_cast<int>(static_cast<long long>(j + 1) * W / grid_w_);
      double sum[3] = {0.0, 0.0, 0.0};
      for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
          for (int c = 0; c < 3; ++c) {
            sum[c] += image.at(x, y, image.channels() == 3 ? c : 0);
          }
        }
      }
      const double n = static_cast<double>(y1 - y0) * (x1 - x0);
      float* d = &data[(static_cast<std::size_t>(i) * grid_w_ + j) * 3];
      for (int c = 0; c < 3; ++c) d[c] = static_cast<float>((sum[c] / n - 127.5) / 127.5);
    }
  }
  return FeatureMap(grid_h_, grid_w_, 3, std::move(data));
}

}  // namespace promptsparse
