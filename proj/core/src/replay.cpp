#include "promptsparse/replay.hpp"

#include "promptsparse/feature_map.hpp"
#include "promptsparse/image_io.hpp"
#include "promptsparse/wire.hpp"

namespace promptsparse {

std::string encode_fixture_key(const Image& image) {
  return wire::sha256_hex("/v1/encode\n" + wire::encode_request(image));
}

std::string segment_fixture_key(const Image& image, const PointSet& prompts) {
  return wire::sha256_hex("/v1/segment\n" + wire::segment_request(image, prompts));
}

namespace {

std::filesystem::path features_path(const std::filesystem::path& dir, const std::string& key) {
  return dir / (key + ".features");
}

std::filesystem::path mask_path(const std::filesystem::path& dir, const std::string& key) {
  return dir / (key + ".mask.png");
}

}  // namespace

RecordingBackend::RecordingBackend(const EncoderBackend& encoder,
                                   const SegmenterBackend& segmenter, std::filesystem::path dir)
    : encoder_(encoder), segmenter_(segmenter), dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

EncoderCapabilities RecordingBackend::encoder_capabilities() const {
  return encoder_.encoder_capabilities();
}

SegmenterCapabilities RecordingBackend::segmenter_capabilities() const {
  return segmenter_.segmenter_capabilities();
}

FeatureMap RecordingBackend::encode(const Image& image) const {
  auto fm = encoder_.encode(image);
  write_file_atomic(features_path(dir_, encode_fixture_key(image)), serialize(fm));
  return fm;
}

BinaryMask RecordingBackend::segment(const Image& image, const PointSet& prompts) const {
  auto mask = segmenter_.segment(image, prompts);
  write_mask(mask_path(dir_, segment_fixture_key(image, prompts)), mask);
  return mask;
}

ReplayBackend::ReplayBackend(std::filesystem::path dir, EncoderCapabilities encoder,
                             SegmenterCapabilities segmenter)
    : dir_(std::move(dir)), encoder_(encoder), segmenter_(segmenter) {
  if (!std::filesystem::is_directory(dir_)) {
    throw Error(ErrorCode::InvalidArgument, "replay directory " + dir_.string() + " not found");
  }
}

FeatureMap ReplayBackend::encode(const Image& image) const {
  const auto path = features_path(dir_, encode_fixture_key(image));
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::Backend, "replay: no recorded encode response " + path.filename().string());
  }
  auto fm = deserialize_feature_map(read_file(path));
  check_feature_map(encoder_, fm);
  return fm;
}

BinaryMask ReplayBackend::segment(const Image& image, const PointSet& prompts) const {
  check_segment_request(image, prompts);
  const auto path = mask_path(dir_, segment_fixture_key(image, prompts));
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::Backend, "replay: no recorded segment response " + path.filename().string());
  }
  auto mask = read_mask(path);
  if (mask.width() != image.width() || mask.height() != image.height()) {
    throw Error(ErrorCode::DimensionMismatch, "replay: recorded mask does not match the image");
  }
  return mask;
}

}  // namespace promptsparse
