#pragma once

#include <filesystem>
#include <string>

#include "promptsparse/backend.hpp"

namespace promptsparse {

// Fixture keys are the SHA-256 of "<endpoint>\n<request body>", where the
// body is exactly what RemoteBackend would send. Encoder fixtures are
// stored as <key>.features (FeatureMap binary layout), segmenter fixtures
// as <key>.mask.png.
std::string encode_fixture_key(const Image& image);
std::string segment_fixture_key(const Image& image, const PointSet& prompts);

// Forwards to wrapped backends and stores every answer as a fixture.
class RecordingBackend final : public EncoderBackend, public SegmenterBackend {
 public:
  RecordingBackend(const EncoderBackend& encoder, const SegmenterBackend& segmenter,
                   std::filesystem::path dir);

  EncoderCapabilities encoder_capabilities() const override;
  FeatureMap encode(const Image& image) const override;

  SegmenterCapabilities segmenter_capabilities() const override;
  BinaryMask segment(const Image& image, const PointSet& prompts) const override;

 private:
  const EncoderBackend& encoder_;
  const SegmenterBackend& segmenter_;
  std::filesystem::path dir_;
};

// Answers from recorded fixtures only; a missing fixture is Error(Backend).
class ReplayBackend final : public EncoderBackend, public SegmenterBackend {
 public:
  ReplayBackend(std::filesystem::path dir, EncoderCapabilities encoder,
                SegmenterCapabilities segmenter = {});

  EncoderCapabilities encoder_capabilities() const override { return encoder_; }
  FeatureMap encode(const Image& image) const override;

  SegmenterCapabilities segmenter_capabilities() const override { return segmenter_; }
  BinaryMask segment(const Image& image, const PointSet& prompts) const override;

 private:
  std::filesystem::path dir_;
  EncoderCapabilities encoder_;
  SegmenterCapabilities segmenter_;
};

}  // namespace promptsparse
