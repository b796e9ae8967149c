#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "promptsparse/feature_map.hpp"
#include "promptsparse/types.hpp"

// JSON bodies of the model-service protocol:
//
//   POST /v1/encode   {"image": b64png}
//                  -> {"h", "w", "d", "data": b64 of little-endian f32}
//   POST /v1/segment  {"image": b64png, "points": [[x, y], ...], "labels": [1, ...]}
//                  -> {"mask": b64 single-channel png (0/255), "score"}
//   GET  /v1/health -> {"status": "ok", "encoder", "segmenter"}
//   errors          -> {"error": message} with HTTP 400 / 503 / 500
namespace promptsparse::wire {

std::string base64_encode(std::span<const std::uint8_t> bytes);
// Error(Decode) on malformed input.
std::vector<std::uint8_t> base64_decode(std::string_view text);

std::string sha256_hex(std::string_view bytes);

std::string encode_request(const Image& image);
std::string segment_request(const Image& image, const PointSet& prompts);

struct SegmentReply {
  BinaryMask mask;
  double score = 0.0;
};

// Decoding errors raise Error(Decode).
FeatureMap parse_encode_response(std::string_view body);
SegmentReply parse_segment_response(std::string_view body);

struct Health {
  std::string status;
  std::string encoder;
  std::string segmenter;
  // Optional capability fields a server may advertise.
  std::optional<int> max_in_flight;
  std::optional<int> grid_h;
  std::optional<int> grid_w;
  std::optional<int> dim;
};
Health parse_health(std::string_view body);

// Server-side halves, used by test servers and fixtures.
Image parse_encode_request(std::string_view body);
struct SegmentRequest {
  Image image;
  std::vector<Point> points;
  std::vector<int> labels;
};
SegmentRequest parse_segment_request(std::string_view body);
std::string encode_response(const FeatureMap& fm);
std::string segment_response(const BinaryMask& mask, double score);
std::string health_response(const Health& health);
std::string error_response(std::string_view message);

// Reads {"error": ...} from a body, falling back to the raw text.
std::string error_message(std::string_view body);

}  // namespace promptsparse::wire
