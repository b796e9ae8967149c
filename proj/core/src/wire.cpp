#include "promptsparse/wire.hpp"

#include <openssl/evp.h>
#include <openssl/sha.h>

#include "json.hpp"

#include "promptsparse/image_io.hpp"

namespace promptsparse::wire {

using nlohmann::json;

std::string base64_encode(std::span<const std::uint8_t> bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), bytes.data(),
                                static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::vector<std::uint8_t> base64_decode(std::string_view text) {
  if (text.size() % 4 != 0) {
    throw Error(ErrorCode::Decode, "base64 length is not a multiple of 4");
  }
  std::vector<std::uint8_t> out(3 * (text.size() / 4));
  const int n = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char*>(text.data()),
                                static_cast<int>(text.size()));
  if (n < 0) {
    throw Error(ErrorCode::Decode, "malformed base64");
  }
  // EVP_DecodeBlock counts padding as zero bytes.
  std::size_t pad = 0;
  if (!text.empty() && text.back() == '=') ++pad;
  if (text.size() > 1 && text[text.size() - 2] == '=') ++pad;
  out.resize(static_cast<std::size_t>(n) - pad);
  return out;
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[SHA256_DIGEST_LENGTH];
  SHA256(reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size(), digest);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * SHA256_DIGEST_LENGTH);
  for (unsigned char b : digest) {
    out.push_back(kHex[b >> 4]);
    out.push_back(kHex[b & 15]);
  }
  return out;
}

namespace {

json parse_object(std::string_view body) {
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(ErrorCode::Decode, "response is not a JSON object");
  }
  return j;
}

template <typename T>
T field(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) {
    throw Error(ErrorCode::Decode, std::string("missing field \"") + key + "\"");
  }
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::Decode, std::string("field \"") + key + "\" has the wrong type");
  }
}

std::string b64_png(const Image& image) { return base64_encode(encode_png(image)); }

}  // namespace

std::string encode_request(const Image& image) {
  return json{{"image", b64_png(image)}}.dump();
}

std::string segment_request(const Image& image, const PointSet& prompts) {
  json points = json::array();
  json labels = json::array();
  for (const auto& p : prompts) {
    points.push_back({p.x, p.y});
    labels.push_back(1);
  }
  return json{{"image", b64_png(image)}, {"points", points}, {"labels", labels}}.dump();
}

FeatureMap parse_encode_response(std::string_view body) {
  const json j = parse_object(body);
  const int h = field<int>(j, "h");
  const int w = field<int>(j, "w");
  const int d = field<int>(j, "d");
  const auto payload = base64_decode(field<std::string>(j, "data"));
  return feature_map_from_payload(h, w, d, payload);
}

SegmentReply parse_segment_response(std::string_view body) {
  const json j = parse_object(body);
  SegmentReply reply;
  reply.mask = decode_mask_png(base64_decode(field<std::string>(j, "mask")));
  reply.score = j.contains("score") ? field<double>(j, "score") : 0.0;
  return reply;
}

Health parse_health(std::string_view body) {
  const json j = parse_object(body);
  Health h;
  h.status = field<std::string>(j, "status");
  h.encoder = j.contains("encoder") ? field<std::string>(j, "encoder") : "";
  h.segmenter = j.contains("segmenter") ? field<std::string>(j, "segmenter") : "";
  if (j.contains("max_in_flight")) h.max_in_flight = field<int>(j, "max_in_flight");
  if (j.contains("grid_h")) h.grid_h = field<int>(j, "grid_h");
  if (j.contains("grid_w")) h.grid_w = field<int>(j, "grid_w");
  if (j.contains("dim")) h.dim = field<int>(j, "dim");
  return h;
}

Image parse_encode_request(std::string_view body) {
  const json j = parse_object(body);
  return decode_png(base64_decode(field<std::string>(j, "image")));
}

SegmentRequest parse_segment_request(std::string_view body) {
  const json j = parse_object(body);
  SegmentRequest req;
  req.image = decode_png(base64_decode(field<std::string>(j, "image")));
  for (const auto& p : field<json>(j, "points")) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
      throw Error(ErrorCode::Decode, "points must be [x, y] number pairs");
    }
    req.points.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  req.labels = field<std::vector<int>>(j, "labels");
  if (req.labels.size() != req.points.size()) {
    throw Error(ErrorCode::Decode, "labels and points differ in length");
  }
  return req;
}

std::string encode_response(const FeatureMap& fm) {
  return json{{"h", fm.grid_h()},
              {"w", fm.grid_w()},
              {"d", fm.dim()},
              {"data", base64_encode(float_payload(fm))}}
      .dump();
}

std::string segment_response(const BinaryMask& mask, double score) {
  return json{{"mask", base64_encode(encode_mask_png(mask))}, {"score", score}}.dump();
}

std::string health_response(const Health& health) {
  json j{{"status", health.status}, {"encoder", health.encoder}, {"segmenter", health.segmenter}};
  if (health.max_in_flight) j["max_in_flight"] = *health.max_in_flight;
  if (health.grid_h) j["grid_h"] = *health.grid_h;
  if (health.grid_w) j["grid_w"] = *health.grid_w;
  if (health.dim) j["dim"] = *health.dim;
  return j.dump();
}

std::string error_response(std::string_view message) {
  return json{{"error", std::string(message)}}.dump();
}

std::string error_message(std::string_view body) {
  const json j = json::parse(body, nullptr, false);
  if (j.is_object() && j.contains("error") && j["error"].is_string()) {
    return j["error"].get<std::string>();
  }
  return std::string(body.substr(0, 200));
}

}  // namespace promptsparse::wire
