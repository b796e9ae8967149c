#include <gtest/gtest.h>

#include "json.hpp"
#include "oracles.hpp"
#include "promptsparse/image_io.hpp"
#include "promptsparse/wire.hpp"

using namespace promptsparse;
using nlohmann::json;

TEST(Base64, KnownVectors) {
  auto enc = [](std::string s) {
    return wire::base64_encode(
        std::span(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
  };
  EXPECT_EQ(enc(""), "");
  EXPECT_EQ(enc("f"), "Zg==");
  EXPECT_EQ(enc("fo"), "Zm8=");
  EXPECT_EQ(enc("foo"), "Zm9v");
  EXPECT_EQ(enc("foobar"), "Zm9vYmFy");
}

TEST(Base64, RoundTripAllLengths) {
  std::vector<std::uint8_t> bytes;
  for (int n = 0; n < 40; ++n) {
    EXPECT_EQ(wire::base64_decode(wire::base64_encode(bytes)), bytes) << n;
    bytes.push_back(static_cast<std::uint8_t>(n * 37 + 1));
  }
}

TEST(Base64, Malformed) {
  EXPECT_THROW(wire::base64_decode("abc"), Error);
  EXPECT_THROW(wire::base64_decode("ab!d"), Error);
}

TEST(Sha256, KnownVector) {
  EXPECT_EQ(wire::sha256_hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Wire, SegmentRequestShape) {
  const auto img = promptsparse::testing::flat_image(4, 3, 9);
  const PointSet ps({{0.5, 1.25}, {3, 2}}, PointSpace::image_pixels(3, 4));
  const auto j = json::parse(wire::segment_request(img, ps));
  ASSERT_TRUE(j.is_object());
  EXPECT_EQ(j.size(), 3u);
  EXPECT_EQ(j["points"], json::parse("[[0.5, 1.25], [3.0, 2.0]]"));
  EXPECT_EQ(j["labels"], json::parse("[1, 1]"));
  const auto back = wire::parse_segment_request(j.dump());
  EXPECT_EQ(back.image, img);
  EXPECT_EQ(back.points, ps.points());
}

TEST(Wire, EncodeRoundTrip) {
  const auto img = promptsparse::testing::flat_image(4, 3, 9);
  EXPECT_EQ(wire::parse_encode_request(wire::encode_request(img)), img);
  const FeatureMap fm(2, 1, 2, {0.5f, -1.0f, 2.0f, 3.0f});
  const auto body = wire::encode_response(fm);
  const auto j = json::parse(body);
  EXPECT_EQ(j["h"], 2);
  EXPECT_EQ(j["w"], 1);
  EXPECT_EQ(j["d"], 2);
  EXPECT_EQ(wire::base64_decode(j["data"].get<std::string>()).size(), 16u);
  EXPECT_EQ(wire::parse_encode_response(body), fm);
}

TEST(Wire, EncodeResponsePayloadLengthChecked) {
  const json j{{"h", 2}, {"w", 2}, {"d", 1}, {"data", wire::base64_encode(std::vector<std::uint8_t>(12))}};
  EXPECT_THROW(wire::parse_encode_response(j.dump()), Error);
}

TEST(Wire, SegmentResponseRoundTrip) {
  BinaryMask m(3, 2);
  m.set(2, 1, true);
  const auto reply = wire::parse_segment_response(wire::segment_response(m, 0.75));
  EXPECT_EQ(reply.mask, m);
  EXPECT_DOUBLE_EQ(reply.score, 0.75);
  const auto raw = json::parse(wire::segment_response(m, 0.75));
  const auto png = decode_png(wire::base64_decode(raw["mask"].get<std::string>()));
  EXPECT_EQ(png.channels(), 1);
  EXPECT_EQ(png.at(2, 1), 255);
}

TEST(Wire, DecodeErrors) {
  try {
    wire::parse_segment_response("[1,2]");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Decode);
  }
  EXPECT_THROW(wire::parse_segment_response(R"({"score": 1})"), Error);
  EXPECT_THROW(wire::parse_health(R"({"status": 3})"), Error);
  EXPECT_THROW(wire::parse_segment_request(R"({"image": "", "points": [[1]], "labels": [1]})"),
               Error);
}

TEST(Wire, Health) {
  const auto h = wire::parse_health(R"({"status": "ok", "encoder": "e", "segmenter": "s"})");
  EXPECT_EQ(h.status, "ok");
  EXPECT_FALSE(h.max_in_flight);
  const auto full = wire::parse_health(wire::health_response({"ok", "e", "s", 4, 37, 37, 1024}));
  EXPECT_EQ(full.max_in_flight, 4);
  EXPECT_EQ(full.dim, 1024);
}

TEST(Wire, ErrorMessage) {
  EXPECT_EQ(wire::error_message(wire::error_response("bad")), "bad");
  EXPECT_EQ(wire::error_message("plain text"), "plain text");
}
