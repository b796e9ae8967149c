#include <gtest/gtest.h>

#include <filesystem>

#include "promptsparse/image_io.hpp"

using namespace promptsparse;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "promptsparse_image_io";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Png, RgbRoundTrip) {
  Image img(5, 3, 3);
  for (std::size_t i = 0; i < img.data().size(); ++i) img.data()[i] = static_cast<std::uint8_t>(i * 7);
  EXPECT_EQ(decode_png(encode_png(img)), img);
}

TEST(Png, GrayRoundTrip) {
  Image img(4, 4, 1);
  img.at(1, 2) = 200;
  EXPECT_EQ(decode_png(encode_png(img)), img);
}

TEST(Png, GarbageIsDecodeError) {
  const std::vector<std::uint8_t> junk{1, 2, 3, 4, 5};
  try {
    decode_png(junk);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Decode);
  }
}

TEST(MaskPng, AnyNonzeroIsForeground) {
  Image img(3, 1, 1, {0, 1, 255});
  const auto m = decode_mask_png(encode_png(img));
  EXPECT_FALSE(m.at(0, 0));
  EXPECT_TRUE(m.at(1, 0));
  EXPECT_TRUE(m.at(2, 0));
}

TEST(MaskPng, RgbMaskAnyChannel) {
  Image img(2, 1, 3, {0, 0, 0, 0, 0, 9});
  const auto m = decode_mask_png(encode_png(img));
  EXPECT_FALSE(m.at(0, 0));
  EXPECT_TRUE(m.at(1, 0));
}

TEST(MaskPng, WritesZeroOrTwoFiftyFive) {
  BinaryMask m(2, 2);
  m.set(1, 0, true);
  const auto img = decode_png(encode_mask_png(m));
  EXPECT_EQ(img.channels(), 1);
  EXPECT_EQ(img.at(0, 0), 0);
  EXPECT_EQ(img.at(1, 0), 255);
}

TEST(Files, MaskFileRoundTrip) {
  BinaryMask m(6, 4);
  m.set(5, 3, true);
  const auto path = scratch("mask.png");
  write_mask(path, m);
  EXPECT_EQ(read_mask(path), m);
}

TEST(Files, MissingFileIsIoError) {
  try {
    read_image(scratch("does_not_exist.png"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Io);
  }
}

TEST(Files, AtomicWriteLeavesNoTemporaries) {
  const auto dir = fs::temp_directory_path() / "promptsparse_atomic";
  fs::remove_all(dir);
  fs::create_directories(dir);
  write_file_atomic(dir / "a.txt", std::string("hello"));
  write_file_atomic(dir / "a.txt", std::string("world"));
  std::size_t n = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++n;
  EXPECT_EQ(n, 1u);
  const auto bytes = read_file(dir / "a.txt");
  EXPECT_EQ(std::string(bytes.begin(), bytes.end()), "world");
}
