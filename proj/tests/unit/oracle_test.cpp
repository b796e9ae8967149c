#include <gtest/gtest.h>

#include <thread>
#include <vector>

#include "oracles.hpp"
#include "promptsparse/metrics.hpp"
#include "promptsparse/oracle.hpp"
#include "promptsparse/refine.hpp"

using namespace promptsparse;
using promptsparse::testing::flat_image;

namespace {

PointSet prompts(std::vector<Point> pts, int size = 20) {
  return PointSet(std::move(pts), PointSpace::image_pixels(size, size));
}

PointSet first_n(const BinaryMask& gt, std::size_t n) {
  std::vector<Point> pts;
  for (int y = 0; y < gt.height() && pts.size() < n; ++y) {
    for (int x = 0; x < gt.width() && pts.size() < n; ++x) {
      if (gt.at(x, y)) pts.push_back({static_cast<double>(x), static_cast<double>(y)});
    }
  }
  return PointSet(std::move(pts), PointSpace::image_pixels(gt.height(), gt.width()));
}

BinaryMask centre_square() {
  BinaryMask m(20, 20);
  for (int y = 5; y < 15; ++y) {
    for (int x = 5; x < 15; ++x) m.set(x, y, true);
  }
  return m;
}

}  // namespace

TEST(OracleSegment, PerfectReturnsGroundTruthOnHit) {
  const auto gt = centre_square();
  EXPECT_EQ(oracle_segment({}, gt, prompts({{0, 0}, {7, 7}})), gt);
  EXPECT_EQ(oracle_segment({}, gt, prompts({{0, 0}, {19, 19}})), BinaryMask(20, 20));
}

TEST(OracleSegment, PeakedMaximalAtPeakCount) {
  const BinaryMask gt(20, 20, true);
  OracleSpec spec;
  spec.mode = OracleSpec::Mode::DensityPeaked;
  spec.peak_density = 2;
  ASSERT_EQ(oracle_peak_count(spec, gt), 9u);
  const double at4 = iou(oracle_segment(spec, gt, first_n(gt, 4)), gt);
  const double at9 = iou(oracle_segment(spec, gt, first_n(gt, 9)), gt);
  const double at25 = iou(oracle_segment(spec, gt, first_n(gt, 25)), gt);
  EXPECT_EQ(at9, 1.0);
  EXPECT_LT(at4, at9);
  EXPECT_LT(at25, at9);
  // q = 1 / (1 + 0.1 * 5) over 400 pixels
  EXPECT_DOUBLE_EQ(at4, 266.0 / 400.0);
}

TEST(OracleSegment, ErosionRadiusFromPromptCount) {
  const auto gt = centre_square();
  OracleSpec spec;
  spec.mode = OracleSpec::Mode::ErosionProportional;
  spec.rate = 0.25;
  EXPECT_EQ(oracle_segment(spec, gt, first_n(gt, 3)), gt);
  const StructuringElement r1{StructuringElement::Shape::Square, 1};
  EXPECT_EQ(oracle_segment(spec, gt, first_n(gt, 4)), erode(gt, r1));
  EXPECT_EQ(oracle_segment(spec, gt, first_n(gt, 8)).count(), 36u);
}

TEST(OracleSpec, Validation) {
  OracleSpec s;
  s.peak_density = 0;
  EXPECT_THROW(s.validate(), Error);
  s = {};
  s.falloff = 0.0;
  EXPECT_THROW(s.validate(), Error);
  s = {};
  s.rate = -1.0;
  EXPECT_THROW(s.validate(), Error);
  EXPECT_STREQ(to_string(OracleSpec::Mode::ErosionProportional), "erosion_proportional");
}

TEST(OracleSegmenter, UnregisteredImageIsBackendError) {
  OracleSegmenter seg({});
  try {
    seg.segment(flat_image(20, 20, 0), prompts({{1, 1}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Backend);
  }
}

TEST(OracleSegmenter, RegistrationAndLookup) {
  OracleSegmenter seg({});
  const auto gt = centre_square();
  const auto a = flat_image(20, 20, 10);
  const auto b = flat_image(20, 20, 11);
  seg.add_truth(a, gt);
  seg.add_truth(a, gt);
  EXPECT_THROW(seg.add_truth(a, BinaryMask(20, 20)), Error);
  EXPECT_THROW(seg.add_truth(b, BinaryMask(19, 20)), Error);
  seg.add_truth(b, BinaryMask(20, 20));
  EXPECT_EQ(seg.segment(a, prompts({{10, 10}})), gt);
  EXPECT_EQ(seg.segment(b, prompts({{10, 10}})).count(), 0u);
}

TEST(OracleSegmenter, RejectsEmptyOrForeignPrompts) {
  OracleSegmenter seg({});
  const auto img = flat_image(20, 20, 0);
  seg.add_truth(img, centre_square());
  EXPECT_THROW(seg.segment(img, prompts({})), Error);
  EXPECT_THROW(seg.segment(img, prompts({{1, 1}}, 21)), Error);
}

TEST(OracleSegmenter, ConcurrentSegmentsAgree) {
  OracleSegmenter seg({});
  const auto img = flat_image(20, 20, 0);
  const auto gt = centre_square();
  seg.add_truth(img, gt);
  std::vector<std::jthread> threads;
  std::vector<int> ok(8, 0);
  for (int i = 0; i < 8; ++i) {
    threads.emplace_back([&, i] {
      for (int k = 0; k < 50; ++k) {
        if (seg.segment(img, prompts({{7, 7}})) == gt) ++ok[i];
      }
    });
  }
  threads.clear();
  for (int v : ok) EXPECT_EQ(v, 50);
}

TEST(PatchStatsEncoder, ShapeRangeAndDeterminism) {
  const PatchStatsEncoder enc(4, 5);
  const auto caps = enc.encoder_capabilities();
  EXPECT_EQ(caps.grid_h, 4);
  EXPECT_EQ(caps.grid_w, 5);
  EXPECT_EQ(caps.dim, 3);
  const auto img = promptsparse::testing::painted_image(centre_square());
  const auto fm = enc.encode(img);
  EXPECT_EQ(fm.grid_h(), 4);
  EXPECT_EQ(fm.grid_w(), 5);
  for (float v : fm.data()) {
    EXPECT_GE(v, -1.0f);
    EXPECT_LE(v, 1.0f);
  }
  EXPECT_EQ(enc.encode(img), fm);
  EXPECT_EQ(flat_image(20, 20, 255).data()[0], 255);
  EXPECT_EQ(enc.encode(flat_image(20, 20, 255)).data()[0], 1.0f);
  EXPECT_THROW(enc.encode(flat_image(3, 3, 0)), Error);
}
