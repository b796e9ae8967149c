#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "promptsparse/image_io.hpp"
#include "promptsparse/metrics.hpp"
#include "promptsparse/refine.hpp"

using namespace promptsparse;
namespace t = promptsparse::testing;

namespace {

const StructuringElement kSquare1{StructuringElement::Shape::Square, 1};

BinaryMask block(int w, int h, int x0, int y0, int x1, int y1) {
  BinaryMask m(w, h);
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) m.set(x, y, true);
  }
  return m;
}

}  // namespace

TEST(StructuringElement, Shapes) {
  const StructuringElement disk{StructuringElement::Shape::Disk, 2};
  EXPECT_EQ(disk.half_width(0), 2);
  EXPECT_EQ(disk.half_width(1), 1);
  EXPECT_EQ(disk.half_width(-2), 0);
  EXPECT_EQ(kSquare1.half_width(1), 1);
  EXPECT_THROW((StructuringElement{StructuringElement::Shape::Square, 0}).validate(), Error);
  EXPECT_EQ(StructuringElement{}.radius, 2);
  EXPECT_EQ(StructuringElement{}.shape, StructuringElement::Shape::Square);
}

TEST(Erode, EmptyStaysEmpty) {
  EXPECT_EQ(erode(BinaryMask(10, 10), kSquare1), BinaryMask(10, 10));
}

TEST(Erode, BorderDoesNotConstrain) {
  EXPECT_EQ(erode(BinaryMask(10, 10, true), kSquare1), BinaryMask(10, 10, true));
}

TEST(Erode, SinglePixelVanishes) {
  BinaryMask m(10, 10);
  m.set(5, 5, true);
  EXPECT_EQ(erode(m, kSquare1).count(), 0u);
}

TEST(Erode, BlockShrinksByRadius) {
  EXPECT_EQ(erode(block(12, 12, 2, 2, 9, 9), kSquare1), block(12, 12, 3, 3, 8, 8));
}

TEST(Dilate, SinglePixelGrowsToBlock) {
  BinaryMask m(10, 10);
  m.set(5, 5, true);
  EXPECT_EQ(dilate(m, kSquare1), block(10, 10, 4, 4, 6, 6));
  EXPECT_EQ(dilate(BinaryMask(10, 10), kSquare1), BinaryMask(10, 10));
}

TEST(Dilate, NeighbouringPixelsMerge) {
  BinaryMask m(10, 10);
  m.set(3, 5, true);
  m.set(5, 5, true);
  EXPECT_EQ(dilate(m, kSquare1), block(10, 10, 2, 4, 6, 6));
}

TEST(Dilate, DiskElement) {
  BinaryMask m(7, 7);
  m.set(3, 3, true);
  const auto d = dilate(m, {StructuringElement::Shape::Disk, 2});
  EXPECT_EQ(d.count(), 13u);
  EXPECT_TRUE(d.at(3, 1));
  EXPECT_FALSE(d.at(1, 1));
}

TEST(Morphology, MatchesNaiveDefinition) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 120; ++trial) {
    const int w = 1 + static_cast<int>(rng() % 24);
    const int h = 1 + static_cast<int>(rng() % 24);
    const auto m = t::random_blob_mask(rng, w, h);
    const StructuringElement k{trial % 2 ? StructuringElement::Shape::Disk
                                         : StructuringElement::Shape::Square,
                               1 + trial % 3};
    ASSERT_EQ(erode(m, k), t::naive_erode(m, k)) << trial;
    ASSERT_EQ(dilate(m, k), t::naive_dilate(m, k)) << trial;
  }
}

TEST(Morphology, Laws) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const auto m = t::random_blob_mask(rng, 8 + trial % 40, 8 + (trial * 7) % 40);
    const StructuringElement k{trial % 2 ? StructuringElement::Shape::Disk
                                         : StructuringElement::Shape::Square,
                               1 + trial % 3};
    const auto o = open(m, k);
    const auto c = close(m, k);
    ASSERT_TRUE(t::subset(o, m));
    ASSERT_TRUE(t::subset(m, c));
    ASSERT_EQ(open(o, k), o);
    ASSERT_EQ(close(c, k), c);
    const auto r = refine_mask(m, k);
    ASSERT_EQ(refine_mask(r, k), r);
    ASSERT_EQ(erode(m, k), dilate(m.complement(), k).complement());
  }
}

TEST(Morphology, Increasing) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    const auto small = t::random_blob_mask(rng, 24, 24);
    const auto extra = t::random_noise_mask(rng, 24, 24, 0.2);
    BinaryMask merged(24, 24);
    for (int y = 0; y < 24; ++y) {
      for (int x = 0; x < 24; ++x) merged.set(x, y, small.at(x, y) || extra.at(x, y));
    }
    const auto& big = merged;
    const StructuringElement k{};
    ASSERT_TRUE(t::subset(erode(small, k), erode(big, k)));
    ASSERT_TRUE(t::subset(dilate(small, k), dilate(big, k)));
    ASSERT_TRUE(t::subset(open(small, k), open(big, k)));
    ASSERT_TRUE(t::subset(close(small, k), close(big, k)));
  }
}

TEST(RefineMask, DiskWithHoleAndSpeck) {
  BinaryMask disk(40, 40);
  for (int y = 0; y < 40; ++y) {
    for (int x = 0; x < 40; ++x) {
      const double dx = x - 19.5;
      const double dy = y - 19.5;
      disk.set(x, y, dx * dx + dy * dy <= 12.0 * 12.0);
    }
  }
  auto noisy = disk;
  noisy.set(20, 20, false);
  noisy.set(36, 3, true);
  const auto out = refine_mask(noisy, kSquare1);
  EXPECT_TRUE(out.at(20, 20));
  EXPECT_FALSE(out.at(36, 3));
  EXPECT_EQ(out, refine_mask(disk, kSquare1));
  EXPECT_GT(iou(out, disk), 0.97);
}

TEST(RefineMask, EmptyStaysEmpty) {
  EXPECT_EQ(refine_mask(BinaryMask(9, 9), StructuringElement{}), BinaryMask(9, 9));
}

TEST(RefineMask, SquareWithDistantSpeck) {
  const auto square = block(20, 20, 5, 5, 14, 14);
  auto m = square;
  m.set(19, 9, true);
  EXPECT_EQ(refine_mask(m, kSquare1), square);
  EXPECT_EQ(refine_mask(m, StructuringElement{}), square);
}

TEST(RefineMask, GoldenFixture) {
  const std::filesystem::path dir = PROMPTSPARSE_TEST_DATA;
  const auto in = read_mask(dir / "refine_speck_hole.png");
  const auto expected = read_mask(dir / "refine_speck_hole_expected.png");
  EXPECT_EQ(refine_mask(in, StructuringElement{}), expected);
}
