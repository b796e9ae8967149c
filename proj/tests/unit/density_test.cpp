#include <gtest/gtest.h>

#include <atomic>
#include <functional>
#include <map>

#include "oracles.hpp"
#include "promptsparse/density.hpp"
#include "promptsparse/metrics.hpp"
#include "promptsparse/oracle.hpp"

using namespace promptsparse;
using promptsparse::testing::flat_image;

namespace {

class ScriptedSegmenter final : public SegmenterBackend {
 public:
  using Fn = std::function<BinaryMask(const Image&, const PointSet&)>;
  explicit ScriptedSegmenter(Fn fn) : fn_(std::move(fn)) {}

  SegmenterCapabilities segmenter_capabilities() const override { return {}; }
  BinaryMask segment(const Image& image, const PointSet& prompts) const override {
    check_segment_request(image, prompts);
    ++calls;
    return fn_(image, prompts);
  }

  mutable std::atomic<int> calls{0};

 private:
  Fn fn_;
};

// First `k` pixels of a W x H raster in row-major order.
BinaryMask prefix_mask(int w, int h, int k) {
  BinaryMask m(w, h);
  for (int i = 0; i < k; ++i) m.set(i % w, i / w, true);
  return m;
}

BinaryMask square(int size, int lo, int hi) {
  BinaryMask m(size, size);
  for (int y = lo; y <= hi; ++y) {
    for (int x = lo; x <= hi; ++x) m.set(x, y, true);
  }
  return m;
}

}  // namespace

TEST(DensityCandidates, Validation) {
  EXPECT_NO_THROW(DensityCandidates({1, 3, 9}));
  EXPECT_THROW(DensityCandidates(std::vector<int>{}), Error);
  EXPECT_THROW(DensityCandidates({0, 2}), Error);
  EXPECT_THROW(DensityCandidates({4, 4}), Error);
  EXPECT_THROW(DensityCandidates({8, 4}), Error);
  EXPECT_EQ(DensityCandidates().values(), (std::vector<int>{2, 4, 6, 8, 12, 16}));
}

TEST(SampleReferenceGrid, CornersClamped) {
  const auto ps = sample_reference_grid(10, 10, 1);
  const std::vector<Point> expected{{0, 0}, {9, 0}, {0, 9}, {9, 9}};
  EXPECT_EQ(ps.points(), expected);
}

TEST(SampleReferenceGrid, DensityTwo) {
  const auto ps = sample_reference_grid(10, 10, 2);
  ASSERT_EQ(ps.size(), 9u);
  for (const auto& p : ps) {
    EXPECT_TRUE(p.x == 0 || p.x == 5 || p.x == 9);
    EXPECT_TRUE(p.y == 0 || p.y == 5 || p.y == 9);
  }
}

TEST(SampleReferenceGrid, CountBoundAndDedup) {
  for (int d = 1; d <= 20; ++d) {
    EXPECT_LE(sample_reference_grid(7, 13, d).size(), static_cast<std::size_t>((d + 1) * (d + 1)));
  }
  // Steps of half a pixel; the last lattice line clamps onto the one before.
  EXPECT_EQ(sample_reference_grid(2, 2, 4).size(), 9u);
  EXPECT_EQ(sample_reference_grid(2, 2, 2).size(), 4u);
}

TEST(FilterForeground, Examples) {
  const auto grid = sample_reference_grid(10, 10, 2);
  EXPECT_EQ(filter_foreground(grid, BinaryMask(10, 10, true)), grid);
  EXPECT_TRUE(filter_foreground(grid, BinaryMask(10, 10)).empty());

  BinaryMask left(10, 10);
  for (int y = 0; y < 10; ++y) {
    for (int x = 0; x < 5; ++x) left.set(x, y, true);
  }
  const auto kept = filter_foreground(grid, left);
  ASSERT_EQ(kept.size(), 3u);
  for (const auto& p : kept) EXPECT_EQ(p.x, 0.0);
}

TEST(ScoreDensity, PerfectOracleScoresOne) {
  const auto gt = square(20, 5, 14);
  const auto img = flat_image(20, 20, 1);
  OracleSegmenter seg({});
  seg.add_truth(img, gt);
  for (int d : {2, 4, 8}) EXPECT_EQ(score_density(img, gt, d, seg), 1.0) << d;
}

TEST(ScoreDensity, NoForegroundHitSkipsBackend) {
  BinaryMask thin(20, 20);
  for (int y = 0; y < 20; ++y) thin.set(10, y, true);
  ScriptedSegmenter seg([](const Image&, const PointSet&) -> BinaryMask {
    throw Error(ErrorCode::Backend, "must not be called");
  });
  EXPECT_EQ(score_density(flat_image(20, 20, 0), thin, 1, seg), 0.0);
  EXPECT_EQ(seg.calls, 0);
}

TEST(ScoreDensity, ErosionOracleHandWorked) {
  // 10x10 square at 5..14 in 20x20. D=2 hits only (10,10); D=4 hits the
  // four points with x, y in {5, 10}. rate 0.5 gives radius 0 and 2, so the
  // second prediction is the 6x6 core: IoU 36/100.
  const auto gt = square(20, 5, 14);
  const auto img = flat_image(20, 20, 2);
  OracleSpec spec;
  spec.mode = OracleSpec::Mode::ErosionProportional;
  spec.rate = 0.5;
  OracleSegmenter seg(spec);
  seg.add_truth(img, gt);
  EXPECT_EQ(filter_foreground(sample_reference_grid(20, 20, 2), gt).size(), 1u);
  EXPECT_EQ(filter_foreground(sample_reference_grid(20, 20, 4), gt).size(), 4u);
  EXPECT_EQ(score_density(img, gt, 2, seg), 1.0);
  EXPECT_DOUBLE_EQ(score_density(img, gt, 4, seg), 0.36);
}

TEST(ScoreDensity, BackendErrorNamesDensity) {
  ScriptedSegmenter seg([](const Image&, const PointSet&) -> BinaryMask {
    throw Error(ErrorCode::Transport, "down");
  });
  try {
    score_density(flat_image(4, 4, 0), BinaryMask(4, 4, true), 3, seg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Transport);
    EXPECT_NE(std::string(e.what()).find("density 3"), std::string::npos);
  }
}

TEST(LookupReferenceDensity, PerfectOraclePicksSmallest) {
  const auto gt = square(20, 5, 14);
  const auto img = flat_image(20, 20, 3);
  OracleSegmenter seg({});
  seg.add_truth(img, gt);
  const std::vector<Reference> refs{{img, gt}};
  const auto v = lookup_reference_density(refs, {2, 4, 8}, seg);
  EXPECT_EQ(v.selected, 2);
  EXPECT_EQ(v.scores, (std::vector<double>{1.0, 1.0, 1.0}));
}

namespace {

// Returns a prediction whose IoU against a full 10x10 mask is `table` at
// the density that produced the prompt count: 25 prompts for D=4, 81 for D=8.
ScriptedSegmenter::Fn by_count(std::map<std::pair<int, std::size_t>, int> table) {
  return [table](const Image& img, const PointSet& ps) {
    return prefix_mask(10, 10, table.at({img.at(0, 0), ps.size()}));
  };
}

}  // namespace

TEST(LookupReferenceDensity, StrictArgmax) {
  const auto full = BinaryMask(10, 10, true);
  const auto img = flat_image(10, 10, 0);
  ASSERT_EQ(sample_reference_grid(10, 10, 4).size(), 25u);
  ASSERT_EQ(sample_reference_grid(10, 10, 8).size(), 81u);
  ScriptedSegmenter seg(by_count({{{0, 25}, 70}, {{0, 81}, 90}}));
  const std::vector<Reference> refs{{img, full}};
  const auto v = lookup_reference_density(refs, {4, 8}, seg);
  EXPECT_DOUBLE_EQ(v.score_of(4), 0.7);
  EXPECT_DOUBLE_EQ(v.score_of(8), 0.9);
  EXPECT_EQ(v.selected, 8);
}

TEST(LookupReferenceDensity, MeanOverReferences) {
  const auto full = BinaryMask(10, 10, true);
  ScriptedSegmenter seg(
      by_count({{{0, 25}, 60}, {{0, 81}, 80}, {{1, 25}, 100}, {{1, 81}, 40}}));
  const std::vector<Reference> refs{{flat_image(10, 10, 0), full}, {flat_image(10, 10, 1), full}};
  const auto v = lookup_reference_density(refs, {4, 8}, seg);
  ASSERT_EQ(v.per_reference.size(), 2u);
  EXPECT_DOUBLE_EQ(v.per_reference[1][0], 1.0);
  EXPECT_DOUBLE_EQ(v.scores[0], 0.8);
  EXPECT_DOUBLE_EQ(v.scores[1], 0.6);
  EXPECT_EQ(v.selected, 4);
}

TEST(LookupReferenceDensity, AllZeroFallsBackToSmallest) {
  ScriptedSegmenter seg([](const Image& img, const PointSet&) {
    return BinaryMask(img.width(), img.height());
  });
  const std::vector<Reference> refs{{flat_image(10, 10, 0), BinaryMask(10, 10, true)}};
  EXPECT_EQ(lookup_reference_density(refs, {3, 5, 7}, seg).selected, 3);
}

TEST(LookupReferenceDensity, ArgmaxInvariantUnderMonotoneRescale) {
  // Same ranking with squared scores: 0.49 vs 0.81.
  const auto full = BinaryMask(10, 10, true);
  ScriptedSegmenter seg(by_count({{{0, 25}, 49}, {{0, 81}, 81}}));
  const std::vector<Reference> refs{{flat_image(10, 10, 0), full}};
  EXPECT_EQ(lookup_reference_density(refs, {4, 8}, seg).selected, 8);
}

TEST(LookupReferenceDensity, NeedsReferences) {
  OracleSegmenter seg({});
  EXPECT_THROW(lookup_reference_density({}, {2}, seg), Error);
}

TEST(LookupReferenceDensity, PeakedOracleRecoversConfiguredDensity) {
  std::mt19937_64 rng(21);
  for (int peak : {2, 4, 8}) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto gt = promptsparse::testing::random_central_mask(rng, 96, 96);
      const auto img = promptsparse::testing::painted_image(gt, trial);
      OracleSpec spec;
      spec.mode = OracleSpec::Mode::DensityPeaked;
      spec.peak_density = peak;
      OracleSegmenter seg(spec);
      seg.add_truth(img, gt);
      const std::vector<Reference> refs{{img, gt}};
      EXPECT_EQ(lookup_reference_density(refs, DensityCandidates(), seg).selected, peak);
    }
  }
}
