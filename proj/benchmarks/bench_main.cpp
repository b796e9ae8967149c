#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "promptsparse/geometry.hpp"
#include "promptsparse/matching.hpp"
#include "promptsparse/refine.hpp"

using namespace promptsparse;

namespace {

PointSet random_points(std::size_t n, int h, int w, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(0.0, w);
  std::uniform_real_distribution<double> uy(0.0, h);
  std::vector<Point> pts(n);
  for (auto& p : pts) p = {ux(rng), uy(rng)};
  return PointSet::deduplicated(std::move(pts), PointSpace::image_pixels(h, w));
}

BinaryMask disk_mask(int size) {
  BinaryMask m(size, size);
  const double c = size / 2.0;
  const double r = size / 3.0;
  std::mt19937_64 rng(3);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const double dx = x + 0.5 - c;
      const double dy = y + 0.5 - c;
      m.set(x, y, (dx * dx + dy * dy <= r * r) != (rng() % 50 == 0));
    }
  }
  return m;
}

FeatureMap random_features(int g, int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> n(0.0f, 1.0f);
  std::vector<float> data(static_cast<std::size_t>(g) * g * d);
  for (auto& v : data) v = n(rng);
  return FeatureMap(g, g, d, std::move(data));
}

}  // namespace

static void BM_ConvexHull(benchmark::State& state) {
  const auto ps = random_points(static_cast<std::size_t>(state.range(0)), 518, 518, 1);
  for (auto _ : state) benchmark::DoNotOptimize(convex_hull(ps));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ConvexHull)->RangeMultiplier(4)->Range(16, 4096)->Complexity(benchmark::oNLogN);

static void BM_Sparsify(benchmark::State& state) {
  const auto ps = random_points(static_cast<std::size_t>(state.range(0)), 518, 518, 2);
  const int density = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(sparsify(ps, density));
}
BENCHMARK(BM_Sparsify)->ArgsProduct({{64, 400, 1369}, {4, 16}});

static void BM_RefineMask(benchmark::State& state) {
  const auto m = disk_mask(static_cast<int>(state.range(0)));
  StructuringElement k;
  k.radius = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(refine_mask(m, k));
}
BENCHMARK(BM_RefineMask)->ArgsProduct({{256, 1024}, {2, 5}})->Unit(benchmark::kMillisecond);

static void BM_MatchPoints(benchmark::State& state) {
  const int g = static_cast<int>(state.range(0));
  const auto f_ref = random_features(g, 1024, 4);
  const auto f_tgt = random_features(g, 1024, 5);
  const auto m_ref = disk_mask(g * 14);
  MatchConfig cfg;
  cfg.similarity_threshold = 0.0;
  for (auto _ : state) benchmark::DoNotOptimize(match_points(f_ref, m_ref, f_tgt, cfg));
}
BENCHMARK(BM_MatchPoints)->Arg(16)->Arg(37)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
