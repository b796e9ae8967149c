#include "promptsparse/matching.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace promptsparse {

void MatchConfig::validate() const {
  if (max_points < 1) {
    throw Error(ErrorCode::InvalidArgument, "max_points must be >= 1");
  }
  if (!(similarity_threshold >= -1.0 && similarity_threshold <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "similarity_threshold must lie in [-1, 1]");
  }
}

BinaryMask downsample_mask(const BinaryMask& m, int grid_h, int grid_w) {
  if (grid_h < 1 || grid_w < 1) {
    throw Error(ErrorCode::InvalidArgument, "grid extents must be positive");
  }
  if (grid_h > m.height() || grid_w > m.width()) {
    throw Error(ErrorCode::InvalidArgument, "grid is larger than the mask");
  }
  const int H = m.height();
  const int W = m.width();
  BinaryMask out(grid_w, grid_h);
  for (int i = 0; i < grid_h; ++i) {
    const int y0 = static_cast<int>(static_cast<long long>(i) * H / grid_h);
    const int y1 = static_cast<int>(static_cast<long long>(i + 1) * H / grid_h);
    for (int j = 0; j < grid_w; ++j) {
      const int x0 = static_cast<int>(static_cast<long long>(j) * W / grid_w);
      const int x1 = static_cast<int>(static_cast<long long>(j + 1) * W / grid_w);
      std::size_t fg = 0;
      for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) fg += m.at(x, y) ? 1 : 0;
      }
      const std::size_t total = static_cast<std::size_t>(y1 - y0) * (x1 - x0);
      out.set(j, i, 2 * fg >= total);
    }
  }
  return out;
}

namespace {

// Mean descriptor over the selected cells, accumulated in row-major order
// in double precision, then L2-normalised. Empty when no cell is selected.
std::vector<double> prototype(const FeatureMap& fm, const BinaryMask& cells, bool want) {
  std::vector<double> sum(static_cast<std::size_t>(fm.dim()), 0.0);
  std::size_t n = 0;
  for (int y = 0; y < fm.grid_h(); ++y) {
    for (int x = 0; x < fm.grid_w(); ++x) {
      if (cells.at(x, y) != want) continue;
      const auto d = fm.descriptor(x, y);
      for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += d[k];
      ++n;
    }
  }
  if (n == 0) return {};
  double norm = 0.0;
  for (auto& v : sum) {
    v /= static_cast<double>(n);
    norm += v * v;
  }
  norm = std::sqrt(norm);
  if (norm > 0.0) {
    for (auto& v : sum) v /= norm;
  }
  return sum;
}

double cosine(std::span<const float> d, const std::vector<double>& unit_proto) {
  double dot = 0.0;
  double nn = 0.0;
  for (std::size_t k = 0; k < unit_proto.size(); ++k) {
    dot += d[k] * unit_proto[k];
    nn += static_cast<double>(d[k]) * d[k];
  }
  if (nn == 0.0) return 0.0;
  return dot / std::sqrt(nn);
}

}  // namespace

PointSet match_points(const FeatureMap& f_ref, const BinaryMask& m_ref, const FeatureMap& f_tgt,
                      const MatchConfig& cfg) {
  cfg.validate();
  if (f_ref.dim() != f_tgt.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "descriptor dims differ: reference " + std::to_string(f_ref.dim()) +
                    ", target " + std::to_string(f_tgt.dim()));
  }
  const BinaryMask cells = downsample_mask(m_ref, f_ref.grid_h(), f_ref.grid_w());
  const auto fg = prototype(f_ref, cells, true);
  if (fg.empty()) {
    throw Error(ErrorCode::EmptyReferenceForeground, "empty reference foreground");
  }
  // An all-foreground reference has no background prototype; the negative
  // test is skipped in that case.
  const auto bg = cfg.use_background_negatives ? prototype(f_ref, cells, false)
                                               : std::vector<double>{};

  struct Candidate {
    double sim;
    int index;
  };
  std::vector<Candidate> picked;
  const int w = f_tgt.grid_w();
  for (int y = 0; y < f_tgt.grid_h(); ++y) {
    for (int x = 0; x < w; ++x) {
      const auto d = f_tgt.descriptor(x, y);
      const double s_fg = cosine(d, fg);
      if (s_fg < cfg.similarity_threshold) continue;
      if (!bg.empty() && !(s_fg > cosine(d, bg))) continue;
      picked.push_back({s_fg, y * w + x});
    }
  }
  if (picked.empty()) {
    throw Error(ErrorCode::NoCandidatePoints, "no candidate points");
  }
  std::stable_sort(picked.begin(), picked.end(), [](const Candidate& a, const Candidate& b) {
    return a.sim > b.sim;
  });
  if (picked.size() > cfg.max_points) picked.resize(cfg.max_points);

  std::vector<Point> pts;
  pts.reserve(picked.size());
  for (const auto& c : picked) {
    pts.push_back({static_cast<double>(c.index % w), static_cast<double>(c.index / w)});
  }
  return PointSet(std::move(pts), PointSpace::feature_grid(f_tgt.grid_h(), f_tgt.grid_w()));
}

PointSet project_to_image(const PointSet& grid_points, int image_h, int image_w) {
  if (grid_points.space().kind != PointSpace::Kind::FeatureGrid) {
    throw Error(ErrorCode::InvalidArgument, "project_to_image expects feature-grid points");
  }
  const double sx = static_cast<double>(image_w) / grid_points.space().width;
  const double sy = static_cast<double>(image_h) / grid_points.space().height;
  std::vector<Point> out;
  out.reserve(grid_points.size());
  for (const auto& p : grid_points) {
    out.push_back({(p.x + 0.5) * sx, (p.y + 0.5) * sy});
  }
  return PointSet(std::move(out), PointSpace::image_pixels(image_h, image_w));
}

}  // namespace promptsparse
