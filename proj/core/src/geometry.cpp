#include "promptsparse/geometry.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <utility>

#include "promptsparse/image_io.hpp"

namespace promptsparse {

namespace {

double cross(const Point& o, const Point& a, const Point& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

void require_nonempty(const PointSet& ps, const char* op) {
  if (ps.empty()) {
    throw Error(ErrorCode::InvalidArgument, std::string(op) + ": empty point set");
  }
}

}  // namespace

Hull convex_hull(const PointSet& ps) {
  require_nonempty(ps, "convex_hull");
  std::vector<Point> pts = ps.points();
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  Hull hull;
  hull.source_count = pts.size();
  if (pts.size() <= 2) {
    hull.vertices = std::move(pts);
    return hull;
  }

  // Andrew's monotone chain; popping on cross <= 0 drops collinear points.
  std::vector<Point> chain(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(chain[k - 2], chain[k - 1], p) <= 0) --k;
    chain[k++] = p;
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = pts.size() - 1; i-- > 0;) {
    while (k >= lower && cross(chain[k - 2], chain[k - 1], pts[i]) <= 0) --k;
    chain[k++] = pts[i];
  }
  chain.resize(k - 1);
  hull.vertices = std::move(chain);
  return hull;
}

PointSet prune_boundary(const PointSet& ps, std::size_t min_keep) {
  require_nonempty(ps, "prune_boundary");
  const Hull hull = convex_hull(ps);
  std::set<std::pair<double, double>> vertices;
  for (const auto& v : hull.vertices) vertices.emplace(v.x, v.y);

  std::vector<Point> kept;
  kept.reserve(ps.size());
  for (const auto& p : ps) {
    if (!vertices.contains({p.x, p.y})) kept.push_back(p);
  }
  if (kept.size() < min_keep) return ps;
  return PointSet(std::move(kept), ps.space());
}

Point global_centroid(const PointSet& ps) {
  require_nonempty(ps, "global_centroid");
  double sx = 0.0;
  double sy = 0.0;
  for (const auto& p : ps) {
    sx += p.x;
    sy += p.y;
  }
  const auto n = static_cast<double>(ps.size());
  return {sx / n, sy / n};
}

GridSpec::GridSpec(int density, int image_h, int image_w) : density_(density) {
  if (density < 1) {
    throw Error(ErrorCode::InvalidArgument, "density must be >= 1");
  }
  if (image_h < 1 || image_w < 1) {
    throw Error(ErrorCode::InvalidArgument, "image extents must be positive");
  }
  cell_h_ = static_cast<double>(image_h) / density;
  cell_w_ = static_cast<double>(image_w) / density;
}

int GridSpec::index_of(double v, double step) const {
  // floor(v / step) can land one cell off at exact boundaries; settle it
  // against the interval bounds i * step themselves.
  double guess = std::floor(v / step);
  int i = static_cast<int>(std::clamp(guess, 0.0, static_cast<double>(density_ - 1)));
  while (i > 0 && v < i * step) --i;
  while (i < density_ - 1 && v >= (i + 1) * step) ++i;
  return i;
}

PointSet sparsify(const PointSet& ps, int density) {
  require_nonempty(ps, "sparsify");
  if (ps.space().kind != PointSpace::Kind::ImagePixels) {
    throw Error(ErrorCode::InvalidArgument, "sparsify expects image-pixel points");
  }
  const GridSpec grid(density, ps.space().height, ps.space().width);
  const Point c = global_centroid(ps);

  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  const auto cells = static_cast<std::size_t>(density) * density;
  std::vector<std::size_t> best(cells, kNone);
  std::vector<double> best_d2(cells, 0.0);
  for (std::size_t idx = 0; idx < ps.size(); ++idx) {
    const auto& p = ps[idx];
    const auto cell = static_cast<std::size_t>(grid.row_of(p.y)) * density +
                      static_cast<std::size_t>(grid.col_of(p.x));
    const double dx = p.x - c.x;
    const double dy = p.y - c.y;
    const double d2 = dx * dx + dy * dy;
    if (best[cell] == kNone || d2 < best_d2[cell]) {
      best[cell] = idx;
      best_d2[cell] = d2;
    }
  }

  std::vector<Point> out;
  for (const auto idx : best) {
    if (idx != kNone) out.push_back(ps[idx]);
  }
  return PointSet(std::move(out), ps.space());
}

std::vector<Point> parse_points(const std::string& text) {
  std::vector<Point> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    Point p;
    std::string rest;
    if (!(ls >> p.x >> p.y) || (ls >> rest)) {
      throw Error(ErrorCode::Decode, "point list line " + std::to_string(lineno) +
                                         ": expected \"x y\"");
    }
    out.push_back(p);
  }
  return out;
}

std::string format_points(const std::vector<Point>& points) {
  // Shortest fixed-notation text that round-trips exactly.
  std::string out;
  char buf[512];
  for (const auto& p : points) {
    auto r = std::to_chars(buf, buf + sizeof(buf), p.x, std::chars_format::fixed);
    out.append(buf, r.ptr);
    out.push_back(' ');
    r = std::to_chars(buf, buf + sizeof(buf), p.y, std::chars_format::fixed);
    out.append(buf, r.ptr);
    out.push_back('\n');
  }
  return out;
}

std::vector<Point> read_points(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  return parse_points(std::string(bytes.begin(), bytes.end()));
}

void write_points(const std::filesystem::path& path, const std::vector<Point>& points) {
  write_file_atomic(path, format_points(points));
}

}  // namespace promptsparse
