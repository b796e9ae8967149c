#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "promptsparse/types.hpp"

namespace promptsparse {

// Strict convex hull: vertices are listed counter-clockwise starting at the
// lowest-x (then lowest-y) point, and no vertex lies on the segment between
// its neighbours. One or two input points are returned as-is; a collinear
// input reduces to its two extreme points.
struct Hull {
  std::vector<Point> vertices;
  std::size_t source_count = 0;
};

Hull convex_hull(const PointSet& ps);

// Removes the hull vertices from `ps`, keeping the order of the rest. If
// fewer than `min_keep` points would survive, returns `ps` unchanged.
PointSet prune_boundary(const PointSet& ps, std::size_t min_keep = 1);

Point global_centroid(const PointSet& ps);

// D x D partition of an H x W image into half-open cells of height H/D and
// width W/D. Row index i follows y, column index j follows x.
class GridSpec {
 public:
  GridSpec(int density, int image_h, int image_w);

  int density() const { return density_; }
  double cell_h() const { return cell_h_; }
  double cell_w() const { return cell_w_; }

  // Cell containing p under [i*cell_h, (i+1)*cell_h) membership. Points on
  // (or past) the far image edge fall into the last row/column.
  int row_of(double y) const { return index_of(y, cell_h_); }
  int col_of(double x) const { return index_of(x, cell_w_); }

 private:
  int index_of(double v, double step) const;

  int density_;
  double cell_h_;
  double cell_w_;
};

// Keeps, per non-empty grid cell, the point nearest the centroid of the
// whole set (ties: earliest in input order). Output is ordered by cell,
// row-major. Requires image-pixel points.
PointSet sparsify(const PointSet& ps, int density);

// Text point lists: one "x y" pair per line; blank lines and lines starting
// with '#' are ignored.
std::vector<Point> parse_points(const std::string& text);
std::string format_points(const std::vector<Point>& points);
std::vector<Point> read_points(const std::filesystem::path& path);
void write_points(const std::filesystem::path& path, const std::vector<Point>& points);

}  // namespace promptsparse
