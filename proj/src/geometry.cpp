#include "gpmap/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace gpmap {

GridSpec default_grid(double side) {
  return {side, static_cast<int>(std::lround(side)) + 1};
}

std::vector<Point2> grid_nodes(const GridSpec& spec) {
  std::vector<Point2> nodes;
  nodes.reserve(spec.node_count());
  for (int iy = 0; iy < spec.resolution; ++iy)
    for (int ix = 0; ix < spec.resolution; ++ix) nodes.push_back(spec.node(ix, iy));
  return nodes;
}

std::vector<Point2> cell_center_lattice(double side, int k) {
  std::vector<Point2> pts;
  pts.reserve(static_cast<std::size_t>(k) * k);
  const double cell = side / k;
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < k; ++i) pts.push_back({(i + 0.5) * cell, (j + 0.5) * cell});
  return pts;
}

std::vector<Point2> serpentine_order(std::vector<Point2> pts) {
  std::stable_sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) {
    if (a.y != b.y) return a.y < b.y;
    return a.x < b.x;
  });
  // Reverse every other row of equal y so consecutive rows are walked in
  // opposite x directions.
  std::size_t row_start = 0;
  int row = 0;
  for (std::size_t i = 1; i <= pts.size(); ++i) {
    if (i == pts.size() || pts[i].y != pts[row_start].y) {
      if (row % 2 == 1) std::reverse(pts.begin() + row_start, pts.begin() + i);
      row_start = i;
      ++row;
    }
  }
  return pts;
}

double path_length(const Point2& start, const std::vector<Point2>& pts) {
  double total = 0.0;
  Point2 cur = start;
  for (const Point2& p : pts) {
    total += distance(cur, p);
    cur = p;
  }
  return total;
}

}  // namespace gpmap
