#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace gpmap {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(const Point2& a, const Point2& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

// Square domain [0, side]^2 discretized as a resolution x resolution node grid.
// Node (ix, iy) sits at (ix * spacing, iy * spacing); values are stored row-major
// with y as the row axis, i.e. flat index = iy * resolution + ix.
struct GridSpec {
  double side = 0.0;
  int resolution = 0;  // nodes per side, >= 2

  bool valid() const { return side > 0.0 && resolution >= 2; }
  double spacing() const { return side / (resolution - 1); }
  std::size_t node_count() const {
    return static_cast<std::size_t>(resolution) * static_cast<std::size_t>(resolution);
  }
  Point2 node(int ix, int iy) const {
    return {static_cast<double>(ix) * spacing(), static_cast<double>(iy) * spacing()};
  }
  std::size_t index(int ix, int iy) const {
    return static_cast<std::size_t>(iy) * static_cast<std::size_t>(resolution) +
           static_cast<std::size_t>(ix);
  }
};

// Default discretization: side + 1 nodes per side (unit cell spacing for integer sides).
GridSpec default_grid(double side);

// All grid nodes in flat row-major order.
std::vector<Point2> grid_nodes(const GridSpec& spec);

// k x k lattice of cell centers of the square [0, side]^2 (row-major, unordered rows).
std::vector<Point2> cell_center_lattice(double side, int k);

// Boustrophedon visit order: rows grouped by ascending y, x ascending on even rows
// and descending on odd rows.
std::vector<Point2> serpentine_order(std::vector<Point2> pts);

// Total Euclidean length of start -> pts[0] -> pts[1] -> ...
double path_length(const Point2& start, const std::vector<Point2>& pts);

}  // namespace gpmap
