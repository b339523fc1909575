#pragma once

#include <limits>
#include <span>
#include <vector>

#include "areagraph/geometry.hpp"
#include "areagraph/mapio.hpp"

namespace areagraph {

inline constexpr double kNoPath = std::numeric_limits<double>::infinity();

struct Cell {
  int c = 0;
  int r = 0;
  friend bool operator==(Cell a, Cell b) = default;
};

/// Cell holding a pixel-frame point.
Cell cell_of(Point2 px);

struct GridPath {
  std::vector<Cell> cells;
  /// Meters; kNoPath when no path exists.
  double length_m = kNoPath;

  bool found() const { return length_m != kNoPath; }
};

/// Restricts a search to a window and, optionally, to cells carrying one
/// label. `extra` cells are allowed whatever their label.
struct SearchRegion {
  int c0 = 0;
  int r0 = 0;
  int c1 = -1;  // inclusive; c1 < c0 means the whole map
  int r1 = -1;
  const std::vector<int>* labels = nullptr;
  int label = -1;
  std::vector<Cell> extra;
};

/// Octile distance in cells.
double octile_distance(Cell a, Cell b);

/// Optimal 8-connected path between Free cells (axis step = resolution,
/// diagonal = resolution * sqrt 2, no corner cutting).
GridPath grid_astar(const GridMap& map, Cell start, Cell goal,
                    const SearchRegion* region = nullptr);

/// Optimal paths from `start` to each target in one uniform-cost sweep.
std::vector<GridPath> grid_paths_to(const GridMap& map, Cell start, std::span<const Cell> targets,
                                    const SearchRegion* region = nullptr);

/// Shortest path length in meters by plain Dijkstra over the whole map, or
/// kNoPath.
double bfs_oracle(const GridMap& map, Cell start, Cell goal);

/// True when every cell touched by segment a-b (pixel frame) is Free.
bool line_of_sight(const GridMap& map, Point2 a, Point2 b);

}  // namespace areagraph
