#pragma once

#include <array>
#include <string>
#include <vector>

#include "areagraph/area_graph.hpp"
#include "areagraph/grid_planner.hpp"
#include "areagraph/mapio.hpp"
#include "areagraph/topology_graph.hpp"

namespace areagraph {

enum class RoadmapVariant { GridAStar, TopoVoronoi };

const char* variant_name(RoadmapVariant v);

/// Topology graph polylines as chains of waypoints between junction points.
struct WaypointGraph {
  struct Chain {
    std::vector<int> nodes;
    /// Arc length (pixels) from the first node.
    std::vector<double> cum;
  };
  /// Walk along one chain between two of its indices.
  struct Step {
    int chain = -1;
    int from = -1;
    int to = -1;
  };
  struct Path {
    int src = -1;
    std::vector<Step> steps;
    double length = kNoPath;

    bool found() const { return src >= 0; }
  };

  std::vector<Point2> points;
  /// Area label of the cell under each point, -1 outside every area.
  std::vector<int> area;
  std::vector<Chain> chains;
  /// Chain and index of interior points; -1 for junctions (graph vertices).
  std::vector<int> chain_of;
  std::vector<int> chain_index;
  /// (chain, index of this junction in it) per junction.
  std::vector<std::vector<std::pair<int, int>>> junction_chains;

  static WaypointGraph from_topology(const TopologyGraph& g, const AreaGraph& ag);

  /// Nearest point with raster line of sight from `p`, or -1.
  int nearest_visible(const GridMap& map, Point2 p) const;

  /// Shortest paths from `src` to each target. With area >= 0 the search
  /// stays on points of that area (source and targets excepted); targets not
  /// reached that way are searched again without the restriction.
  std::vector<Path> shortest_paths(int src, const std::vector<int>& targets, int area) const;

  /// Points visited by a path, source and target included.
  std::vector<Point2> points_of(const Path& p) const;

 private:
  double bucket_ = 8.0;
  int bw_ = 0;
  int bh_ = 0;
  std::vector<std::vector<int>> buckets_;

  void search(int src, const std::vector<int>& targets, int area, std::vector<Path>& out) const;
};

/// Path between two passages of one area, pixel frame, oriented a -> b.
struct PassageEdge {
  int a = -1;
  int b = -1;
  int area = -1;
  /// Pixel frame. TopoVoronoi edges keep only their two end points here and
  /// the waypoints in between in `route`.
  std::vector<Point2> path;
  WaypointGraph::Path route;
  double length_m = 0.0;

  std::vector<Point2> points(const WaypointGraph& wg) const;
};

/// Roadmap over passages. Holds references to the area graph, map and
/// topology graph it was built from; they must outlive it. Immutable after
/// build, so concurrent plan() calls are safe.
struct PassageGraph {
  RoadmapVariant variant = RoadmapVariant::GridAStar;
  const AreaGraph* ag = nullptr;
  const GridMap* map = nullptr;
  const TopologyGraph* tg = nullptr;

  /// Position of each passage vertex (pixel frame), indexed by passage id.
  std::vector<Point2> vertex_pos;
  /// GridAStar: the Free cell standing in for each passage.
  std::vector<Cell> vertex_cell;
  /// TopoVoronoi: waypoint each passage is joined to.
  std::vector<int> vertex_waypoint;
  std::vector<PassageEdge> edges;
  /// Edge ids per passage.
  std::vector<std::vector<int>> incident;
  /// Per area search window (c0, r0, c1, r1) covering its cells and passages.
  std::vector<std::array<int, 4>> area_window;
  WaypointGraph waypoints;
  std::vector<std::string> warnings;
  double build_ms = 0.0;

  SearchRegion region(int area) const;
};

PassageGraph build_passage_graph(const AreaGraph& ag, RoadmapVariant variant, const GridMap& map,
                                 const TopologyGraph& tg);

/// Query-local vertex for a start or goal point.
struct VirtualPassage {
  Point2 pos;
  int area = -1;
  /// Paths (pixel frame) from pos to passages of `area`; -1 target = the
  /// other virtual vertex.
  std::vector<PassageEdge> edges;
};

/// Joins a pixel-frame point to all passages of its area. Throws NoArea when
/// the point is in no area. `other` (optional) is linked directly when it
/// lies in the same area.
VirtualPassage attach_virtual_passage(const PassageGraph& pg, Point2 px,
                                      const VirtualPassage* other = nullptr);

enum class PlanMethod { Grid, AStarPassage, VoronoiPassage };

const char* method_name(PlanMethod m);

struct PlanResult {
  bool found = false;
  PlanMethod method = PlanMethod::Grid;
  /// World frame, meters.
  std::vector<Point2> path;
  double length_m = kNoPath;
  double ms = 0.0;
  /// Areas visited in order (empty for the grid baseline).
  std::vector<int> areas;

  int rooms_crossed() const { return areas.empty() ? 0 : static_cast<int>(areas.size()) - 1; }
};

/// Plans between two world-frame points. Both are snapped to the centers of
/// their cells. Throws NoArea when a point lies in no area.
PlanResult plan(const PassageGraph& pg, Point2 start, Point2 goal);

/// Baseline: grid A* over the whole map.
PlanResult plan_grid(const GridMap& map, Point2 start, Point2 goal);

}  // namespace areagraph
