#pragma once

#include <string>
#include <vector>

#include "areagraph/alpha_shape.hpp"
#include "areagraph/area_graph.hpp"
#include "areagraph/mapio.hpp"
#include "areagraph/topology_graph.hpp"
#include "areagraph/voronoi.hpp"

namespace areagraph {

struct SegmentParams {
  /// Squared probe radius in pixels^2.
  double alpha = 0.0;
  TopologyParams topo;
};

/// Polygon bookkeeping after one pipeline stage.
struct StageStats {
  std::string name;
  /// Exact total of all live polygon areas, pixels^2.
  double area_px = 0.0;
  std::size_t edges = 0;
  double ms = 0.0;
};

struct SegmentResult {
  SiteSet sites;
  VoronoiGraph voronoi;
  AlphaShapeSet shapes;
  TopologyGraph graph;
  AreaGraph areas;
  std::vector<StageStats> stages;
  double total_ms = 0.0;

  const StageStats* stage(const std::string& name) const;
};

/// Full segmentation: sites, Voronoi diagram, alpha shapes, pruned topology
/// graph with tracked polygons, then room merging.
SegmentResult segment_map(const GridMap& map, const SegmentParams& params);

}  // namespace areagraph
