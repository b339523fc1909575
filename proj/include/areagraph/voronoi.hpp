#pragma once

#include <utility>
#include <vector>

#include "areagraph/geometry.hpp"
#include "areagraph/mapio.hpp"

namespace areagraph {

/// Directed Voronoi edge. `site` indexes the face on its left; the twin of
/// halfedge h is h ^ 1.
struct VoronoiHalfedge {
  int source = -1;
  int target = -1;
  int site = -1;
};

/// Voronoi diagram of point sites as a halfedge structure. Unbounded edges
/// end at artificial clip waypoints on the map box grown by one cell.
struct VoronoiGraph {
  std::vector<Point2> sites;
  std::vector<Point2> waypoints;
  /// Distance from each waypoint to its nearest site.
  std::vector<double> clearance;
  /// Non-zero for clip waypoints (not true Voronoi vertices).
  std::vector<char> is_clip;
  std::vector<VoronoiHalfedge> halfedges;
  /// Halfedges leaving each waypoint, counterclockwise.
  std::vector<std::vector<int>> outgoing;
  BBox clip_box;

  static int twin(int h) { return h ^ 1; }
  std::size_t edge_count() const { return halfedges.size() / 2; }
  bool is_unbounded(int h) const {
    return is_clip[halfedges[h].source] || is_clip[halfedges[h].target];
  }
  Point2 source_point(int h) const { return waypoints[halfedges[h].source]; }
  Point2 target_point(int h) const { return waypoints[halfedges[h].target]; }
  Point2 left_site(int h) const { return sites[halfedges[h].site]; }
  Point2 right_site(int h) const { return sites[halfedges[twin(h)].site]; }

  /// Point of minimum clearance along the edge of h, and that clearance.
  /// Unbounded edges are treated as rays leaving their finite end.
  std::pair<Point2, double> min_clearance_point(int h) const;

  /// Sites of the Delaunay face dual to a (non-clip) waypoint, counterclockwise.
  std::vector<int> dual_face(int w) const;
};

VoronoiGraph compute_voronoi(const SiteSet& sites);

}  // namespace areagraph
