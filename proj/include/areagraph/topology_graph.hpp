#pragma once

#include <functional>
#include <vector>

#include "areagraph/alpha_shape.hpp"
#include "areagraph/geometry.hpp"
#include "areagraph/voronoi.hpp"

namespace areagraph {

/// Ordered waypoints of a graph edge with per-waypoint clearance.
struct Polyline {
  std::vector<Point2> points;
  std::vector<double> clearance;
  /// Voronoi halfedge traversed by each segment in this direction, or -1 for
  /// connector segments added when vertices are merged.
  std::vector<int> segment_halfedge;

  double length() const;
  double min_clearance() const;
  Polyline reversed() const;
  /// Appends `tail`, whose first point must equal our last point.
  void append(const Polyline& tail);
};

enum class VertexKind { DeadEnd, Junction, Anchor, Isolated };

struct TopoVertex {
  Point2 pos;
  double clearance = 0.0;
  /// Incident edge ids; self-loops appear twice.
  std::vector<int> edges;
};

struct TopoEdge {
  int from = -1;
  int to = -1;
  Polyline path;
  double length = 0.0;
  /// Minimum clearance over the whole edge (segments included, not only waypoints).
  double min_clearance = 0.0;
  bool alive = true;

  bool is_loop() const { return from == to; }
};

enum class RemovalReason { Boundary, Clearance, DeadEnd, Component, SelfLoop };

class TopologyGraph;

/// Hooks fired while the graph is pruned, so polygons attached to edges can
/// follow the edges they belong to.
class EdgeObserver {
 public:
  virtual ~EdgeObserver() = default;
  /// Fired after the edge has been unlinked.
  virtual void edge_removed(const TopologyGraph&, int /*edge*/, RemovalReason) {}
  /// Fired before a dead-end edge hanging off `junction` is unlinked.
  virtual void deadend_removing(const TopologyGraph&, int /*dead*/, int /*junction*/) {}
  /// `first` and `second` were concatenated into `joined`. The flags tell
  /// whether each input was traversed against its stored direction.
  virtual void edges_joined(const TopologyGraph&, int /*first*/, bool /*first_reversed*/,
                            int /*second*/, bool /*second_reversed*/, int /*joined*/) {}
  /// Fired before a short self-loop at `vertex` is dropped by vertex merging.
  virtual void self_loop_dropping(const TopologyGraph&, int /*edge*/, int /*vertex*/) {}
};

/// Pruned Voronoi graph G_T. Vertices and edges keep stable ids; removed
/// edges stay in the table with alive = false.
class TopologyGraph {
 public:
  static TopologyGraph from_voronoi(const VoronoiGraph& vd);

  int add_vertex(Point2 pos, double clearance);
  int add_edge(int from, int to, Polyline path, double min_clearance);
  void remove_edge(int e);

  const std::vector<TopoVertex>& vertices() const { return vertices_; }
  const std::vector<TopoEdge>& edges() const { return edges_; }
  const TopoVertex& vertex(int v) const { return vertices_[v]; }
  const TopoEdge& edge(int e) const { return edges_[e]; }
  TopoEdge& edge_mut(int e) { return edges_[e]; }
  TopoVertex& vertex_mut(int v) { return vertices_[v]; }

  int degree(int v) const { return static_cast<int>(vertices_[v].edges.size()); }
  VertexKind kind(int v) const;
  int other_end(int e, int v) const { return edges_[e].from == v ? edges_[e].to : edges_[e].from; }
  /// Edge path oriented to start at v.
  Polyline path_from(int e, int v) const;
  bool is_dead_end_edge(int e) const;

  std::vector<int> alive_edges() const;
  std::vector<int> alive_vertices() const;
  std::size_t alive_edge_count() const;
  double total_length() const;

  /// Unit direction in which edge e leaves vertex v.
  Point2 departure(int e, int v) const;
  /// Incident edges of v sorted counterclockwise by departure direction.
  std::vector<int> ccw_edges(int v) const;

 private:
  std::vector<TopoVertex> vertices_;
  std::vector<TopoEdge> edges_;
};

/// Clearance lookup used to score new points (e.g. merged vertex centroids).
using ClearanceFn = std::function<double(Point2)>;

/// Removes every edge with a waypoint outside `boundary`. Throws EmptyGraph
/// when nothing survives.
void filter_outside_boundary(TopologyGraph& g, const AlphaShape& boundary,
                             EdgeObserver* obs = nullptr);

/// Removes every edge whose minimum clearance is below `min_clearance`.
/// Returns the removed edge ids.
std::vector<int> remove_low_clearance_edges(TopologyGraph& g, double min_clearance,
                                            EdgeObserver* obs = nullptr);

/// Joins the two edges of every degree-2 vertex. A pure cycle collapses to a
/// self-loop at its lexicographically smallest vertex.
void join_degree_two(TopologyGraph& g, EdgeObserver* obs = nullptr);

/// `iterations` rounds of: remove dead-end edges shorter than `min_length`,
/// then join degree-2 vertices. An edge whose both ends are dead-ends is kept.
void prune_dead_ends(TopologyGraph& g, double min_length, int iterations,
                     EdgeObserver* obs = nullptr);

/// Keeps the connected component with the largest total edge length (ties:
/// lowest vertex id).
void keep_largest_component(TopologyGraph& g, EdgeObserver* obs = nullptr);

/// Clusters vertices transitively closer than `merge_dist` into their
/// centroid; self-loops shorter than `merge_dist` created this way are dropped.
void merge_close_vertices(TopologyGraph& g, double merge_dist, EdgeObserver* obs = nullptr,
                          const ClearanceFn& clearance = {});

/// Metric defaults converted to pixels.
struct TopologyParams {
  double min_clearance_px = 0.0;
  double deadend_min_length_px = 0.0;
  int iterations = 3;
  double merge_dist_px = 0.0;

  static TopologyParams from_meters(double resolution, double min_clearance_m = 0.25,
                                    double deadend_min_length_m = 1.0, int iterations = 3,
                                    double merge_dist_m = 0.3);
};

}  // namespace areagraph
