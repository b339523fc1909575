#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "areagraph/alpha_shape.hpp"
#include "areagraph/geometry.hpp"
#include "areagraph/mapio.hpp"
#include "areagraph/topology_graph.hpp"
#include "areagraph/voronoi.hpp"

namespace areagraph {

/// Triangle (site, a, b), counterclockwise, where a-b is a piece of a Voronoi
/// segment and `site` owns the face on its left. Half-polygons are unions of
/// these fans.
struct FanTriangle {
  Point2 site;
  Point2 a;
  Point2 b;
  /// Voronoi halfedge the piece a-b came from.
  int halfedge = -1;

  double area() const { return 0.5 * orient(site, a, b); }
  Point2 centroid() const { return (site + a + b) / 3.0; }
  bool contains(Point2 p, double eps = 1e-9) const;
};

using HalfPolygon = std::vector<FanTriangle>;

double fan_area(std::span<const FanTriangle> fans);
/// Union of fan triangles as polygons (one per connected piece).
std::vector<Polygon> fans_to_polygons(std::span<const FanTriangle> fans);

/// Polygon of one graph edge: `left` lies left of the stored edge direction.
struct PolyEdge {
  int edge = -1;
  HalfPolygon left;
  HalfPolygon right;

  double area() const { return fan_area(left) + fan_area(right); }
  bool empty() const { return left.empty() && right.empty(); }
};

/// One PolyEdge per alive edge of a graph freshly built from `vd` (edge ids
/// equal Voronoi edge ids), indexed by edge id.
std::vector<PolyEdge> build_half_polygons(const VoronoiGraph& vd, const TopologyGraph& g);

/// Polygon of the edge that replaces e1 and e2 after their shared degree-2
/// vertex was removed. `e1_rev`/`e2_rev` tell whether each was traversed
/// against its stored direction. Throws InvalidArgument when the edges share
/// no vertex.
PolyEdge merge_joined_polygons(const TopologyGraph& g, const PolyEdge& e1, bool e1_rev,
                               const PolyEdge& e2, bool e2_rev, int joined);

/// Keeps PolyEdges in step with a TopologyGraph while it is pruned.
class PolygonTracker : public EdgeObserver {
 public:
  PolygonTracker(const VoronoiGraph& vd, const TopologyGraph& g);

  /// Hands the fans of edges removed for low clearance to retained edges:
  /// each fan is cut at the segment's clearance minimum, each piece climbs
  /// the clearance gradient to the nearest vertex that keeps an edge, and
  /// joins the incident edge bordering the same site. Fans outside
  /// `boundary` (when given) are dropped.
  void absorb_low_clearance(const TopologyGraph& g, std::span<const int> removed,
                            const AlphaShape* boundary = nullptr);

  void edge_removed(const TopologyGraph& g, int edge, RemovalReason why) override;
  void deadend_removing(const TopologyGraph& g, int dead, int junction) override;
  void edges_joined(const TopologyGraph& g, int first, bool first_reversed, int second,
                    bool second_reversed, int joined) override;
  void self_loop_dropping(const TopologyGraph& g, int edge, int vertex) override;

  const std::vector<PolyEdge>& polys() const { return polys_; }
  const PolyEdge& poly(int e) const { return polys_[e]; }
  /// Area of all live PolyEdges (pixels^2).
  double total_area() const;
  /// Area discarded by boundary filtering, component removal and orphan fans.
  double dropped_area() const { return dropped_; }

 private:
  const VoronoiGraph& vd_;
  std::vector<PolyEdge> polys_;
  double dropped_ = 0.0;

  PolyEdge& slot(int e);
  void drop(int e);
  HalfPolygon& side(int e, bool left);
};

enum class RoomRelation { Inside, Crossing, Outside };

RoomRelation classify_edge_room(const TopologyGraph& g, int edge, const AlphaShape& room);

/// Where a crossing edge leaves a room.
struct PassageLine {
  int edge = -1;
  /// Index into the edge's stored polyline of the segment holding `waypoint`.
  int segment = -1;
  /// Edge endpoint inside the room.
  int inside_vertex = -1;
  Point2 waypoint;
  Point2 site_left;
  Point2 site_right;
  double clearance = 0.0;

  Segment segment_line() const { return {site_left, site_right}; }
};

/// Crossing of the edge polyline with the room boundary nearest the inside
/// endpoint, joined to the two flanking sites. Empty when the edge is not
/// Crossing or no proper intersection is found.
std::optional<PassageLine> passage_line(const TopologyGraph& g, const VoronoiGraph& vd, int edge,
                                        const AlphaShape& room);

struct Area {
  int id = -1;
  /// Index of the room shape (rooms ordered by decreasing size); -1 for
  /// pieces of the graph outside every room.
  int room_id = -1;
  std::vector<Polygon> polygons;
  std::vector<FanTriangle> fans;
  /// Graph edges that contributed fans.
  std::vector<int> edges;
  double area_px = 0.0;
  double area_m2 = 0.0;
};

struct Passage {
  int id = -1;
  int a = -1;
  int b = -1;
  Segment segment;
  Point2 waypoint;
  double clearance = 0.0;
};

/// Areas, passages and a label raster in pixel coordinates of the source map
/// (cell (c, r) has its center at (c + 0.5, r + 0.5)).
struct AreaGraph {
  std::vector<Area> areas;
  std::vector<Passage> passages;
  /// Sorted neighbor area ids.
  std::vector<std::vector<int>> neighbors;
  /// Passage ids incident to each area.
  std::vector<std::vector<int>> area_passages;
  int width = 0;
  int height = 0;
  double resolution = 1.0;
  Pose2 origin;
  /// Area id per cell or -1.
  std::vector<int> labels;

  int label(int cx, int cy) const {
    if (cx < 0 || cy < 0 || cx >= width || cy >= height) return -1;
    return labels[static_cast<std::size_t>(cy) * width + cx];
  }
  std::size_t room_count() const;
};

struct RoomMergeOptions {
  double min_clearance_px = 0.0;
};

/// Assigns edge polygons to rooms, splits crossing polygons at passage lines,
/// unions same-room pieces and collects passages.
AreaGraph merge_rooms(const TopologyGraph& g, const VoronoiGraph& vd,
                      std::span<const PolyEdge> polys, const AlphaShapeSet& shapes,
                      const GridMap& map, const RoomMergeOptions& opts);

/// Cells of the map covered by each area's fans; ties to the lowest id.
std::vector<int> rasterize_areas(std::span<const Area> areas, int width, int height);

/// Area containing a pixel-frame point; throws NoArea for walls and exterior.
int locate_area_px(const AreaGraph& ag, const GridMap& map, Point2 px);
/// Same for a world-frame point in meters.
int locate_area(const AreaGraph& ag, const GridMap& map, Point2 world);

/// Squared-pixel alpha interval from door and corridor widths in meters.
/// Throws InvalidArgument when door_width >= corridor_width.
std::pair<double, double> alpha_bounds(double door_width_m, double corridor_width_m,
                                       double resolution);
/// Same with widths already in pixels.
std::pair<double, double> alpha_bounds_px(double door_px, double corridor_px);

}  // namespace areagraph
