#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace areagraph {

/// Equidistance tolerance for Voronoi checks, in pixels.
inline constexpr double kEpsGeo = 1e-6;
/// Vertex snapping tolerance used when matching ring vertices, in pixels.
inline constexpr double kEpsSnap = 1e-3;
/// Relative area tolerance.
inline constexpr double kEpsAreaRel = 1e-6;

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(Point2 a, double s) { return {a.x * s, a.y * s}; }
  friend Point2 operator*(double s, Point2 a) { return {a.x * s, a.y * s}; }
  friend Point2 operator/(Point2 a, double s) { return {a.x / s, a.y / s}; }
  friend bool operator==(Point2 a, Point2 b) { return a.x == b.x && a.y == b.y; }
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
/// Twice the signed area of triangle (a, b, c); positive when counterclockwise.
inline double orient(Point2 a, Point2 b, Point2 c) { return cross(b - a, c - a); }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double dist(Point2 a, Point2 b) { return norm(a - b); }
inline double dist2(Point2 a, Point2 b) {
  const Point2 d = a - b;
  return dot(d, d);
}

struct Segment {
  Point2 a;
  Point2 b;
  double length() const { return dist(a, b); }
};

struct BBox {
  double min_x = std::numeric_limits<double>::infinity();
  double min_y = std::numeric_limits<double>::infinity();
  double max_x = -std::numeric_limits<double>::infinity();
  double max_y = -std::numeric_limits<double>::infinity();

  void expand(Point2 p) {
    min_x = std::min(min_x, p.x);
    min_y = std::min(min_y, p.y);
    max_x = std::max(max_x, p.x);
    max_y = std::max(max_y, p.y);
  }
  bool contains(Point2 p, double pad = 0.0) const {
    return p.x >= min_x - pad && p.x <= max_x + pad && p.y >= min_y - pad &&
           p.y <= max_y + pad;
  }
  bool intersects(const BBox& o, double pad = 0.0) const {
    return !(o.min_x > max_x + pad || o.max_x < min_x - pad || o.min_y > max_y + pad ||
             o.max_y < min_y - pad);
  }
  bool empty() const { return min_x > max_x; }
};

/// Closed polygonal chain; the closing edge back to front() is implicit.
using Ring = std::vector<Point2>;

/// Outer ring counterclockwise, holes clockwise.
struct Polygon {
  Ring outer;
  std::vector<Ring> holes;
};

double signed_area(const Ring& ring);
double area(const Polygon& poly);
BBox bbox_of(const Ring& ring);
double dist_point_segment(Point2 p, Point2 a, Point2 b);
/// Closest point to p on segment ab.
Point2 project_on_segment(Point2 p, Point2 a, Point2 b);
bool on_segment(Point2 p, Point2 a, Point2 b, double eps);

/// Intersection parameters (t along ab, u along cd) of two segments when they
/// intersect in a single point. Collinear overlaps return nothing.
std::optional<std::pair<double, double>> segment_intersection(Point2 a, Point2 b,
                                                              Point2 c, Point2 d);

/// Even-odd containment over all rings of a shape. Points on any ring edge or
/// vertex count as inside.
bool point_in_shape(Point2 p, std::span<const Ring> rings);
bool point_in_shape(Point2 p, const Ring& ring);
bool point_in_polygon(Point2 p, const Polygon& poly);

/// Even-odd point location over a fixed set of rings with edges bucketed by
/// row, for shapes that are queried many times.
class ShapeIndex {
 public:
  ShapeIndex() = default;
  explicit ShapeIndex(std::vector<Ring> rings);

  bool contains(Point2 p) const;
  const std::vector<Ring>& rings() const { return rings_; }
  const BBox& bbox() const { return bbox_; }
  /// Intersections of segment ab with the shape boundary, as parameters along ab.
  std::vector<double> crossings(Point2 a, Point2 b) const;

 private:
  struct EdgeRef {
    Point2 a;
    Point2 b;
  };
  std::vector<Ring> rings_;
  std::vector<EdgeRef> edges_;
  std::vector<std::vector<std::uint32_t>> rows_;
  BBox bbox_;
  double row_height_ = 1.0;

  int row_of(double y) const;
};

/// Chain directed edges (vertex ids into `points`) into closed rings. Each
/// edge is used once. At vertices with several unused outgoing edges the one
/// making the smallest counterclockwise turn from the reversed incoming edge
/// is taken, which keeps regions that only touch at a vertex in one ring.
std::vector<std::vector<int>> trace_rings(std::span<const Point2> points,
                                          std::span<const std::pair<int, int>> edges);

/// Union of polygons that tile the plane with shared edges (T-junctions are
/// resolved). Returns one polygon per outer ring.
std::vector<Polygon> polygon_union_all(std::span<const Polygon> polys);

/// Union of edge-connected polygons into a single polygon. Throws
/// GeometryError when the inputs are not connected.
Polygon polygon_union(std::span<const Polygon> polys);

/// Cut a polygon along a chord whose endpoints lie on the outer ring.
std::pair<Polygon, Polygon> split_polygon(const Polygon& poly, Segment cut);

/// Snap key of a point on the kEpsSnap lattice.
struct SnapKey {
  std::int64_t x;
  std::int64_t y;
  friend bool operator==(SnapKey a, SnapKey b) { return a.x == b.x && a.y == b.y; }
};
SnapKey snap_key(Point2 p, double eps = kEpsSnap);

struct SnapKeyHash {
  std::size_t operator()(SnapKey k) const noexcept {
    std::uint64_t h = static_cast<std::uint64_t>(k.x) * 0x9E3779B97F4A7C15ULL;
    h ^= static_cast<std::uint64_t>(k.y) + 0x7F4A7C159E3779B9ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

/// Nearest-site queries over a fixed point set (uniform bucket grid).
class SiteLocator {
 public:
  SiteLocator() = default;
  explicit SiteLocator(std::vector<Point2> sites, double cell = 4.0);

  /// Index of the nearest site and its distance; {-1, inf} when empty.
  std::pair<int, double> nearest(Point2 p) const;
  double clearance(Point2 p) const { return nearest(p).second; }
  const std::vector<Point2>& sites() const { return sites_; }

 private:
  std::vector<Point2> sites_;
  double cell_ = 4.0;
  double min_x_ = 0.0;
  double min_y_ = 0.0;
  int nx_ = 0;
  int ny_ = 0;
  std::vector<std::vector<int>> buckets_;
};

}  // namespace areagraph
