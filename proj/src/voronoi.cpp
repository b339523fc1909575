#include "areagraph/voronoi.hpp"

#include <boost/polygon/voronoi.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>

#include "areagraph/error.hpp"

namespace areagraph {
namespace {

struct IntPoint {
  std::int32_t x;
  std::int32_t y;
};

}  // namespace
}  // namespace areagraph

namespace boost::polygon {
template <>
struct geometry_concept<areagraph::IntPoint> {
  using type = point_concept;
};
template <>
struct point_traits<areagraph::IntPoint> {
  using coordinate_type = std::int32_t;
  static coordinate_type get(const areagraph::IntPoint& p, orientation_2d o) {
    return o == HORIZONTAL ? p.x : p.y;
  }
};
}  // namespace boost::polygon

namespace areagraph {
namespace {

// Largest power-of-two scale that keeps coordinates well inside int32.
double lattice_scale(const std::vector<Point2>& pts) {
  double extent = 1.0;
  for (auto p : pts) extent = std::max({extent, std::abs(p.x), std::abs(p.y)});
  double scale = 1024.0 * 1024.0;
  while (scale > 1.0 && extent * scale > static_cast<double>(1 << 29)) scale *= 0.5;
  return scale;
}

void require_non_collinear(const std::vector<Point2>& pts) {
  if (pts.size() < 3)
    throw DegenerateInput("compute_voronoi", "need at least 3 sites, got " + std::to_string(pts.size()));
  const Point2 a = pts[0];
  std::size_t far = 1;
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (dist2(pts[i], a) > dist2(pts[far], a)) far = i;
  const Point2 b = pts[far];
  if (dist2(a, b) == 0.0) throw DegenerateInput("compute_voronoi", "all sites coincide");
  for (auto p : pts)
    if (std::abs(orient(a, b, p)) > 1e-9 * dist(a, b)) return;
  throw DegenerateInput("compute_voronoi", "all sites are collinear");
}

// Parameter at which a ray from p along unit direction u leaves the box.
double exit_parameter(const BBox& box, Point2 p, Point2 u) {
  if (!box.contains(p)) return 1.0;
  double t = std::numeric_limits<double>::infinity();
  if (u.x > 0) t = std::min(t, (box.max_x - p.x) / u.x);
  if (u.x < 0) t = std::min(t, (box.min_x - p.x) / u.x);
  if (u.y > 0) t = std::min(t, (box.max_y - p.y) / u.y);
  if (u.y < 0) t = std::min(t, (box.min_y - p.y) / u.y);
  return std::max(t, 1e-6);
}

}  // namespace

std::pair<Point2, double> VoronoiGraph::min_clearance_point(int h) const {
  const auto& he = halfedges[h];
  const Point2 s = sites[he.site];
  Point2 a = waypoints[he.source];
  Point2 b = waypoints[he.target];
  if (is_clip[he.source]) std::swap(a, b);
  Point2 best;
  if (is_clip[he.source] || is_clip[he.target]) {
    const Point2 d = b - a;
    const double len2 = dot(d, d);
    const double t = len2 > 0 ? std::max(0.0, dot(s - a, d) / len2) : 0.0;
    best = a + d * t;
  } else {
    best = project_on_segment(s, a, b);
  }
  return {best, dist(best, s)};
}

std::vector<int> VoronoiGraph::dual_face(int w) const {
  std::vector<int> face;
  face.reserve(outgoing[w].size());
  for (int h : outgoing[w]) face.push_back(halfedges[h].site);
  return face;
}

VoronoiGraph compute_voronoi(const SiteSet& site_set) {
  const auto& pts = site_set.sites;
  require_non_collinear(pts);

  const double scale = lattice_scale(pts);
  std::vector<IntPoint> input;
  input.reserve(pts.size());
  for (auto p : pts) {
    input.push_back({static_cast<std::int32_t>(std::llround(p.x * scale)),
                     static_cast<std::int32_t>(std::llround(p.y * scale))});
  }

  boost::polygon::voronoi_diagram<double> vd;
  boost::polygon::construct_voronoi(input.begin(), input.end(), &vd);

  VoronoiGraph g;
  g.sites = pts;
  for (auto p : pts) g.clip_box.expand(p);
  if (site_set.width > 0 && site_set.height > 0) {
    g.clip_box.expand({0.0, 0.0});
    g.clip_box.expand({site_set.width, site_set.height});
  }
  g.clip_box.min_x -= 1.0;
  g.clip_box.min_y -= 1.0;
  g.clip_box.max_x += 1.0;
  g.clip_box.max_y += 1.0;

  const auto& verts = vd.vertices();
  g.waypoints.reserve(verts.size() + 64);
  for (const auto& v : verts) g.waypoints.push_back({v.x() / scale, v.y() / scale});
  g.is_clip.assign(g.waypoints.size(), 0);

  auto vertex_id = [&](const auto* v) { return static_cast<int>(v - &verts.front()); };
  const auto& edges = vd.edges();
  auto edge_index = [&](const auto* e) { return static_cast<std::size_t>(e - &edges.front()); };

  g.halfedges.reserve(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& e = edges[i];
    const auto* tw = e.twin();
    if (edge_index(tw) < i) continue;
    const int left = static_cast<int>(e.cell()->source_index());
    const int right = static_cast<int>(tw->cell()->source_index());
    const auto* v0 = e.vertex0();
    const auto* v1 = e.vertex1();
    if (!v0 && !v1) throw DegenerateInput("compute_voronoi", "edge with no finite vertex");
    int s = v0 ? vertex_id(v0) : -1;
    int t = v1 ? vertex_id(v1) : -1;
    if (s < 0 || t < 0) {
      // Direction keeping the left site on the left.
      const Point2 v = pts[right] - pts[left];
      Point2 u{-v.y, v.x};
      u = u / norm(u);
      const int finite = s >= 0 ? s : t;
      const Point2 p = g.waypoints[finite];
      const Point2 dir = s >= 0 ? u : u * -1.0;
      const Point2 far = p + dir * exit_parameter(g.clip_box, p, dir);
      g.waypoints.push_back(far);
      g.is_clip.push_back(1);
      (s < 0 ? s : t) = static_cast<int>(g.waypoints.size()) - 1;
    }
    g.halfedges.push_back({s, t, left});
    g.halfedges.push_back({t, s, right});
  }

  g.clearance.resize(g.waypoints.size(), 0.0);
  g.outgoing.assign(g.waypoints.size(), {});
  for (int h = 0; h < static_cast<int>(g.halfedges.size()); ++h) {
    const auto& he = g.halfedges[h];
    g.outgoing[he.source].push_back(h);
    g.clearance[he.source] = dist(g.waypoints[he.source], pts[he.site]);
  }
  for (std::size_t w = 0; w < g.outgoing.size(); ++w) {
    auto& out = g.outgoing[w];
    const Point2 o = g.waypoints[w];
    std::sort(out.begin(), out.end(), [&](int a, int b) {
      const Point2 da = g.waypoints[g.halfedges[a].target] - o;
      const Point2 db = g.waypoints[g.halfedges[b].target] - o;
      return std::atan2(da.y, da.x) < std::atan2(db.y, db.x);
    });
  }
  return g;
}

}  // namespace areagraph
