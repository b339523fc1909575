#include "areagraph/geometry.hpp"

#include <algorithm>
#include <numbers>
#include <unordered_map>

#include "areagraph/error.hpp"

namespace areagraph {

double signed_area(const Ring& ring) {
  const std::size_t n = ring.size();
  if (n < 3) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s += cross(ring[i], ring[(i + 1) % n]);
  }
  return 0.5 * s;
}

double area(const Polygon& poly) {
  double a = std::abs(signed_area(poly.outer));
  for (const auto& h : poly.holes) a -= std::abs(signed_area(h));
  return a;
}

BBox bbox_of(const Ring& ring) {
  BBox b;
  for (auto p : ring) b.expand(p);
  return b;
}

Point2 project_on_segment(Point2 p, Point2 a, Point2 b) {
  const Point2 d = b - a;
  const double len2 = dot(d, d);
  if (len2 <= 0.0) return a;
  const double t = std::clamp(dot(p - a, d) / len2, 0.0, 1.0);
  return a + d * t;
}

double dist_point_segment(Point2 p, Point2 a, Point2 b) {
  return dist(p, project_on_segment(p, a, b));
}

bool on_segment(Point2 p, Point2 a, Point2 b, double eps) {
  return dist_point_segment(p, a, b) <= eps;
}

std::optional<std::pair<double, double>> segment_intersection(Point2 a, Point2 b, Point2 c,
                                                              Point2 d) {
  const Point2 r = b - a;
  const Point2 s = d - c;
  const double denom = cross(r, s);
  if (std::abs(denom) < 1e-15) return std::nullopt;
  const double t = cross(c - a, s) / denom;
  const double u = cross(c - a, r) / denom;
  constexpr double slack = 1e-12;
  if (t < -slack || t > 1 + slack || u < -slack || u > 1 + slack) return std::nullopt;
  return std::make_pair(std::clamp(t, 0.0, 1.0), std::clamp(u, 0.0, 1.0));
}

namespace {

constexpr double kOnBoundary = 1e-9;

// Returns +1 when the edge toggles parity for a ray cast towards +x.
bool ray_crosses(Point2 p, Point2 a, Point2 b) {
  if ((a.y > p.y) == (b.y > p.y)) return false;
  const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
  return x > p.x;
}

}  // namespace

bool point_in_shape(Point2 p, std::span<const Ring> rings) {
  bool inside = false;
  for (const auto& ring : rings) {
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point2 a = ring[i];
      const Point2 b = ring[(i + 1) % n];
      if (on_segment(p, a, b, kOnBoundary)) return true;
      if (ray_crosses(p, a, b)) inside = !inside;
    }
  }
  return inside;
}

bool point_in_shape(Point2 p, const Ring& ring) {
  return point_in_shape(p, std::span<const Ring>(&ring, 1));
}

bool point_in_polygon(Point2 p, const Polygon& poly) {
  std::vector<Ring> rings;
  rings.reserve(1 + poly.holes.size());
  rings.push_back(poly.outer);
  for (const auto& h : poly.holes) rings.push_back(h);
  return point_in_shape(p, rings);
}

ShapeIndex::ShapeIndex(std::vector<Ring> rings) : rings_(std::move(rings)) {
  for (const auto& ring : rings_) {
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
      edges_.push_back({ring[i], ring[(i + 1) % n]});
      bbox_.expand(ring[i]);
    }
  }
  if (edges_.empty()) return;
  const std::size_t n_rows = std::clamp<std::size_t>(edges_.size() / 2, 1, 4096);
  row_height_ = std::max((bbox_.max_y - bbox_.min_y) / static_cast<double>(n_rows), 1e-9);
  rows_.resize(n_rows);
  for (std::uint32_t i = 0; i < edges_.size(); ++i) {
    const auto& e = edges_[i];
    const int r0 = row_of(std::min(e.a.y, e.b.y));
    const int r1 = row_of(std::max(e.a.y, e.b.y));
    for (int r = r0; r <= r1; ++r) rows_[r].push_back(i);
  }
}

int ShapeIndex::row_of(double y) const {
  const int r = static_cast<int>(std::floor((y - bbox_.min_y) / row_height_));
  return std::clamp(r, 0, static_cast<int>(rows_.size()) - 1);
}

bool ShapeIndex::contains(Point2 p) const {
  if (edges_.empty() || !bbox_.contains(p, kOnBoundary)) return false;
  bool inside = false;
  for (std::uint32_t i : rows_[row_of(p.y)]) {
    const auto& e = edges_[i];
    if (on_segment(p, e.a, e.b, kOnBoundary)) return true;
    if (ray_crosses(p, e.a, e.b)) inside = !inside;
  }
  return inside;
}

std::vector<double> ShapeIndex::crossings(Point2 a, Point2 b) const {
  std::vector<double> out;
  if (edges_.empty()) return out;
  BBox sb;
  sb.expand(a);
  sb.expand(b);
  if (!sb.intersects(bbox_, kOnBoundary)) return out;
  const int r0 = row_of(sb.min_y);
  const int r1 = row_of(sb.max_y);
  std::vector<std::uint32_t> seen;
  for (int r = r0; r <= r1; ++r) {
    for (std::uint32_t i : rows_[r]) seen.push_back(i);
  }
  std::sort(seen.begin(), seen.end());
  seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
  for (std::uint32_t i : seen) {
    const auto& e = edges_[i];
    if (auto hit = segment_intersection(a, b, e.a, e.b)) out.push_back(hit->first);
  }
  std::sort(out.begin(), out.end());
  return out;
}

SnapKey snap_key(Point2 p, double eps) {
  return {static_cast<std::int64_t>(std::llround(p.x / eps)),
          static_cast<std::int64_t>(std::llround(p.y / eps))};
}

std::vector<std::vector<int>> trace_rings(std::span<const Point2> points,
                                          std::span<const std::pair<int, int>> edges) {
  std::vector<std::vector<int>> outgoing(points.size());
  for (std::size_t i = 0; i < edges.size(); ++i) outgoing[edges[i].first].push_back(static_cast<int>(i));
  std::vector<char> used(edges.size(), 0);
  std::vector<std::vector<int>> rings;

  auto turn = [&](int from, int at, int to) {
    const Point2 r = points[from] - points[at];
    const Point2 d = points[to] - points[at];
    double ang = std::atan2(cross(r, d), dot(r, d));
    if (ang <= 0.0) ang += 2.0 * std::numbers::pi;
    return ang;
  };

  for (std::size_t start = 0; start < edges.size(); ++start) {
    if (used[start]) continue;
    std::vector<int> ring;
    int cur = static_cast<int>(start);
    used[cur] = 1;
    ring.push_back(edges[cur].first);
    for (;;) {
      const int u = edges[cur].first;
      const int v = edges[cur].second;
      int best = -1;
      double best_turn = 0.0;
      for (int cand : outgoing[v]) {
        if (used[cand] && cand != static_cast<int>(start)) continue;
        const double t = turn(u, v, edges[cand].second);
        if (best < 0 || t < best_turn) {
          best = cand;
          best_turn = t;
        }
      }
      if (best < 0 || best == static_cast<int>(start)) break;
      used[best] = 1;
      ring.push_back(v);
      cur = best;
    }
    rings.push_back(std::move(ring));
  }
  return rings;
}

namespace {

struct VertexTable {
  std::vector<Point2> points;
  std::unordered_map<SnapKey, int, SnapKeyHash> ids;

  int id(Point2 p) {
    auto [it, inserted] = ids.try_emplace(snap_key(p), static_cast<int>(points.size()));
    if (inserted) points.push_back(p);
    return it->second;
  }
};

std::uint64_t edge_key(int a, int b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

// Cancels opposite directed edge pairs; shared boundaries disappear.
std::vector<std::pair<int, int>> cancel_shared(const std::vector<std::pair<int, int>>& edges) {
  std::unordered_map<std::uint64_t, int> count;
  count.reserve(edges.size() * 2);
  for (auto [a, b] : edges) ++count[edge_key(a, b)];
  std::vector<std::pair<int, int>> out;
  for (auto [a, b] : edges) {
    auto fwd = count.find(edge_key(a, b));
    if (fwd->second == 0) continue;
    auto rev = count.find(edge_key(b, a));
    if (rev != count.end() && rev->second > 0) {
      --rev->second;
      --fwd->second;
      continue;
    }
    --fwd->second;
    out.emplace_back(a, b);
  }
  return out;
}

// Splits every edge at vertices of other edges lying on it.
bool split_t_junctions(const std::vector<Point2>& points, std::vector<std::pair<int, int>>& edges) {
  std::vector<int> verts;
  for (auto [a, b] : edges) {
    verts.push_back(a);
    verts.push_back(b);
  }
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  std::sort(verts.begin(), verts.end(),
            [&](int l, int r) { return points[l].x < points[r].x; });
  std::vector<double> xs;
  xs.reserve(verts.size());
  for (int v : verts) xs.push_back(points[v].x);

  bool changed = false;
  std::vector<std::pair<int, int>> out;
  out.reserve(edges.size());
  for (auto [a, b] : edges) {
    const Point2 pa = points[a];
    const Point2 pb = points[b];
    const double lo = std::min(pa.x, pb.x) - kEpsSnap;
    const double hi = std::max(pa.x, pb.x) + kEpsSnap;
    auto it = std::lower_bound(xs.begin(), xs.end(), lo);
    std::vector<std::pair<double, int>> inner;
    const Point2 d = pb - pa;
    const double len2 = dot(d, d);
    for (auto k = static_cast<std::size_t>(it - xs.begin()); k < xs.size() && xs[k] <= hi; ++k) {
      const int v = verts[k];
      if (v == a || v == b) continue;
      const Point2 pv = points[v];
      if (pv.y < std::min(pa.y, pb.y) - kEpsSnap || pv.y > std::max(pa.y, pb.y) + kEpsSnap)
        continue;
      if (len2 <= 0.0) continue;
      const double t = dot(pv - pa, d) / len2;
      if (t <= 0.0 || t >= 1.0) continue;
      if (dist_point_segment(pv, pa, pb) <= kEpsSnap) inner.emplace_back(t, v);
    }
    if (inner.empty()) {
      out.emplace_back(a, b);
      continue;
    }
    changed = true;
    std::sort(inner.begin(), inner.end());
    int prev = a;
    for (auto [t, v] : inner) {
      out.emplace_back(prev, v);
      prev = v;
    }
    out.emplace_back(prev, b);
  }
  edges = std::move(out);
  return changed;
}

void add_ring_edges(VertexTable& table, const Ring& ring, bool want_ccw,
                    std::vector<std::pair<int, int>>& edges) {
  const std::size_t n = ring.size();
  if (n < 3) return;
  const bool is_ccw = signed_area(ring) > 0.0;
  std::vector<int> ids;
  ids.reserve(n);
  for (auto p : ring) ids.push_back(table.id(p));
  if (is_ccw != want_ccw) std::reverse(ids.begin(), ids.end());
  for (std::size_t i = 0; i < n; ++i) {
    const int a = ids[i];
    const int b = ids[(i + 1) % n];
    if (a != b) edges.emplace_back(a, b);
  }
}

}  // namespace

std::vector<Polygon> polygon_union_all(std::span<const Polygon> polys) {
  VertexTable table;
  std::vector<std::pair<int, int>> edges;
  for (const auto& poly : polys) {
    add_ring_edges(table, poly.outer, true, edges);
    for (const auto& h : poly.holes) add_ring_edges(table, h, false, edges);
  }
  edges = cancel_shared(edges);
  if (split_t_junctions(table.points, edges)) edges = cancel_shared(edges);

  const auto id_rings = trace_rings(table.points, edges);
  std::vector<Polygon> outers;
  std::vector<Ring> holes;
  for (const auto& ids : id_rings) {
    Ring ring;
    ring.reserve(ids.size());
    for (int id : ids) ring.push_back(table.points[id]);
    const double a = signed_area(ring);
    if (std::abs(a) <= 1e-12) continue;
    if (a > 0.0) {
      outers.push_back({std::move(ring), {}});
    } else {
      holes.push_back(std::move(ring));
    }
  }
  std::sort(outers.begin(), outers.end(), [](const Polygon& l, const Polygon& r) {
    return signed_area(l.outer) > signed_area(r.outer);
  });
  for (auto& h : holes) {
    // A point just beside the first hole edge, on the material side.
    const Point2 a = h[0];
    const Point2 b = h[1 % h.size()];
    const Point2 mid = (a + b) * 0.5;
    const Point2 d = b - a;
    const double len = norm(d);
    const Point2 probe = len > 0 ? mid + Point2{-d.y, d.x} * (1e-6 / len) : mid;
    // Smallest containing outer wins (outers sorted by decreasing area).
    int owner = -1;
    for (int i = static_cast<int>(outers.size()) - 1; i >= 0; --i) {
      if (point_in_shape(probe, outers[i].outer)) {
        owner = i;
        break;
      }
    }
    if (owner < 0) owner = 0;
    if (!outers.empty()) outers[owner].holes.push_back(std::move(h));
  }
  return outers;
}

Polygon polygon_union(std::span<const Polygon> polys) {
  if (polys.empty()) throw InvalidArgument("polygon_union", "no input polygons");
  auto parts = polygon_union_all(polys);
  if (parts.size() != 1) {
    throw GeometryError("polygon_union",
                        "inputs are not connected (" + std::to_string(parts.size()) + " parts)");
  }
  return std::move(parts.front());
}

std::pair<Polygon, Polygon> split_polygon(const Polygon& poly, Segment cut) {
  const Ring& ring = poly.outer;
  const std::size_t n = ring.size();
  if (n < 3) throw InvalidArgument("split_polygon", "polygon has fewer than 3 vertices");

  auto boundary_dist = [&](Point2 p) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i)
      best = std::min(best, dist_point_segment(p, ring[i], ring[(i + 1) % n]));
    return best;
  };
  if (boundary_dist(cut.a) > kEpsSnap || boundary_dist(cut.b) > kEpsSnap)
    throw InvalidArgument("split_polygon", "cut endpoints must lie on the outer ring");
  if (dist(cut.a, cut.b) <= kEpsSnap)
    throw InvalidArgument("split_polygon", "cut has zero length");

  for (double t : {0.25, 0.5, 0.75}) {
    const Point2 q = cut.a + (cut.b - cut.a) * t;
    if (!point_in_polygon(q, poly) || boundary_dist(q) <= kEpsSnap)
      throw InvalidArgument("split_polygon", "cut interior is not inside the polygon");
  }
  auto proper_cross = [&](const Ring& r) {
    const std::size_t m = r.size();
    for (std::size_t i = 0; i < m; ++i) {
      if (auto hit = segment_intersection(cut.a, cut.b, r[i], r[(i + 1) % m])) {
        const double t = hit->first;
        if (t > 1e-9 && t < 1 - 1e-9) return true;
      }
    }
    return false;
  };
  if (proper_cross(ring)) throw InvalidArgument("split_polygon", "cut crosses the boundary");
  for (const auto& h : poly.holes)
    if (proper_cross(h)) throw InvalidArgument("split_polygon", "cut crosses a hole");

  // Ring with both cut endpoints inserted as vertices.
  Ring aug;
  int ia = -1;
  int ib = -1;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 p = ring[i];
    const Point2 q = ring[(i + 1) % n];
    aug.push_back(p);
    const int here = static_cast<int>(aug.size()) - 1;
    if (ia < 0 && dist(cut.a, p) <= kEpsSnap) ia = here;
    if (ib < 0 && dist(cut.b, p) <= kEpsSnap) ib = here;
    std::vector<std::pair<double, int>> on_edge;
    const Point2 d = q - p;
    const double len2 = dot(d, d);
    auto consider = [&](Point2 c, int which) {
      if (len2 <= 0.0 || dist(c, p) <= kEpsSnap || dist(c, q) <= kEpsSnap) return;
      if (dist_point_segment(c, p, q) > kEpsSnap) return;
      on_edge.emplace_back(dot(c - p, d) / len2, which);
    };
    if (ia < 0) consider(cut.a, 0);
    if (ib < 0) consider(cut.b, 1);
    std::sort(on_edge.begin(), on_edge.end());
    for (auto [t, which] : on_edge) {
      aug.push_back(which == 0 ? cut.a : cut.b);
      (which == 0 ? ia : ib) = static_cast<int>(aug.size()) - 1;
    }
  }
  if (ia < 0 || ib < 0 || ia == ib)
    throw InvalidArgument("split_polygon", "cut endpoints could not be placed on the ring");

  auto walk = [&](int from, int to) {
    Ring out;
    const int m = static_cast<int>(aug.size());
    for (int i = from;; i = (i + 1) % m) {
      out.push_back(aug[i]);
      if (i == to) break;
    }
    return out;
  };
  Polygon first{walk(ia, ib), {}};
  Polygon second{walk(ib, ia), {}};
  for (const auto& h : poly.holes) {
    (point_in_shape(h.front(), first.outer) ? first : second).holes.push_back(h);
  }
  return {std::move(first), std::move(second)};
}

}  // namespace areagraph

namespace areagraph {

SiteLocator::SiteLocator(std::vector<Point2> sites, double cell)
    : sites_(std::move(sites)), cell_(cell) {
  if (sites_.empty()) return;
  BBox b;
  for (auto p : sites_) b.expand(p);
  min_x_ = b.min_x;
  min_y_ = b.min_y;
  nx_ = static_cast<int>((b.max_x - b.min_x) / cell_) + 1;
  ny_ = static_cast<int>((b.max_y - b.min_y) / cell_) + 1;
  buckets_.resize(static_cast<std::size_t>(nx_) * ny_);
  for (int i = 0; i < static_cast<int>(sites_.size()); ++i) {
    const int cx = static_cast<int>((sites_[i].x - min_x_) / cell_);
    const int cy = static_cast<int>((sites_[i].y - min_y_) / cell_);
    buckets_[static_cast<std::size_t>(cy) * nx_ + cx].push_back(i);
  }
}

std::pair<int, double> SiteLocator::nearest(Point2 p) const {
  if (sites_.empty()) return {-1, std::numeric_limits<double>::infinity()};
  const int cx = std::clamp(static_cast<int>(std::floor((p.x - min_x_) / cell_)), 0, nx_ - 1);
  const int cy = std::clamp(static_cast<int>(std::floor((p.y - min_y_) / cell_)), 0, ny_ - 1);
  // Distance from p to the clamped cell, so rings are measured from there.
  const double ox = std::max({0.0, min_x_ - p.x, p.x - (min_x_ + nx_ * cell_)});
  const double oy = std::max({0.0, min_y_ - p.y, p.y - (min_y_ + ny_ * cell_)});
  const double outside = std::hypot(ox, oy);
  int best = -1;
  double best_d2 = std::numeric_limits<double>::infinity();
  const int max_ring = std::max(nx_, ny_);
  for (int ring = 0; ring <= max_ring; ++ring) {
    if (best >= 0) {
      const double reach = outside + (ring - 1) * cell_;
      if (reach > 0 && reach * reach > best_d2) break;
    }
    for (int y = cy - ring; y <= cy + ring; ++y) {
      if (y < 0 || y >= ny_) continue;
      const bool edge_row = (y == cy - ring || y == cy + ring);
      for (int x = cx - ring; x <= cx + ring; x += (edge_row ? 1 : 2 * ring)) {
        if (x >= 0 && x < nx_) {
          for (int i : buckets_[static_cast<std::size_t>(y) * nx_ + x]) {
            const double d2 = dist2(p, sites_[i]);
            if (d2 < best_d2 || (d2 == best_d2 && i < best)) {
              best_d2 = d2;
              best = i;
            }
          }
        }
        if (ring == 0) break;
      }
    }
  }
  return {best, std::sqrt(best_d2)};
}

}  // namespace areagraph
