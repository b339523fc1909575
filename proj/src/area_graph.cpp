#include "areagraph/area_graph.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "areagraph/error.hpp"

namespace areagraph {

bool FanTriangle::contains(Point2 p, double eps) const {
  return orient(site, a, p) >= -eps && orient(a, b, p) >= -eps && orient(b, site, p) >= -eps;
}

double fan_area(std::span<const FanTriangle> fans) {
  double s = 0.0;
  for (const auto& f : fans) s += f.area();
  return s;
}

std::vector<Polygon> fans_to_polygons(std::span<const FanTriangle> fans) {
  std::vector<Polygon> tris;
  tris.reserve(fans.size());
  for (const auto& f : fans) {
    if (!(f.area() > 0.0)) continue;
    tris.push_back(Polygon{{f.site, f.a, f.b}, {}});
  }
  if (tris.empty()) return {};
  return polygon_union_all(tris);
}

namespace {

void add_fan(HalfPolygon& hp, const VoronoiGraph& vd, int h, Point2 a, Point2 b) {
  FanTriangle f{vd.sites[vd.halfedges[h].site], a, b, h};
  if (f.area() > 0.0) hp.push_back(f);
}

void move_into(HalfPolygon& dst, HalfPolygon& src) {
  dst.insert(dst.end(), src.begin(), src.end());
  src.clear();
}

}  // namespace

std::vector<PolyEdge> build_half_polygons(const VoronoiGraph& vd, const TopologyGraph& g) {
  std::vector<PolyEdge> out(g.edges().size());
  for (int e = 0; e < static_cast<int>(g.edges().size()); ++e) {
    out[e].edge = e;
    const auto& ed = g.edge(e);
    if (!ed.alive) continue;
    const auto& path = ed.path;
    for (std::size_t i = 0; i + 1 < path.points.size(); ++i) {
      const int h = path.segment_halfedge[i];
      if (h < 0) continue;
      if (h >= static_cast<int>(vd.halfedges.size()))
        throw GeometryError("build_half_polygons", "edge references a missing Voronoi face");
      add_fan(out[e].left, vd, h, path.points[i], path.points[i + 1]);
      add_fan(out[e].right, vd, VoronoiGraph::twin(h), path.points[i + 1], path.points[i]);
    }
  }
  return out;
}

PolyEdge merge_joined_polygons(const TopologyGraph& g, const PolyEdge& e1, bool e1_rev,
                               const PolyEdge& e2, bool e2_rev, int joined) {
  const auto& a = g.edge(e1.edge);
  const auto& b = g.edge(e2.edge);
  const bool adjacent = a.from == b.from || a.from == b.to || a.to == b.from || a.to == b.to;
  if (!adjacent) throw InvalidArgument("merge_joined_polygons", "edges share no vertex");
  PolyEdge out;
  out.edge = joined;
  const HalfPolygon& l1 = e1_rev ? e1.right : e1.left;
  const HalfPolygon& r1 = e1_rev ? e1.left : e1.right;
  const HalfPolygon& l2 = e2_rev ? e2.right : e2.left;
  const HalfPolygon& r2 = e2_rev ? e2.left : e2.right;
  out.left = l1;
  out.left.insert(out.left.end(), l2.begin(), l2.end());
  out.right = r1;
  out.right.insert(out.right.end(), r2.begin(), r2.end());
  return out;
}

PolygonTracker::PolygonTracker(const VoronoiGraph& vd, const TopologyGraph& g)
    : vd_(vd), polys_(build_half_polygons(vd, g)) {}

PolyEdge& PolygonTracker::slot(int e) {
  if (e >= static_cast<int>(polys_.size())) {
    const int old = static_cast<int>(polys_.size());
    polys_.resize(e + 1);
    for (int i = old; i <= e; ++i) polys_[i].edge = i;
  }
  return polys_[e];
}

HalfPolygon& PolygonTracker::side(int e, bool left) {
  PolyEdge& p = slot(e);
  return left ? p.left : p.right;
}

void PolygonTracker::drop(int e) {
  PolyEdge& p = slot(e);
  dropped_ += p.area();
  p.left.clear();
  p.right.clear();
}

double PolygonTracker::total_area() const {
  double s = 0.0;
  for (const auto& p : polys_) s += p.area();
  return s;
}

void PolygonTracker::edge_removed(const TopologyGraph&, int edge, RemovalReason why) {
  // Clearance removals are handed out by absorb_low_clearance; dead-ends and
  // short loops were already moved by the pre-removal hooks.
  if (why == RemovalReason::Clearance) return;
  drop(edge);
}

void PolygonTracker::deadend_removing(const TopologyGraph& g, int dead, int junction) {
  const std::vector<int> ring = g.ccw_edges(junction);
  const int n = static_cast<int>(ring.size());
  const int i = static_cast<int>(std::find(ring.begin(), ring.end(), dead) - ring.begin());
  if (n < 2 || i == n) {
    drop(dead);
    return;
  }
  const int next = ring[(i - 1 + n) % n];
  PolyEdge& d = slot(dead);
  if (next != dead && !g.is_dead_end_edge(next)) {
    HalfPolygon& dst = side(next, g.edge(next).from == junction);
    move_into(dst, d.left);
    move_into(dst, d.right);
    return;
  }
  const int last = ring[(i + 1) % n];
  HalfPolygon& dst = side(last, g.edge(last).to == junction);
  move_into(dst, d.left);
  move_into(dst, d.right);
}

void PolygonTracker::edges_joined(const TopologyGraph& g, int first, bool first_reversed,
                                  int second, bool second_reversed, int joined) {
  slot(joined);
  PolyEdge merged =
      merge_joined_polygons(g, slot(first), first_reversed, slot(second), second_reversed, joined);
  polys_[joined] = std::move(merged);
  polys_[first].left.clear();
  polys_[first].right.clear();
  polys_[second].left.clear();
  polys_[second].right.clear();
}

void PolygonTracker::self_loop_dropping(const TopologyGraph& g, int edge, int vertex) {
  for (int e : g.vertex(vertex).edges) {
    if (e == edge) continue;
    HalfPolygon& dst = side(e, g.edge(e).from == vertex);
    move_into(dst, slot(edge).left);
    move_into(dst, slot(edge).right);
    return;
  }
  drop(edge);
}

void PolygonTracker::absorb_low_clearance(const TopologyGraph& g, std::span<const int> removed,
                                          const AlphaShape* boundary) {
  const auto& he = vd_.halfedges;
  const int nv = static_cast<int>(vd_.waypoints.size());

  // Nearest retained vertex by hops for every Voronoi vertex, built on first
  // use by one breadth-first sweep from all retained vertices.
  std::vector<int> hop_target;
  auto nearest_retained = [&]() -> const std::vector<int>& {
    if (!hop_target.empty()) return hop_target;
    hop_target.assign(nv, -1);
    std::deque<int> q;
    for (int v = 0; v < nv; ++v)
      if (g.degree(v) > 0) {
        hop_target[v] = v;
        q.push_back(v);
      }
    while (!q.empty()) {
      const int u = q.front();
      q.pop_front();
      for (int h : vd_.outgoing[u]) {
        const int t = he[h].target;
        if (hop_target[t] >= 0) continue;
        hop_target[t] = hop_target[u];
        q.push_back(t);
      }
    }
    return hop_target;
  };

  // Retained vertex reached from v by climbing the clearance gradient, or -1.
  std::vector<int> target(nv, -2);
  auto climb = [&](int v0) {
    if (target[v0] != -2) return target[v0];
    std::vector<int> trail;
    int v = v0;
    while (target[v] == -2 && g.degree(v) == 0) {
      trail.push_back(v);
      int best = -1;
      double best_c = vd_.clearance[v];
      for (int h : vd_.outgoing[v]) {
        const int t = he[h].target;
        if (vd_.clearance[t] > best_c) {
          best_c = vd_.clearance[t];
          best = t;
        }
      }
      if (best < 0) break;
      v = best;
    }
    int result;
    if (target[v] != -2) {
      result = target[v];
    } else if (g.degree(v) > 0) {
      result = v;
    } else {
      // Local clearance maximum without retained edges: nearest retained
      // vertex by hops.
      result = nearest_retained()[v];
    }
    for (int u : trail) target[u] = result;
    target[v] = result;
    return result;
  };

  auto attach = [&](int v, const FanTriangle& f) {
    if (v < 0 || (boundary && !boundary->contains(f.centroid()))) {
      dropped_ += f.area();
      return;
    }
    for (int e : g.vertex(v).edges) {
      const int h = g.edge(e).path.segment_halfedge.front();
      if (h < 0) continue;
      if (vd_.sites[he[h].site] == f.site) {
        slot(e).left.push_back(f);
        return;
      }
      if (vd_.sites[he[VoronoiGraph::twin(h)].site] == f.site) {
        slot(e).right.push_back(f);
        return;
      }
    }
    const Point2 pos = g.vertex(v).pos;
    const Point2 dir = f.centroid() - pos;
    const double ang = std::atan2(dir.y, dir.x);
    int best = -1;
    double best_d = 1e300;
    for (int e : g.vertex(v).edges) {
      const Point2 d = g.departure(e, v);
      double diff = std::abs(std::remainder(std::atan2(d.y, d.x) - ang, 2.0 * M_PI));
      if (diff < best_d) {
        best_d = diff;
        best = e;
      }
    }
    const bool left_of_departure = cross(g.departure(best, v), dir) > 0.0;
    const bool stored_dir = g.edge(best).from == v;
    side(best, left_of_departure == stored_dir).push_back(f);
  };

  for (int e : removed) {
    PolyEdge& p = slot(e);
    HalfPolygon fans = std::move(p.left);
    fans.insert(fans.end(), p.right.begin(), p.right.end());
    p.left.clear();
    p.right.clear();
    for (const FanTriangle& f : fans) {
      const int h = f.halfedge;
      const int va = he[h].source;
      const int vb = he[h].target;
      const Point2 x = project_on_segment(f.site, f.a, f.b);
      const double t = dot(x - f.a, f.b - f.a) / std::max(dist2(f.a, f.b), 1e-300);
      if (t > 1e-9 && t < 1.0 - 1e-9) {
        FanTriangle pa{f.site, f.a, x, h};
        FanTriangle pb{f.site, x, f.b, h};
        attach(climb(va), pa);
        attach(climb(vb), pb);
      } else {
        attach(climb(vd_.clearance[va] >= vd_.clearance[vb] ? va : vb), f);
      }
    }
  }
}

RoomRelation classify_edge_room(const TopologyGraph& g, int edge, const AlphaShape& room) {
  const auto& ed = g.edge(edge);
  const bool a = room.contains(g.vertex(ed.from).pos);
  const bool b = room.contains(g.vertex(ed.to).pos);
  if (a && b) return RoomRelation::Inside;
  if (a != b) return g.is_dead_end_edge(edge) ? RoomRelation::Inside : RoomRelation::Crossing;
  return RoomRelation::Outside;
}

namespace {

// Cuts the edge where its path, walked from `inside`, first leaves the room.
std::optional<PassageLine> cut_edge(const TopologyGraph& g, const VoronoiGraph& vd, int edge,
                                    const AlphaShape& room, int inside) {
  const Polyline path = g.path_from(edge, inside);
  const int nseg = static_cast<int>(path.points.size()) - 1;
  for (int i = 0; i < nseg; ++i) {
    const Point2 a = path.points[i];
    const Point2 b = path.points[i + 1];
    const std::vector<double> ts = room.index.crossings(a, b);
    const double step = 1e-6 / std::max(dist(a, b), 1e-12);
    auto it = std::find_if(ts.begin(), ts.end(), [&](double t) {
      return t > 1e-9 && !room.contains(a + (b - a) * std::min(1.0, t + step));
    });
    if (it == ts.end()) continue;
    PassageLine pl;
    pl.edge = edge;
    pl.inside_vertex = inside;
    pl.segment = inside == g.edge(edge).from ? i : nseg - 1 - i;
    pl.waypoint = *it >= 1.0 ? b : a + (b - a) * *it;
    // Flanking sites come from the Voronoi segment; connector segments borrow
    // the nearest real one.
    int h = -1;
    for (int k = 0; k < nseg && h < 0; ++k)
      for (int j : {i - k, i + k})
        if (j >= 0 && j < nseg && path.segment_halfedge[j] >= 0) {
          h = path.segment_halfedge[j];
          break;
        }
    if (h < 0) return std::nullopt;
    pl.site_left = vd.left_site(h);
    pl.site_right = vd.right_site(h);
    pl.clearance = std::min(dist(pl.waypoint, pl.site_left), dist(pl.waypoint, pl.site_right));
    return pl;
  }
  return std::nullopt;
}

}  // namespace

std::optional<PassageLine> passage_line(const TopologyGraph& g, const VoronoiGraph& vd, int edge,
                                        const AlphaShape& room) {
  if (classify_edge_room(g, edge, room) != RoomRelation::Crossing) return std::nullopt;
  const auto& ed = g.edge(edge);
  return cut_edge(g, vd, edge, room, room.contains(g.vertex(ed.from).pos) ? ed.from : ed.to);
}

namespace {

using EdgeKey = std::pair<SnapKey, SnapKey>;

EdgeKey edge_key(Point2 p, Point2 q) {
  SnapKey a = snap_key(p);
  SnapKey b = snap_key(q);
  if (b.x < a.x || (b.x == a.x && b.y < a.y)) std::swap(a, b);
  return {a, b};
}

struct EdgeKeyHash {
  std::size_t operator()(const EdgeKey& k) const noexcept {
    auto mix = [](std::uint64_t z) {
      z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
      z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
      return z ^ (z >> 31);
    };
    const std::uint64_t a = mix(static_cast<std::uint64_t>(k.first.x) * 0x9E3779B97F4A7C15ULL ^
                                static_cast<std::uint64_t>(k.first.y));
    const std::uint64_t b = mix(static_cast<std::uint64_t>(k.second.x) * 0x9E3779B97F4A7C15ULL ^
                                static_cast<std::uint64_t>(k.second.y));
    return static_cast<std::size_t>(mix(a ^ (b + 0x9E3779B97F4A7C15ULL + (a << 6))));
  }
};

std::array<EdgeKey, 3> fan_sides(const FanTriangle& f) {
  return {edge_key(f.site, f.a), edge_key(f.a, f.b), edge_key(f.b, f.site)};
}

/// False for the Voronoi side of a fan lying wholly inside a wall; floods
/// over fans must not cross it.
bool side_passable(const FanTriangle& f, int side) {
  constexpr double kWallClearance = 0.9;
  return side != 1 || std::max(dist(f.site, f.a), dist(f.site, f.b)) >= kWallClearance;
}

bool fan_has_vertex(const FanTriangle& f, SnapKey k) {
  return snap_key(f.site) == k || snap_key(f.a) == k || snap_key(f.b) == k;
}

/// Fan pool for the room assignment pass.
struct FanPool {
  std::vector<FanTriangle> fans;
  std::vector<int> room;
  std::vector<int> edge_of;
  std::vector<std::vector<int>> by_edge;

  void add(int e, const FanTriangle& f) {
    by_edge[e].push_back(static_cast<int>(fans.size()));
    fans.push_back(f);
    room.push_back(-1);
    edge_of.push_back(e);
  }

  /// Splits unassigned fans of edge e whose Voronoi side strictly contains x.
  void split_at(int e, Point2 x) {
    const std::size_t n = by_edge[e].size();
    for (std::size_t i = 0; i < n; ++i) {
      const int fi = by_edge[e][i];
      if (room[fi] >= 0) continue;
      const FanTriangle f = fans[fi];
      if (dist_point_segment(x, f.a, f.b) > 1e-7) continue;
      if (dist2(x, f.a) < 1e-14 || dist2(x, f.b) < 1e-14) continue;
      fans[fi] = FanTriangle{f.site, f.a, x, f.halfedge};
      add(e, FanTriangle{f.site, x, f.b, f.halfedge});
    }
  }
};

/// Assigns the unassigned fans of a crossing edge to the room (true) or not,
/// by a two-front flood from the passage line that may not cross it. Fans of
/// the two flanking sites are split by the line through site and waypoint;
/// the flood never crosses a Voronoi side inside a wall.
std::vector<std::pair<int, bool>> partition_crossing(const FanPool& pool, int e,
                                                     const PassageLine& pl, Point2 inside_ref,
                                                     const AlphaShape& room) {
  std::vector<int> ids;
  for (int fi : pool.by_edge[e])
    if (pool.room[fi] < 0) ids.push_back(fi);

  std::unordered_map<EdgeKey, std::vector<int>, EdgeKeyHash> adj;
  for (int i = 0; i < static_cast<int>(ids.size()); ++i)
    for (const EdgeKey& k : fan_sides(pool.fans[ids[i]])) adj[k].push_back(i);
  const EdgeKey cut1 = edge_key(pl.site_left, pl.waypoint);
  const EdgeKey cut2 = edge_key(pl.waypoint, pl.site_right);

  auto side_of = [&](Point2 p0, Point2 p1, Point2 c) {
    return (orient(p0, p1, c) > 0) == (orient(p0, p1, inside_ref) > 0) ? 1 : 0;
  };
  std::vector<int> label(ids.size(), -1);
  std::deque<int> q;
  for (int i = 0; i < static_cast<int>(ids.size()); ++i) {
    const auto& f = pool.fans[ids[i]];
    if (f.site == pl.site_left) {
      label[i] = side_of(pl.site_left, pl.waypoint, f.centroid());
    } else if (f.site == pl.site_right) {
      label[i] = side_of(pl.waypoint, pl.site_right, f.centroid());
    } else {
      continue;
    }
    q.push_back(i);
  }
  while (!q.empty()) {
    const int i = q.front();
    q.pop_front();
    const auto& f = pool.fans[ids[i]];
    const auto sides = fan_sides(f);
    for (int k = 0; k < 3; ++k) {
      if (sides[k] == cut1 || sides[k] == cut2) continue;
      if (!side_passable(f, k)) continue;
      for (int j : adj[sides[k]]) {
        if (label[j] >= 0) continue;
        label[j] = label[i];
        q.push_back(j);
      }
    }
  }
  std::vector<std::pair<int, bool>> out;
  out.reserve(ids.size());
  for (int i = 0; i < static_cast<int>(ids.size()); ++i) {
    const bool in = label[i] >= 0 ? label[i] == 1 : room.contains(pool.fans[ids[i]].centroid());
    out.emplace_back(ids[i], in);
  }
  return out;
}

struct UnionFindKeys {
  std::unordered_map<SnapKey, SnapKey, SnapKeyHash> parent;
  SnapKey find(SnapKey k) {
    auto it = parent.try_emplace(k, k).first;
    if (it->second == k) return k;
    const SnapKey r = find(it->second);
    parent[k] = r;
    return r;
  }
  void unite(SnapKey a, SnapKey b) {
    a = find(a);
    b = find(b);
    if (!(a == b)) parent[a] = b;
  }
};

void collect_passages(AreaGraph& ag, const TopologyGraph& g,
                      const std::vector<std::pair<int, PassageLine>>& lines,
                      double min_clearance) {
  // Undirected fan sides shared by two different areas.
  std::unordered_map<EdgeKey, std::vector<int>, EdgeKeyHash> owners;
  std::unordered_map<SnapKey, Point2, SnapKeyHash> coords;
  for (const Area& a : ag.areas)
    for (const auto& f : a.fans)
      for (auto [p, q] : {std::pair{f.site, f.a}, std::pair{f.a, f.b}, std::pair{f.b, f.site}}) {
        auto& v = owners[edge_key(p, q)];
        if (std::find(v.begin(), v.end(), a.id) == v.end()) v.push_back(a.id);
        coords.emplace(snap_key(p), p);
        coords.emplace(snap_key(q), q);
      }

  std::unordered_map<SnapKey, double, SnapKeyHash> graph_points;
  for (int e : g.alive_edges()) {
    const auto& path = g.edge(e).path;
    for (std::size_t i = 0; i < path.points.size(); ++i)
      graph_points[snap_key(path.points[i])] = path.clearance[i];
  }

  std::map<std::pair<int, int>, std::vector<EdgeKey>> shared;
  for (const auto& [k, v] : owners) {
    if (v.size() < 2) continue;
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t j = i + 1; j < v.size(); ++j)
        shared[{std::min(v[i], v[j]), std::max(v[i], v[j])}].push_back(k);
  }

  auto key_less = [](SnapKey a, SnapKey b) { return a.x != b.x ? a.x < b.x : a.y < b.y; };
  for (auto& [pair, keys] : shared) {
    std::sort(keys.begin(), keys.end(), [&](const EdgeKey& a, const EdgeKey& b) {
      if (!(a.first == b.first)) return key_less(a.first, b.first);
      return key_less(a.second, b.second);
    });
    UnionFindKeys uf;
    for (const auto& k : keys) uf.unite(k.first, k.second);
    std::map<std::pair<std::int64_t, std::int64_t>, std::vector<EdgeKey>> chains;
    for (const auto& k : keys) {
      const SnapKey r = uf.find(k.first);
      chains[{r.x, r.y}].push_back(k);
    }
    const int room_a = ag.areas[pair.first].room_id;
    const int room_b = ag.areas[pair.second].room_id;
    for (const auto& [root, chain] : chains) {
      std::unordered_map<SnapKey, int, SnapKeyHash> degree;
      for (const auto& k : chain) {
        ++degree[k.first];
        ++degree[k.second];
      }
      Passage p;
      p.a = pair.first;
      p.b = pair.second;
      bool found = false;
      for (const auto& [rid, pl] : lines) {
        if (rid != room_a && rid != room_b) continue;
        if (!degree.count(snap_key(pl.waypoint))) continue;
        p.waypoint = pl.waypoint;
        p.segment = pl.segment_line();
        p.clearance = pl.clearance;
        found = true;
        break;
      }
      if (!found) {
        double best = -1.0;
        SnapKey best_k{};
        for (const auto& [k, d] : degree) {
          auto it = graph_points.find(k);
          if (it == graph_points.end()) continue;
          if (it->second > best || (it->second == best && key_less(k, best_k))) {
            best = it->second;
            best_k = k;
          }
        }
        if (best < 0.0) continue;
        p.waypoint = coords[best_k];
        p.clearance = best;
        std::vector<SnapKey> ends;
        for (const auto& [k, d] : degree)
          if (d % 2 == 1) ends.push_back(k);
        std::sort(ends.begin(), ends.end(), key_less);
        if (ends.size() >= 2) {
          p.segment = {coords[ends.front()], coords[ends.back()]};
        } else {
          p.segment = {p.waypoint, p.waypoint};
        }
      }
      if (p.clearance < min_clearance) continue;
      p.id = static_cast<int>(ag.passages.size());
      ag.passages.push_back(p);
    }
  }

  ag.neighbors.assign(ag.areas.size(), {});
  ag.area_passages.assign(ag.areas.size(), {});
  for (const Passage& p : ag.passages) {
    ag.area_passages[p.a].push_back(p.id);
    ag.area_passages[p.b].push_back(p.id);
    ag.neighbors[p.a].push_back(p.b);
    ag.neighbors[p.b].push_back(p.a);
  }
  for (auto& n : ag.neighbors) {
    std::sort(n.begin(), n.end());
    n.erase(std::unique(n.begin(), n.end()), n.end());
  }
}

}  // namespace

AreaGraph merge_rooms(const TopologyGraph& g, const VoronoiGraph& vd,
                      std::span<const PolyEdge> polys, const AlphaShapeSet& shapes,
                      const GridMap& map, const RoomMergeOptions& opts) {
  FanPool pool;
  pool.by_edge.resize(g.edges().size());
  const std::vector<int> alive = g.alive_edges();
  for (int e : alive) {
    if (e >= static_cast<int>(polys.size())) continue;
    for (const auto& f : polys[e].left) pool.add(e, f);
    for (const auto& f : polys[e].right) pool.add(e, f);
  }

  const auto rooms = shapes.rooms();
  // Room of each vertex: the first room containing it; a dead-end vertex
  // outside every room takes the first room met walking its edge inward
  // (alpha shapes cut off room corners where dead-ends usually stop).
  std::vector<int> vertex_room(g.vertices().size(), -1);
  auto first_room = [&](Point2 p) {
    for (int r = 0; r < static_cast<int>(rooms.size()); ++r)
      if (rooms[r].contains(p)) return r;
    return -1;
  };
  for (int v : g.alive_vertices()) vertex_room[v] = first_room(g.vertex(v).pos);
  for (int v : g.alive_vertices()) {
    if (vertex_room[v] >= 0 || g.degree(v) != 1) continue;
    const auto pts = g.path_from(g.vertex(v).edges.front(), v).points;
    for (std::size_t i = 1; i + 1 < pts.size() && vertex_room[v] < 0; ++i)
      vertex_room[v] = first_room(pts[i]);
  }
  auto in_room = [&](int v, int r) {
    return rooms[r].contains(g.vertex(v).pos) || (g.degree(v) == 1 && vertex_room[v] == r);
  };

  std::vector<std::vector<int>> touched(g.edges().size());
  std::vector<std::pair<int, PassageLine>> lines;
  for (int r = 0; r < static_cast<int>(rooms.size()); ++r) {
    const AlphaShape& room = rooms[r];
    for (int e : alive) {
      bool any = false;
      for (int fi : pool.by_edge[e]) any = any || pool.room[fi] < 0;
      if (!any) continue;
      const auto& ed = g.edge(e);
      const bool a_in = in_room(ed.from, r);
      const bool b_in = in_room(ed.to, r);
      if (!a_in && !b_in) continue;
      const int inside = a_in ? ed.from : ed.to;
      const int outside = a_in ? ed.to : ed.from;
      RoomRelation rel = RoomRelation::Inside;
      if (a_in != b_in) {
        // The dead-end rule does not apply when the far end lies in
        // another room.
        const bool dead = g.is_dead_end_edge(e);
        const bool other = vertex_room[outside] >= 0 && vertex_room[outside] != r;
        rel = dead && !other ? RoomRelation::Inside : RoomRelation::Crossing;
      }
      if (rel == RoomRelation::Inside) {
        for (int fi : pool.by_edge[e])
          if (pool.room[fi] < 0) pool.room[fi] = r;
        continue;
      }
      if (rel != RoomRelation::Crossing) continue;
      const auto pl = cut_edge(g, vd, e, room, inside);
      if (!pl) continue;
      touched[e].push_back(r);
      lines.emplace_back(r, *pl);
      pool.split_at(e, pl->waypoint);
      const Polyline path = g.path_from(e, pl->inside_vertex);
      // A reference point just inside the room along the edge.
      Point2 ref = path.points.front();
      for (std::size_t i = 0; i + 1 < path.points.size(); ++i) {
        if (dist_point_segment(pl->waypoint, path.points[i], path.points[i + 1]) < 1e-7) {
          ref = path.points[i];
          if (dist2(ref, pl->waypoint) < 1e-14 && i > 0) ref = path.points[i - 1];
          break;
        }
      }
      for (auto [fi, in] : partition_crossing(pool, e, *pl, ref, room))
        if (in) pool.room[fi] = r;
    }
  }

  // Leftover fans lying in a room (e.g. a corridor crossed by an edge that
  // runs between two other rooms) join it.
  for (int e : alive)
    for (int fi : pool.by_edge[e]) {
      if (pool.room[fi] >= 0) continue;
      const Point2 c = pool.fans[fi].centroid();
      for (int r = 0; r < static_cast<int>(rooms.size()); ++r)
        if (rooms[r].contains(c)) {
          pool.room[fi] = r;
          break;
        }
    }

  std::unordered_map<EdgeKey, std::vector<int>, EdgeKeyHash> adj;
  for (int fi = 0; fi < static_cast<int>(pool.fans.size()); ++fi)
    for (const EdgeKey& k : fan_sides(pool.fans[fi])) adj[k].push_back(fi);

  // Leftovers of an edge that hang off its cuts are door throats; each
  // connected throat joins the lowest roomID among the cuts bounding it.
  for (int e : alive) {
    auto& t = touched[e];
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    if (t.size() < 2) continue;
    std::unordered_map<int, std::vector<int>> seed_rooms;  // fan -> rooms cut there
    for (const auto& [rid, pl] : lines) {
      if (pl.edge != e) continue;
      const SnapKey xk = snap_key(pl.waypoint);
      for (int fi : pool.by_edge[e])
        if (pool.room[fi] < 0 && fan_has_vertex(pool.fans[fi], xk)) seed_rooms[fi].push_back(rid);
    }
    std::unordered_set<int> done;
    for (int fi : pool.by_edge[e]) {
      if (!seed_rooms.count(fi) || done.count(fi)) continue;
      std::vector<int> comp{fi};
      done.insert(fi);
      int best = std::numeric_limits<int>::max();
      for (std::size_t i = 0; i < comp.size(); ++i) {
        const int cur = comp[i];
        if (auto it = seed_rooms.find(cur); it != seed_rooms.end())
          for (int rid : it->second) best = std::min(best, rid);
        const auto sides = fan_sides(pool.fans[cur]);
        for (int k = 0; k < 3; ++k) {
          if (!side_passable(pool.fans[cur], k)) continue;
          for (int j : adj[sides[k]])
            if (pool.room[j] < 0 && pool.edge_of[j] == e && done.insert(j).second)
              comp.push_back(j);
        }
      }
      for (int j : comp) pool.room[j] = best;
    }
  }

  // Remaining leftover pieces next to a room (typically corners the alpha
  // shape rounds off) join the room sharing the longest border with them.
  // Wall sides are not crossed unless a piece has no other border. Pieces
  // bordering only other leftovers wait for a later round.
  for (bool progress = true; progress;) {
    progress = false;
    std::vector<char> seen(pool.fans.size(), 0);
    for (int s0 = 0; s0 < static_cast<int>(pool.fans.size()); ++s0) {
      if (pool.room[s0] >= 0 || seen[s0]) continue;
      std::vector<int> comp{s0};
      seen[s0] = 1;
      std::map<int, double> border;
      std::map<int, double> wall_border;
      for (std::size_t i = 0; i < comp.size(); ++i) {
        const FanTriangle& f = pool.fans[comp[i]];
        const Point2 pts[3] = {f.site, f.a, f.b};
        for (int k = 0; k < 3; ++k) {
          const Point2 p = pts[k];
          const Point2 q = pts[(k + 1) % 3];
          const bool open = side_passable(f, k);
          for (int j : adj[edge_key(p, q)]) {
            if (j == comp[i]) continue;
            if (pool.room[j] >= 0) {
              (open ? border : wall_border)[pool.room[j]] += dist(p, q);
            } else if (open && !seen[j]) {
              seen[j] = 1;
              comp.push_back(j);
            }
          }
        }
      }
      if (border.empty()) border = std::move(wall_border);
      int best = -1;
      double best_len = 0.0;
      for (const auto& [r, len] : border)
        if (len > best_len) {
          best_len = len;
          best = r;
        }
      if (best < 0) continue;
      for (int fi : comp) pool.room[fi] = best;
      progress = true;
    }
  }

  AreaGraph ag;
  ag.width = map.width();
  ag.height = map.height();
  ag.resolution = map.resolution();
  ag.origin = map.origin();
  const double px_area = map.resolution() * map.resolution();

  std::vector<Area> room_areas(rooms.size());
  for (int e : alive)
    for (int fi : pool.by_edge[e]) {
      const int r = pool.room[fi];
      if (r < 0) continue;
      room_areas[r].fans.push_back(pool.fans[fi]);
      if (room_areas[r].edges.empty() || room_areas[r].edges.back() != e)
        room_areas[r].edges.push_back(e);
    }
  for (int r = 0; r < static_cast<int>(rooms.size()); ++r) {
    if (room_areas[r].fans.empty()) continue;
    Area a = std::move(room_areas[r]);
    a.room_id = r;
    ag.areas.push_back(std::move(a));
  }
  for (int e : alive) {
    Area a;
    for (int fi : pool.by_edge[e])
      if (pool.room[fi] < 0) a.fans.push_back(pool.fans[fi]);
    if (a.fans.empty()) continue;
    a.edges.push_back(e);
    ag.areas.push_back(std::move(a));
  }
  for (int i = 0; i < static_cast<int>(ag.areas.size()); ++i) {
    Area& a = ag.areas[i];
    a.id = i;
    a.area_px = fan_area(a.fans);
    a.area_m2 = a.area_px * px_area;
    a.polygons = fans_to_polygons(a.fans);
    std::stable_sort(a.polygons.begin(), a.polygons.end(),
                     [](const Polygon& p, const Polygon& q) { return area(p) > area(q); });
  }
  if (ag.areas.empty()) throw EmptyGraph("merge_rooms", "no area polygons left");

  collect_passages(ag, g, lines, opts.min_clearance_px);
  ag.labels = rasterize_areas(ag.areas, ag.width, ag.height);
  return ag;
}

std::size_t AreaGraph::room_count() const {
  return static_cast<std::size_t>(
      std::count_if(areas.begin(), areas.end(), [](const Area& a) { return a.room_id >= 0; }));
}

std::vector<int> rasterize_areas(std::span<const Area> areas, int width, int height) {
  std::vector<int> labels(static_cast<std::size_t>(width) * height, -1);
  for (const Area& a : areas)
    for (const auto& f : a.fans) {
      const double x0 = std::min({f.site.x, f.a.x, f.b.x});
      const double x1 = std::max({f.site.x, f.a.x, f.b.x});
      const double y0 = std::min({f.site.y, f.a.y, f.b.y});
      const double y1 = std::max({f.site.y, f.a.y, f.b.y});
      const int c0 = std::max(0, static_cast<int>(std::ceil(x0 - 0.5)));
      const int c1 = std::min(width - 1, static_cast<int>(std::floor(x1 - 0.5)));
      const int r0 = std::max(0, static_cast<int>(std::ceil(y0 - 0.5)));
      const int r1 = std::min(height - 1, static_cast<int>(std::floor(y1 - 0.5)));
      for (int r = r0; r <= r1; ++r)
        for (int c = c0; c <= c1; ++c) {
          if (!f.contains(GridMap::cell_center(c, r))) continue;
          int& l = labels[static_cast<std::size_t>(r) * width + c];
          if (l < 0 || a.id < l) l = a.id;
        }
    }
  return labels;
}

int locate_area_px(const AreaGraph& ag, const GridMap& map, Point2 px) {
  const int c = static_cast<int>(std::floor(px.x));
  const int r = static_cast<int>(std::floor(px.y));
  if (!map.is_free(c, r)) throw NoArea("locate_area", "point is not in free space");
  const int l = ag.label(c, r);
  if (l < 0) throw NoArea("locate_area", "point is outside every area");
  return l;
}

int locate_area(const AreaGraph& ag, const GridMap& map, Point2 world) {
  return locate_area_px(ag, map, map.world_to_pixel(world));
}

std::pair<double, double> alpha_bounds_px(double door_px, double corridor_px) {
  if (!(door_px > 0.0) || !(door_px < corridor_px))
    throw InvalidArgument("alpha_bounds", "door width must be positive and below corridor width");
  return {(door_px / 2.0) * (door_px / 2.0), (corridor_px / 2.0) * (corridor_px / 2.0)};
}

std::pair<double, double> alpha_bounds(double door_width_m, double corridor_width_m,
                                       double resolution) {
  if (!(resolution > 0.0)) throw InvalidArgument("alpha_bounds", "resolution must be positive");
  return alpha_bounds_px(door_width_m / resolution, corridor_width_m / resolution);
}

}  // namespace areagraph
