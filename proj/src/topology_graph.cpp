#include "areagraph/topology_graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <unordered_map>

#include "areagraph/error.hpp"

namespace areagraph {

double Polyline::length() const {
  double len = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) len += dist(points[i - 1], points[i]);
  return len;
}

double Polyline::min_clearance() const {
  double m = std::numeric_limits<double>::infinity();
  for (double c : clearance) m = std::min(m, c);
  return m;
}

Polyline Polyline::reversed() const {
  Polyline r;
  r.points.assign(points.rbegin(), points.rend());
  r.clearance.assign(clearance.rbegin(), clearance.rend());
  r.segment_halfedge.reserve(segment_halfedge.size());
  for (auto it = segment_halfedge.rbegin(); it != segment_halfedge.rend(); ++it)
    r.segment_halfedge.push_back(*it >= 0 ? VoronoiGraph::twin(*it) : -1);
  return r;
}

void Polyline::append(const Polyline& tail) {
  if (tail.points.empty()) return;
  if (points.empty()) {
    *this = tail;
    return;
  }
  points.insert(points.end(), tail.points.begin() + 1, tail.points.end());
  clearance.insert(clearance.end(), tail.clearance.begin() + 1, tail.clearance.end());
  segment_halfedge.insert(segment_halfedge.end(), tail.segment_halfedge.begin(),
                          tail.segment_halfedge.end());
}

TopologyGraph TopologyGraph::from_voronoi(const VoronoiGraph& vd) {
  TopologyGraph g;
  g.vertices_.reserve(vd.waypoints.size());
  for (std::size_t w = 0; w < vd.waypoints.size(); ++w)
    g.add_vertex(vd.waypoints[w], vd.clearance[w]);
  g.edges_.reserve(vd.edge_count());
  for (std::size_t e = 0; e < vd.edge_count(); ++e) {
    const int h = static_cast<int>(2 * e);
    const auto& he = vd.halfedges[h];
    Polyline p;
    p.points = {vd.waypoints[he.source], vd.waypoints[he.target]};
    p.clearance = {vd.clearance[he.source], vd.clearance[he.target]};
    p.segment_halfedge = {h};
    g.add_edge(he.source, he.target, std::move(p), vd.min_clearance_point(h).second);
  }
  return g;
}

int TopologyGraph::add_vertex(Point2 pos, double clearance) {
  vertices_.push_back(TopoVertex{pos, clearance, {}});
  return static_cast<int>(vertices_.size()) - 1;
}

int TopologyGraph::add_edge(int from, int to, Polyline path, double min_clearance) {
  const int id = static_cast<int>(edges_.size());
  TopoEdge e;
  e.from = from;
  e.to = to;
  e.length = path.length();
  e.path = std::move(path);
  e.min_clearance = min_clearance;
  edges_.push_back(std::move(e));
  vertices_[from].edges.push_back(id);
  vertices_[to].edges.push_back(id);
  return id;
}

void TopologyGraph::remove_edge(int e) {
  auto& ed = edges_[e];
  if (!ed.alive) return;
  ed.alive = false;
  for (int v : {ed.from, ed.to}) {
    auto& list = vertices_[v].edges;
    list.erase(std::remove(list.begin(), list.end(), e), list.end());
  }
}

VertexKind TopologyGraph::kind(int v) const {
  switch (degree(v)) {
    case 0: return VertexKind::Isolated;
    case 1: return VertexKind::DeadEnd;
    case 2: return VertexKind::Anchor;
    default: return VertexKind::Junction;
  }
}

Polyline TopologyGraph::path_from(int e, int v) const {
  return edges_[e].from == v ? edges_[e].path : edges_[e].path.reversed();
}

bool TopologyGraph::is_dead_end_edge(int e) const {
  const auto& ed = edges_[e];
  return ed.alive && !ed.is_loop() && (degree(ed.from) == 1 || degree(ed.to) == 1);
}

std::vector<int> TopologyGraph::alive_edges() const {
  std::vector<int> out;
  for (int e = 0; e < static_cast<int>(edges_.size()); ++e)
    if (edges_[e].alive) out.push_back(e);
  return out;
}

std::vector<int> TopologyGraph::alive_vertices() const {
  std::vector<int> out;
  for (int v = 0; v < static_cast<int>(vertices_.size()); ++v)
    if (!vertices_[v].edges.empty()) out.push_back(v);
  return out;
}

std::size_t TopologyGraph::alive_edge_count() const {
  return static_cast<std::size_t>(
      std::count_if(edges_.begin(), edges_.end(), [](const TopoEdge& e) { return e.alive; }));
}

double TopologyGraph::total_length() const {
  double t = 0.0;
  for (const auto& e : edges_)
    if (e.alive) t += e.length;
  return t;
}

Point2 TopologyGraph::departure(int e, int v) const {
  const auto& pts = edges_[e].path.points;
  Point2 d = edges_[e].from == v ? pts[1] - pts[0] : pts[pts.size() - 2] - pts.back();
  const double n = norm(d);
  return n > 0 ? d / n : Point2{};
}

std::vector<int> TopologyGraph::ccw_edges(int v) const {
  // Self-loops are listed twice; the second copy leaves along the reversed path.
  std::vector<std::pair<double, int>> keyed;
  std::vector<int> seen;
  for (int e : vertices_[v].edges) {
    Point2 d = departure(e, v);
    if (edges_[e].is_loop()) {
      if (std::find(seen.begin(), seen.end(), e) != seen.end()) {
        const auto& pts = edges_[e].path.points;
        d = pts[pts.size() - 2] - pts.back();
      }
      seen.push_back(e);
    }
    keyed.emplace_back(std::atan2(d.y, d.x), e);
  }
  std::stable_sort(keyed.begin(), keyed.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<int> out;
  out.reserve(keyed.size());
  for (const auto& k : keyed) out.push_back(k.second);
  return out;
}

void filter_outside_boundary(TopologyGraph& g, const AlphaShape& boundary, EdgeObserver* obs) {
  for (int e : g.alive_edges()) {
    const auto& pts = g.edge(e).path.points;
    const bool inside =
        std::all_of(pts.begin(), pts.end(), [&](Point2 p) { return boundary.contains(p); });
    if (inside) continue;
    g.remove_edge(e);
    if (obs) obs->edge_removed(g, e, RemovalReason::Boundary);
  }
  if (g.alive_edge_count() == 0)
    throw EmptyGraph("filter_outside_boundary", "no Voronoi edge lies inside the map boundary");
}

std::vector<int> remove_low_clearance_edges(TopologyGraph& g, double min_clearance,
                                            EdgeObserver* obs) {
  std::vector<int> removed;
  for (int e : g.alive_edges()) {
    if (g.edge(e).min_clearance >= min_clearance) continue;
    g.remove_edge(e);
    removed.push_back(e);
  }
  if (obs)
    for (int e : removed) obs->edge_removed(g, e, RemovalReason::Clearance);
  return removed;
}

void join_degree_two(TopologyGraph& g, EdgeObserver* obs) {
  std::vector<int> order(g.vertices().size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const Point2 pa = g.vertex(a).pos;
    const Point2 pb = g.vertex(b).pos;
    if (pa.x != pb.x) return pa.x > pb.x;
    if (pa.y != pb.y) return pa.y > pb.y;
    return a > b;
  });
  for (int v : order) {
    const auto& inc = g.vertex(v).edges;
    if (inc.size() != 2 || inc[0] == inc[1]) continue;
    const int a = inc[0];
    const int b = inc[1];
    const int u = g.other_end(a, v);
    const int w = g.other_end(b, v);
    Polyline joined = g.path_from(a, u);
    joined.append(g.path_from(b, v));
    const bool a_rev = g.edge(a).from != u;
    const bool b_rev = g.edge(b).from != v;
    const double mc = std::min(g.edge(a).min_clearance, g.edge(b).min_clearance);
    g.remove_edge(a);
    g.remove_edge(b);
    const int j = g.add_edge(u, w, std::move(joined), mc);
    if (obs) obs->edges_joined(g, a, a_rev, b, b_rev, j);
  }
}

void prune_dead_ends(TopologyGraph& g, double min_length, int iterations, EdgeObserver* obs) {
  for (int it = 0; it < iterations; ++it) {
    std::vector<int> cand;
    for (int e : g.alive_edges())
      if (g.is_dead_end_edge(e) && g.edge(e).length < min_length) cand.push_back(e);
    std::stable_sort(cand.begin(), cand.end(),
                     [&](int a, int b) { return g.edge(a).length < g.edge(b).length; });
    bool changed = false;
    for (int e : cand) {
      if (!g.is_dead_end_edge(e)) continue;
      const auto& ed = g.edge(e);
      const int df = g.degree(ed.from);
      const int dt = g.degree(ed.to);
      if (df == 1 && dt == 1) continue;  // last edge of its component
      const int junction = df == 1 ? ed.to : ed.from;
      if (obs) obs->deadend_removing(g, e, junction);
      g.remove_edge(e);
      if (obs) obs->edge_removed(g, e, RemovalReason::DeadEnd);
      changed = true;
    }
    join_degree_two(g, obs);
    if (!changed) break;
  }
}

void keep_largest_component(TopologyGraph& g, EdgeObserver* obs) {
  const int n = static_cast<int>(g.vertices().size());
  std::vector<int> comp(n, -1);
  std::vector<double> comp_len;
  std::deque<int> queue;
  for (int s = 0; s < n; ++s) {
    if (comp[s] >= 0 || g.degree(s) == 0) continue;
    const int c = static_cast<int>(comp_len.size());
    comp_len.push_back(0.0);
    comp[s] = c;
    queue.push_back(s);
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop_front();
      for (int e : g.vertex(v).edges) {
        const int u = g.other_end(e, v);
        if (comp[u] >= 0) continue;
        comp[u] = c;
        queue.push_back(u);
      }
    }
  }
  if (comp_len.empty()) throw EmptyGraph("keep_largest_component", "graph has no edges");
  for (int e : g.alive_edges()) comp_len[comp[g.edge(e).from]] += g.edge(e).length;
  int best = 0;
  for (int c = 1; c < static_cast<int>(comp_len.size()); ++c)
    if (comp_len[c] > comp_len[best]) best = c;
  for (int e : g.alive_edges()) {
    if (comp[g.edge(e).from] == best) continue;
    g.remove_edge(e);
    if (obs) obs->edge_removed(g, e, RemovalReason::Component);
  }
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

void merge_close_vertices(TopologyGraph& g, double merge_dist, EdgeObserver* obs,
                          const ClearanceFn& clearance) {
  if (!(merge_dist > 0.0)) return;
  const std::vector<int> alive = g.alive_vertices();
  const int n = static_cast<int>(g.vertices().size());
  UnionFind uf(n);

  std::unordered_map<SnapKey, std::vector<int>, SnapKeyHash> grid;
  auto cell_of = [&](Point2 p) {
    return SnapKey{static_cast<std::int64_t>(std::floor(p.x / merge_dist)),
                   static_cast<std::int64_t>(std::floor(p.y / merge_dist))};
  };
  for (int v : alive) grid[cell_of(g.vertex(v).pos)].push_back(v);
  const double md2 = merge_dist * merge_dist;
  for (int v : alive) {
    const Point2 p = g.vertex(v).pos;
    const SnapKey c = cell_of(p);
    for (std::int64_t dx = -1; dx <= 1; ++dx)
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        auto it = grid.find(SnapKey{c.x + dx, c.y + dy});
        if (it == grid.end()) continue;
        for (int u : it->second)
          if (u > v && dist2(p, g.vertex(u).pos) < md2) uf.unite(u, v);
      }
  }

  std::unordered_map<int, std::vector<int>> clusters;
  for (int v : alive) clusters[uf.find(v)].push_back(v);
  std::vector<int> roots;
  for (const auto& [r, members] : clusters)
    if (members.size() > 1) roots.push_back(r);
  std::sort(roots.begin(), roots.end());

  auto in_cluster = [&](int v, int r) { return v < n && uf.find(v) == r; };
  std::vector<int> new_loops;
  for (int r : roots) {
    const auto& members = clusters[r];
    Point2 c{};
    double cl_sum = 0.0;
    for (int v : members) {
      c = c + g.vertex(v).pos;
      cl_sum += g.vertex(v).clearance;
    }
    c = c / static_cast<double>(members.size());
    const double cc = clearance ? clearance(c) : cl_sum / static_cast<double>(members.size());
    const int nv = g.add_vertex(c, cc);

    std::vector<int> inc;
    for (int v : members)
      for (int e : g.vertex(v).edges)
        if (std::find(inc.begin(), inc.end(), e) == inc.end()) inc.push_back(e);
    for (int e : inc) {
      TopoEdge& ed = g.edge_mut(e);
      const bool f_in = in_cluster(ed.from, r);
      const bool t_in = in_cluster(ed.to, r);
      Polyline& p = ed.path;
      if (f_in && !(p.points.front() == c)) {
        p.points.insert(p.points.begin(), c);
        p.clearance.insert(p.clearance.begin(), cc);
        p.segment_halfedge.insert(p.segment_halfedge.begin(), -1);
      }
      if (t_in && !(p.points.back() == c)) {
        p.points.push_back(c);
        p.clearance.push_back(cc);
        p.segment_halfedge.push_back(-1);
      }
      for (int* end : {&ed.from, &ed.to}) {
        if (!in_cluster(*end, r)) continue;
        auto& list = g.vertex_mut(*end).edges;
        list.erase(std::find(list.begin(), list.end(), e));
        *end = nv;
        g.vertex_mut(nv).edges.push_back(e);
      }
      ed.length = p.length();
      ed.min_clearance = std::min(ed.min_clearance, cc);
      if (ed.is_loop() && ed.length < merge_dist) new_loops.push_back(e);
    }
  }

  std::sort(new_loops.begin(), new_loops.end());
  new_loops.erase(std::unique(new_loops.begin(), new_loops.end()), new_loops.end());
  for (int e : new_loops) {
    const int v = g.edge(e).from;
    if (obs) obs->self_loop_dropping(g, e, v);
    g.remove_edge(e);
    if (obs) obs->edge_removed(g, e, RemovalReason::SelfLoop);
  }
}

TopologyParams TopologyParams::from_meters(double resolution, double min_clearance_m,
                                           double deadend_min_length_m, int iterations,
                                           double merge_dist_m) {
  if (!(resolution > 0.0)) throw InvalidArgument("TopologyParams", "resolution must be positive");
  if (iterations < 0) throw InvalidArgument("TopologyParams", "iterations must be >= 0");
  TopologyParams p;
  p.min_clearance_px = min_clearance_m / resolution;
  p.deadend_min_length_px = deadend_min_length_m / resolution;
  p.iterations = iterations;
  p.merge_dist_px = merge_dist_m / resolution;
  return p;
}

}  // namespace areagraph
