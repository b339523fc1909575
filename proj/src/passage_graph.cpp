#include "areagraph/passage_graph.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <queue>
#include <span>
#include <unordered_map>

#include "areagraph/error.hpp"

namespace areagraph {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

double polyline_length(const std::vector<Point2>& pts) {
  double s = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) s += dist(pts[i - 1], pts[i]);
  return s;
}

std::vector<Point2> cell_centers(const std::vector<Cell>& cells) {
  std::vector<Point2> out;
  out.reserve(cells.size());
  for (Cell c : cells) out.push_back(GridMap::cell_center(c.c, c.r));
  return out;
}

Point2 snap(const GridMap& map, Point2 world) {
  const Cell c = cell_of(map.world_to_pixel(world));
  return GridMap::cell_center(c.c, c.r);
}

// Free cell closest to a passage waypoint, preferring cells of its two areas.
Cell passage_cell(const GridMap& map, const AreaGraph& ag, const Passage& p) {
  const Cell base = cell_of(p.waypoint);
  for (int rad = 1; rad <= 4; ++rad) {
    Cell best{-1, -1};
    double best_d = kNoPath;
    bool best_own = false;
    for (int dr = -rad; dr <= rad; ++dr)
      for (int dc = -rad; dc <= rad; ++dc) {
        const Cell c{base.c + dc, base.r + dr};
        if (!map.is_free(c.c, c.r)) continue;
        const int l = ag.label(c.c, c.r);
        const bool own = l == p.a || l == p.b;
        const double d = dist(GridMap::cell_center(c.c, c.r), p.waypoint);
        if ((own && !best_own) || (own == best_own && d < best_d)) {
          best = c;
          best_d = d;
          best_own = own;
        }
      }
    if (best.c >= 0) return best;
  }
  return base;
}

PassageEdge topo_edge(const WaypointGraph& wg, Point2 from, WaypointGraph::Path route, Point2 to,
                      double res) {
  PassageEdge e;
  e.path = {from, to};
  const Point2 first = wg.points[route.src];
  const Point2 last = route.steps.empty()
                          ? first
                          : wg.points[wg.chains[route.steps.back().chain].nodes[route.steps.back().to]];
  e.length_m = (dist(from, first) + route.length + dist(last, to)) * res;
  e.route = std::move(route);
  return e;
}

}  // namespace

const char* variant_name(RoadmapVariant v) {
  return v == RoadmapVariant::GridAStar ? "grid-astar" : "topo-voronoi";
}

const char* method_name(PlanMethod m) {
  switch (m) {
    case PlanMethod::Grid:
      return "grid";
    case PlanMethod::AStarPassage:
      return "astar-passage";
    case PlanMethod::VoronoiPassage:
      return "voronoi-passage";
  }
  return "?";
}

WaypointGraph WaypointGraph::from_topology(const TopologyGraph& g, const AreaGraph& ag) {
  WaypointGraph wg;
  std::unordered_map<int, int> vnode;
  auto add_point = [&](Point2 p, int chain, int index) {
    wg.points.push_back(p);
    const Cell c = cell_of(p);
    wg.area.push_back(ag.label(c.c, c.r));
    wg.chain_of.push_back(chain);
    wg.chain_index.push_back(index);
    wg.junction_chains.emplace_back();
    return static_cast<int>(wg.points.size()) - 1;
  };
  auto vertex_node = [&](int v) {
    auto it = vnode.find(v);
    if (it != vnode.end()) return it->second;
    const int id = add_point(g.vertex(v).pos, -1, -1);
    vnode.emplace(v, id);
    return id;
  };
  for (int e : g.alive_edges()) {
    const TopoEdge& ed = g.edge(e);
    const auto& pts = ed.path.points;
    const int c = static_cast<int>(wg.chains.size());
    Chain chain;
    chain.nodes.push_back(vertex_node(ed.from));
    for (std::size_t i = 1; i + 1 < pts.size(); ++i)
      chain.nodes.push_back(add_point(pts[i], c, static_cast<int>(i)));
    chain.nodes.push_back(vertex_node(ed.to));
    chain.cum.assign(chain.nodes.size(), 0.0);
    for (std::size_t i = 1; i < chain.nodes.size(); ++i)
      chain.cum[i] =
          chain.cum[i - 1] + dist(wg.points[chain.nodes[i - 1]], wg.points[chain.nodes[i]]);
    wg.junction_chains[chain.nodes.front()].push_back({c, 0});
    wg.junction_chains[chain.nodes.back()].push_back({c, static_cast<int>(chain.nodes.size()) - 1});
    wg.chains.push_back(std::move(chain));
  }

  wg.bw_ = std::max(1, static_cast<int>(std::ceil(ag.width / wg.bucket_)));
  wg.bh_ = std::max(1, static_cast<int>(std::ceil(ag.height / wg.bucket_)));
  wg.buckets_.assign(static_cast<std::size_t>(wg.bw_) * wg.bh_, {});
  for (int i = 0; i < static_cast<int>(wg.points.size()); ++i) {
    const int bx = std::clamp(static_cast<int>(wg.points[i].x / wg.bucket_), 0, wg.bw_ - 1);
    const int by = std::clamp(static_cast<int>(wg.points[i].y / wg.bucket_), 0, wg.bh_ - 1);
    wg.buckets_[static_cast<std::size_t>(by) * wg.bw_ + bx].push_back(i);
  }
  return wg;
}

std::vector<WaypointGraph::Path> WaypointGraph::shortest_paths(int src,
                                                               const std::vector<int>& targets,
                                                               int area) const {
  std::vector<Path> out(targets.size());
  if (src < 0) return out;
  search(src, targets, area, out);
  if (area >= 0) search(src, targets, -1, out);
  return out;
}

// Dijkstra over key points (junctions, source, targets); chains between them
// are walked point by point, so the heap only sees key points.
void WaypointGraph::search(int src, const std::vector<int>& targets, int area,
                           std::vector<Path>& out) const {
  // Key points; the value marks targets still to be reached.
  std::unordered_map<int, bool> key;
  std::size_t remaining = 0;
  for (std::size_t k = 0; k < targets.size(); ++k)
    if (targets[k] >= 0 && !out[k].found() && !key.count(targets[k])) {
      key[targets[k]] = true;
      ++remaining;
    }
  if (remaining == 0) return;
  key.emplace(src, false);

  struct State {
    double d = kNoPath;
    int parent = -1;
    int chain = -1;
    int from_idx = -1;
    int to_idx = -1;
    bool done = false;
  };
  std::unordered_map<int, State> st;
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  st[src].d = 0.0;
  pq.push({0.0, src});
  auto allowed = [&](int n) { return area < 0 || this->area[n] == area || key.count(n) > 0; };

  while (!pq.empty() && remaining > 0) {
    const auto [du, u] = pq.top();
    pq.pop();
    State& su = st[u];
    if (su.done || du > su.d) continue;
    su.done = true;
    if (u != src)
      if (auto k = key.find(u); k != key.end() && k->second) --remaining;

    const std::pair<int, int> here{chain_of[u], chain_index[u]};
    const auto places = chain_of[u] >= 0 ? std::span<const std::pair<int, int>>(&here, 1)
                                          : std::span<const std::pair<int, int>>(junction_chains[u]);
    for (const auto& [c, i] : places) {
      const Chain& ch = chains[c];
      const int len = static_cast<int>(ch.nodes.size());
      for (int dir : {-1, 1}) {
        for (int j = i + dir; j >= 0 && j < len; j += dir) {
          const int n = ch.nodes[j];
          if (!allowed(n)) break;
          if (chain_of[n] >= 0 && !key.count(n)) continue;
          const double nd = du + std::abs(ch.cum[j] - ch.cum[i]);
          State& sn = st[n];
          if (!sn.done && nd < sn.d) {
            sn = {nd, u, c, i, j, false};
            pq.push({nd, n});
          }
          break;
        }
      }
    }
  }

  for (std::size_t k = 0; k < targets.size(); ++k) {
    const int t = targets[k];
    if (t < 0 || out[k].found()) continue;
    auto it = st.find(t);
    if (it == st.end() || !it->second.done) continue;
    Path p;
    p.src = src;
    for (int v = t; v != src; v = st.at(v).parent) {
      const State& sv = st.at(v);
      p.steps.push_back({sv.chain, sv.from_idx, sv.to_idx});
    }
    std::reverse(p.steps.begin(), p.steps.end());
    p.length = it->second.d;
    out[k] = std::move(p);
  }
}

std::vector<Point2> WaypointGraph::points_of(const Path& p) const {
  std::vector<Point2> out;
  if (!p.found()) return out;
  out.push_back(points[p.src]);
  for (const Step& s : p.steps) {
    const Chain& ch = chains[s.chain];
    const int dir = s.to > s.from ? 1 : -1;
    for (int j = s.from + dir; j != s.to + dir; j += dir) out.push_back(points[ch.nodes[j]]);
  }
  return out;
}

std::vector<Point2> PassageEdge::points(const WaypointGraph& wg) const {
  if (!route.found()) return path;
  std::vector<Point2> out{path.front()};
  for (Point2 p : wg.points_of(route)) out.push_back(p);
  out.push_back(path.back());
  return out;
}

int WaypointGraph::nearest_visible(const GridMap& map, Point2 p) const {
  if (points.empty()) return -1;
  const int bx = std::clamp(static_cast<int>(p.x / bucket_), 0, bw_ - 1);
  const int by = std::clamp(static_cast<int>(p.y / bucket_), 0, bh_ - 1);
  std::vector<std::pair<double, int>> pending;
  std::size_t next = 0;
  auto try_pending = [&](double limit) {
    std::sort(pending.begin() + static_cast<std::ptrdiff_t>(next), pending.end());
    while (next < pending.size() && pending[next].first <= limit) {
      const int id = pending[next++].second;
      if (line_of_sight(map, p, points[id])) return id;
    }
    return -1;
  };
  const int max_ring = std::max(bw_, bh_);
  for (int k = 0; k <= max_ring; ++k) {
    for (int y = by - k; y <= by + k; ++y)
      for (int x = bx - k; x <= bx + k; ++x) {
        if (std::max(std::abs(x - bx), std::abs(y - by)) != k) continue;
        if (x < 0 || y < 0 || x >= bw_ || y >= bh_) continue;
        for (int id : buckets_[static_cast<std::size_t>(y) * bw_ + x])
          pending.push_back({dist(p, points[id]), id});
      }
    // Points in later rings are at least k buckets away.
    if (const int id = try_pending(k * bucket_); id >= 0) return id;
  }
  return try_pending(kNoPath);
}

SearchRegion PassageGraph::region(int area) const {
  SearchRegion r;
  const auto& w = area_window[area];
  r.c0 = w[0];
  r.r0 = w[1];
  r.c1 = w[2];
  r.r1 = w[3];
  r.labels = &ag->labels;
  r.label = area;
  if (variant == RoadmapVariant::GridAStar)
    for (int p : ag->area_passages[area]) r.extra.push_back(vertex_cell[p]);
  return r;
}

PassageGraph build_passage_graph(const AreaGraph& ag, RoadmapVariant variant, const GridMap& map,
                                 const TopologyGraph& tg) {
  const auto t0 = Clock::now();
  PassageGraph pg;
  pg.variant = variant;
  pg.ag = &ag;
  pg.map = &map;
  pg.tg = &tg;
  const std::size_t np = ag.passages.size();
  pg.incident.resize(np);
  pg.vertex_pos.resize(np);

  pg.area_window.assign(ag.areas.size(), {ag.width, ag.height, -1, -1});
  auto grow = [&](int a, Cell c) {
    auto& w = pg.area_window[a];
    w[0] = std::min(w[0], c.c);
    w[1] = std::min(w[1], c.r);
    w[2] = std::max(w[2], c.c);
    w[3] = std::max(w[3], c.r);
  };
  for (int r = 0; r < ag.height; ++r)
    for (int c = 0; c < ag.width; ++c)
      if (const int l = ag.label(c, r); l >= 0) grow(l, {c, r});

  const double res = map.resolution();
  auto add_edge = [&](PassageEdge e) {
    const int id = static_cast<int>(pg.edges.size());
    pg.incident[e.a].push_back(id);
    pg.incident[e.b].push_back(id);
    pg.edges.push_back(std::move(e));
  };
  auto missing = [&](int a, int b, int area) {
    pg.warnings.push_back("no path between passages " + std::to_string(a) + " and " +
                          std::to_string(b) + " in area " + std::to_string(area));
  };

  if (variant == RoadmapVariant::GridAStar) {
    pg.vertex_cell.resize(np);
    for (std::size_t p = 0; p < np; ++p) {
      const Passage& ps = ag.passages[p];
      pg.vertex_cell[p] = passage_cell(map, ag, ps);
      pg.vertex_pos[p] = GridMap::cell_center(pg.vertex_cell[p].c, pg.vertex_cell[p].r);
      grow(ps.a, pg.vertex_cell[p]);
      grow(ps.b, pg.vertex_cell[p]);
    }
    for (std::size_t a = 0; a < ag.areas.size(); ++a) {
      const auto& ps = ag.area_passages[a];
      if (ps.size() < 2) continue;
      const SearchRegion region = pg.region(static_cast<int>(a));
      for (std::size_t i = 0; i + 1 < ps.size(); ++i) {
        std::vector<Cell> targets;
        for (std::size_t j = i + 1; j < ps.size(); ++j) targets.push_back(pg.vertex_cell[ps[j]]);
        const auto paths = grid_paths_to(map, pg.vertex_cell[ps[i]], targets, &region);
        for (std::size_t j = i + 1; j < ps.size(); ++j) {
          const GridPath& gp = paths[j - i - 1];
          if (!gp.found()) {
            missing(ps[i], ps[j], static_cast<int>(a));
            continue;
          }
          add_edge({ps[i], ps[j], static_cast<int>(a), cell_centers(gp.cells), {}, gp.length_m});
        }
      }
    }
  } else {
    pg.waypoints = WaypointGraph::from_topology(tg, ag);
    pg.vertex_waypoint.resize(np);
    for (std::size_t p = 0; p < np; ++p) {
      pg.vertex_pos[p] = ag.passages[p].waypoint;
      pg.vertex_waypoint[p] = pg.waypoints.nearest_visible(map, pg.vertex_pos[p]);
      if (pg.vertex_waypoint[p] < 0)
        pg.warnings.push_back("passage " + std::to_string(p) + " sees no waypoint");
    }
    for (std::size_t a = 0; a < ag.areas.size(); ++a) {
      const auto& ps = ag.area_passages[a];
      for (std::size_t i = 0; i + 1 < ps.size(); ++i) {
        std::vector<int> targets;
        for (std::size_t j = i + 1; j < ps.size(); ++j) targets.push_back(pg.vertex_waypoint[ps[j]]);
        const auto paths =
            pg.waypoints.shortest_paths(pg.vertex_waypoint[ps[i]], targets, static_cast<int>(a));
        for (std::size_t j = i + 1; j < ps.size(); ++j) {
          WaypointGraph::Path path = paths[j - i - 1];
          if (!path.found()) {
            missing(ps[i], ps[j], static_cast<int>(a));
            continue;
          }
          PassageEdge e = topo_edge(pg.waypoints, pg.vertex_pos[ps[i]], path,
                                    pg.vertex_pos[ps[j]], res);
          e.a = ps[i];
          e.b = ps[j];
          e.area = static_cast<int>(a);
          add_edge(std::move(e));
        }
      }
    }
  }
  pg.build_ms = ms_since(t0);
  return pg;
}

VirtualPassage attach_virtual_passage(const PassageGraph& pg, Point2 px,
                                      const VirtualPassage* other) {
  VirtualPassage vp;
  vp.pos = px;
  vp.area = locate_area_px(*pg.ag, *pg.map, px);
  const auto& ps = pg.ag->area_passages[vp.area];
  const bool link_other = other && other->area == vp.area;
  const double res = pg.map->resolution();

  if (pg.variant == RoadmapVariant::GridAStar) {
    std::vector<Cell> targets;
    for (int p : ps) targets.push_back(pg.vertex_cell[p]);
    if (link_other) targets.push_back(cell_of(other->pos));
    const SearchRegion region = pg.region(vp.area);
    const auto paths = grid_paths_to(*pg.map, cell_of(px), targets, &region);
    for (std::size_t k = 0; k < targets.size(); ++k) {
      if (!paths[k].found()) continue;
      const int b = k < ps.size() ? ps[k] : -1;
      vp.edges.push_back({-1, b, vp.area, cell_centers(paths[k].cells), {}, paths[k].length_m});
    }
    return vp;
  }

  const WaypointGraph& wg = pg.waypoints;
  const int src = wg.nearest_visible(*pg.map, px);
  if (src < 0) return vp;
  std::vector<int> targets;
  std::vector<Point2> ends;
  for (int p : ps) {
    targets.push_back(pg.vertex_waypoint[p]);
    ends.push_back(pg.vertex_pos[p]);
  }
  if (link_other) {
    targets.push_back(wg.nearest_visible(*pg.map, other->pos));
    ends.push_back(other->pos);
  }
  const auto paths = wg.shortest_paths(src, targets, vp.area);
  for (std::size_t k = 0; k < targets.size(); ++k) {
    if (!paths[k].found()) continue;
    PassageEdge e = topo_edge(wg, px, paths[k], ends[k], res);
    e.a = -1;
    e.b = k < ps.size() ? ps[k] : -1;
    e.area = vp.area;
    vp.edges.push_back(std::move(e));
  }
  return vp;
}

PlanResult plan(const PassageGraph& pg, Point2 start, Point2 goal) {
  const auto t0 = Clock::now();
  const GridMap& map = *pg.map;
  PlanResult res;
  res.method = pg.variant == RoadmapVariant::GridAStar ? PlanMethod::AStarPassage
                                                       : PlanMethod::VoronoiPassage;
  const Point2 s = snap(map, start);
  const Point2 g = snap(map, goal);
  auto finish = [&](std::vector<Point2> px_path, std::vector<int> areas) {
    res.found = true;
    res.length_m = polyline_length(px_path) * map.resolution();
    for (Point2 p : px_path) res.path.push_back(map.pixel_to_world(p));
    res.areas = std::move(areas);
    res.ms = ms_since(t0);
    return res;
  };

  const int sa = locate_area_px(*pg.ag, map, s);
  const int ga = locate_area_px(*pg.ag, map, g);
  if (s == g) return finish({s}, {sa});
  if (pg.variant == RoadmapVariant::GridAStar && sa == ga) {
    const SearchRegion region = pg.region(sa);
    const GridPath gp = grid_astar(map, cell_of(s), cell_of(g), &region);
    if (gp.found()) return finish(cell_centers(gp.cells), {sa});
  }

  const VirtualPassage vs = attach_virtual_passage(pg, s);
  const VirtualPassage vg = attach_virtual_passage(pg, g, &vs);

  // Nodes: passages 0..n-1, start n, goal n+1.
  const int n = static_cast<int>(pg.vertex_pos.size());
  const int S = n;
  const int G = n + 1;
  struct Arc {
    int to;
    double len;
    const PassageEdge* edge;
    bool reversed;
  };
  std::unordered_map<int, std::vector<Arc>> extra;
  for (const PassageEdge& e : vs.edges) {
    const int b = e.b < 0 ? G : e.b;
    extra[S].push_back({b, e.length_m, &e, false});
    extra[b].push_back({S, e.length_m, &e, true});
  }
  for (const PassageEdge& e : vg.edges) {
    const int b = e.b < 0 ? S : e.b;
    extra[G].push_back({b, e.length_m, &e, false});
    extra[b].push_back({G, e.length_m, &e, true});
  }
  auto pos = [&](int v) { return v == S ? s : v == G ? g : pg.vertex_pos[v]; };
  const double r = map.resolution();

  std::vector<double> d(n + 2, kNoPath);
  std::vector<Arc> via(n + 2, Arc{-1, 0.0, nullptr, false});
  std::vector<int> parent(n + 2, -1);
  std::vector<char> closed(n + 2, 0);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  d[S] = 0.0;
  open.push({dist(s, g) * r, S});
  auto relax = [&](int u, const Arc& a) {
    if (closed[a.to] || d[u] + a.len >= d[a.to]) return;
    d[a.to] = d[u] + a.len;
    parent[a.to] = u;
    via[a.to] = a;
    open.push({d[a.to] + dist(pos(a.to), g) * r, a.to});
  };
  while (!open.empty()) {
    const int u = open.top().second;
    open.pop();
    if (closed[u]) continue;
    closed[u] = 1;
    if (u == G) break;
    if (u < n)
      for (int eid : pg.incident[u]) {
        const PassageEdge& e = pg.edges[eid];
        const bool rev = e.b == u;
        relax(u, {rev ? e.a : e.b, e.length_m, &e, rev});
      }
    if (auto it = extra.find(u); it != extra.end())
      for (const Arc& a : it->second) relax(u, a);
  }
  if (!closed[G]) {
    res.ms = ms_since(t0);
    return res;
  }

  std::vector<const Arc*> arcs;
  for (int v = G; v != S; v = parent[v]) arcs.push_back(&via[v]);
  std::reverse(arcs.begin(), arcs.end());
  std::vector<Point2> path{s};
  std::vector<int> areas;
  for (const Arc* a : arcs) {
    std::vector<Point2> pts = a->edge->points(pg.waypoints);
    if (a->reversed) std::reverse(pts.begin(), pts.end());
    for (Point2 p : pts)
      if (!(p == path.back())) path.push_back(p);
    if (areas.empty() || areas.back() != a->edge->area) areas.push_back(a->edge->area);
  }
  return finish(std::move(path), std::move(areas));
}

PlanResult plan_grid(const GridMap& map, Point2 start, Point2 goal) {
  const auto t0 = Clock::now();
  PlanResult res;
  res.method = PlanMethod::Grid;
  const GridPath gp =
      grid_astar(map, cell_of(map.world_to_pixel(start)), cell_of(map.world_to_pixel(goal)));
  if (gp.found()) {
    res.found = true;
    res.length_m = gp.length_m;
    for (Point2 p : cell_centers(gp.cells)) res.path.push_back(map.pixel_to_world(p));
  }
  res.ms = ms_since(t0);
  return res;
}

}  // namespace areagraph
