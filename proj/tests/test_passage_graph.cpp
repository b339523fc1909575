#include <doctest.h>

#include <cmath>
#include <map>
#include <queue>
#include <random>

#include "areagraph/error.hpp"
#include "areagraph/passage_graph.hpp"
#include "areagraph/pipeline.hpp"
#include "support.hpp"

using namespace areagraph;

namespace {

struct Fixture {
  SynthMap m;
  SegmentResult r;
  PassageGraph astar;
  PassageGraph voronoi;

  explicit Fixture(std::uint64_t seed) : m(generate_synth(testsupport::suite_spec(seed))) {
    r = segment_map(m.map, testsupport::suite_params(m));
    astar = build_passage_graph(r.areas, RoadmapVariant::GridAStar, m.map, r.graph);
    voronoi = build_passage_graph(r.areas, RoadmapVariant::TopoVoronoi, m.map, r.graph);
  }

  std::vector<Cell> labelled_cells() const {
    std::vector<Cell> out;
    for (int y = 0; y < m.map.height(); ++y)
      for (int x = 0; x < m.map.width(); ++x)
        if (m.map.is_free(x, y) && r.areas.label(x, y) >= 0) out.push_back({x, y});
    return out;
  }

  Point2 world(Cell c) const { return m.map.pixel_to_world(GridMap::cell_center(c.c, c.r)); }
};

double polyline_len(const std::vector<Point2>& p) {
  double s = 0.0;
  for (std::size_t i = 1; i < p.size(); ++i) s += dist(p[i - 1], p[i]);
  return s;
}

// Dijkstra over the waypoint graph with every consecutive chain pair as an
// edge, ignoring areas.
double flat_distance(const WaypointGraph& wg, int s, int t) {
  std::vector<std::vector<std::pair<int, double>>> adj(wg.points.size());
  for (const auto& ch : wg.chains)
    for (std::size_t i = 1; i < ch.nodes.size(); ++i) {
      const int a = ch.nodes[i - 1];
      const int b = ch.nodes[i];
      const double d = dist(wg.points[a], wg.points[b]);
      adj[a].push_back({b, d});
      adj[b].push_back({a, d});
    }
  std::vector<double> d(wg.points.size(), kNoPath);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  d[s] = 0.0;
  pq.push({0.0, s});
  while (!pq.empty()) {
    const auto [du, u] = pq.top();
    pq.pop();
    if (du > d[u]) continue;
    for (const auto& [v, w] : adj[u])
      if (du + w < d[v]) {
        d[v] = du + w;
        pq.push({d[v], v});
      }
  }
  return d[t];
}

}  // namespace

TEST_SUITE("passage_graph") {
  TEST_CASE("every passage pair of an area gets an edge") {
    const Fixture f(7);
    std::size_t expected = 0;
    for (const auto& ps : f.r.areas.area_passages) expected += ps.size() * (ps.size() - 1) / 2;
    CHECK(f.astar.edges.size() == expected);
    CHECK(f.voronoi.edges.size() == expected);
    CHECK(f.astar.warnings.empty());
    CHECK(f.voronoi.warnings.empty());
    const double res = f.m.map.resolution();
    for (const PassageGraph* pg : {&f.astar, &f.voronoi})
      for (const PassageEdge& e : pg->edges) {
        const auto pts = e.points(pg->waypoints);
        REQUIRE(pts.size() >= 2);
        CHECK(pts.front() == pg->vertex_pos[e.a]);
        CHECK(pts.back() == pg->vertex_pos[e.b]);
        CHECK(e.length_m == doctest::Approx(polyline_len(pts) * res).epsilon(1e-9));
        const auto& ps = f.r.areas.area_passages[e.area];
        CHECK(std::find(ps.begin(), ps.end(), e.a) != ps.end());
        CHECK(std::find(ps.begin(), ps.end(), e.b) != ps.end());
      }
    for (const PassageEdge& e : f.astar.edges) {
      const double oracle = bfs_oracle(f.m.map, f.astar.vertex_cell[e.a], f.astar.vertex_cell[e.b]);
      CHECK(e.length_m >= oracle - 1e-9);
    }
  }

  TEST_CASE("waypoint search equals a flat Dijkstra when unrestricted") {
    const Fixture f(9);
    const WaypointGraph& wg = f.voronoi.waypoints;
    std::mt19937 rng(3);
    for (int q = 0; q < 20; ++q) {
      const int s = static_cast<int>(rng() % wg.points.size());
      std::vector<int> targets;
      for (int k = 0; k < 4; ++k) targets.push_back(static_cast<int>(rng() % wg.points.size()));
      const auto paths = wg.shortest_paths(s, targets, -1);
      for (std::size_t k = 0; k < targets.size(); ++k) {
        const double ref = flat_distance(wg, s, targets[k]);
        if (ref == kNoPath) {
          CHECK_FALSE(paths[k].found());
          continue;
        }
        REQUIRE(paths[k].found());
        CHECK(paths[k].length == doctest::Approx(ref).epsilon(1e-9));
        const auto pts = wg.points_of(paths[k]);
        CHECK(pts.front() == wg.points[s]);
        CHECK(pts.back() == wg.points[targets[k]]);
        CHECK(polyline_len(pts) == doctest::Approx(ref).epsilon(1e-9));
      }
    }
  }

  TEST_CASE("queries report areas and lengths consistently") {
    const Fixture f(11);
    const auto cells = f.labelled_cells();
    std::mt19937 rng(5);
    for (int q = 0; q < 15; ++q) {
      const Cell a = cells[rng() % cells.size()];
      const Cell b = cells[rng() % cells.size()];
      const PlanResult g = plan_grid(f.m.map, f.world(a), f.world(b));
      for (const PassageGraph* pg : {&f.astar, &f.voronoi}) {
        const PlanResult p = plan(*pg, f.world(a), f.world(b));
        REQUIRE(p.found);
        CHECK(p.rooms_crossed() == static_cast<int>(p.areas.size()) - 1);
        for (std::size_t i = 1; i < p.areas.size(); ++i) {
          const auto& nb = f.r.areas.neighbors[p.areas[i - 1]];
          CHECK(std::find(nb.begin(), nb.end(), p.areas[i]) != nb.end());
        }
        CHECK(p.path.front().x == doctest::Approx(f.world(a).x));
        CHECK(p.path.back().y == doctest::Approx(f.world(b).y));
        if (pg == &f.astar) CHECK(p.length_m >= g.length_m - 1e-9);
      }
    }
  }

  TEST_CASE("same-room queries stay within one cell of the grid optimum") {
    const Fixture f(11);
    const double res = f.m.map.resolution();
    std::mt19937 rng(8);
    const auto cells = f.labelled_cells();
    int same = 0;
    for (int q = 0; q < 400 && same < 10; ++q) {
      const Cell a = cells[rng() % cells.size()];
      const Cell b = cells[rng() % cells.size()];
      if (f.r.areas.label(a.c, a.r) != f.r.areas.label(b.c, b.r)) continue;
      ++same;
      const PlanResult g = plan_grid(f.m.map, f.world(a), f.world(b));
      const PlanResult p = plan(f.astar, f.world(a), f.world(b));
      REQUIRE(p.found);
      CHECK(p.rooms_crossed() == 0);
      CHECK(std::abs(p.length_m - g.length_m) <= res * std::sqrt(2.0) + 1e-9);
    }
    CHECK(same == 10);
  }

  TEST_CASE("degenerate queries") {
    const Fixture f(11);
    const auto cells = f.labelled_cells();
    const Point2 w = f.world(cells[cells.size() / 2]);
    const PlanResult zero = plan(f.voronoi, w, w);
    CHECK(zero.found);
    CHECK(zero.length_m == 0.0);
    Cell wall{-1, -1};
    for (int x = 0; x < f.m.map.width() && wall.c < 0; ++x)
      for (int y = 0; y < f.m.map.height(); ++y)
        if (f.m.map.at(x, y) == Occupancy::Occupied) {
          wall = {x, y};
          break;
        }
    CHECK_THROWS_AS(plan(f.voronoi, f.world(wall), w), NoArea);
    CHECK_THROWS_AS(plan(f.astar, w, f.world(wall)), NoArea);
    CHECK_FALSE(plan_grid(f.m.map, f.world(wall), w).found);
  }
}
