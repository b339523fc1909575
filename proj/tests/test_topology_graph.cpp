#include <doctest.h>

#include <deque>

#include "areagraph/error.hpp"
#include "areagraph/pipeline.hpp"
#include "areagraph/topology_graph.hpp"
#include "support.hpp"

using namespace areagraph;

namespace {

Polyline straight(std::vector<Point2> pts, double clearance = 5.0) {
  Polyline p;
  p.points = std::move(pts);
  p.clearance.assign(p.points.size(), clearance);
  p.segment_halfedge.assign(p.points.size() - 1, -1);
  return p;
}

int link(TopologyGraph& g, int a, int b, double clearance = 5.0) {
  return g.add_edge(a, b, straight({g.vertex(a).pos, g.vertex(b).pos}, clearance), clearance);
}

int components(const TopologyGraph& g) {
  const int n = static_cast<int>(g.vertices().size());
  std::vector<char> seen(n, 0);
  int count = 0;
  for (int s = 0; s < n; ++s) {
    if (seen[s] || g.degree(s) == 0) continue;
    ++count;
    std::deque<int> q{s};
    seen[s] = 1;
    while (!q.empty()) {
      const int v = q.front();
      q.pop_front();
      for (int e : g.vertex(v).edges)
        if (const int u = g.other_end(e, v); !seen[u]) {
          seen[u] = 1;
          q.push_back(u);
        }
    }
  }
  return count;
}

}  // namespace

TEST_SUITE("topology_graph") {
  TEST_CASE("joining degree-two vertices concatenates paths") {
    TopologyGraph g;
    const int a = g.add_vertex({0, 0}, 5);
    const int b = g.add_vertex({3, 0}, 5);
    const int c = g.add_vertex({3, 4}, 5);
    link(g, a, b);
    link(g, b, c, 2.0);
    join_degree_two(g);
    REQUIRE(g.alive_edge_count() == 1);
    const TopoEdge& e = g.edge(g.alive_edges().front());
    CHECK(e.length == doctest::Approx(7.0));
    CHECK(e.min_clearance == doctest::Approx(2.0));
    CHECK(e.path.points.size() == 3);
    CHECK(g.degree(b) == 0);
  }

  TEST_CASE("a pure cycle collapses to one self-loop") {
    TopologyGraph g;
    const int a = g.add_vertex({0, 0}, 5);
    const int b = g.add_vertex({1, 0}, 5);
    const int c = g.add_vertex({0, 1}, 5);
    link(g, a, b);
    link(g, b, c);
    link(g, c, a);
    join_degree_two(g);
    REQUIRE(g.alive_edge_count() == 1);
    const TopoEdge& e = g.edge(g.alive_edges().front());
    CHECK(e.is_loop());
    CHECK(e.length == doctest::Approx(2.0 + std::sqrt(2.0)));
  }

  TEST_CASE("short dead ends go, long ones stay") {
    // Star: long arms of length 10 and one spur of length 2.
    TopologyGraph g;
    const int o = g.add_vertex({0, 0}, 5);
    const int e1 = g.add_vertex({10, 0}, 5);
    const int e2 = g.add_vertex({-10, 0}, 5);
    const int e3 = g.add_vertex({0, 10}, 5);
    const int spur = g.add_vertex({0, -2}, 5);
    link(g, o, e1);
    link(g, o, e2);
    link(g, o, e3);
    link(g, o, spur);
    prune_dead_ends(g, 5.0, 3);
    CHECK(g.degree(spur) == 0);
    CHECK(g.degree(o) == 3);
    CHECK(g.alive_edge_count() == 3);
  }

  TEST_CASE("an isolated edge survives dead-end pruning") {
    TopologyGraph g;
    const int a = g.add_vertex({0, 0}, 5);
    const int b = g.add_vertex({1, 0}, 5);
    link(g, a, b);
    prune_dead_ends(g, 5.0, 3);
    CHECK(g.alive_edge_count() == 1);
  }

  TEST_CASE("low clearance edges are removed") {
    TopologyGraph g;
    const int a = g.add_vertex({0, 0}, 5);
    const int b = g.add_vertex({1, 0}, 5);
    const int c = g.add_vertex({2, 0}, 5);
    const int thin = link(g, a, b, 0.5);
    link(g, b, c, 3.0);
    const auto removed = remove_low_clearance_edges(g, 1.0);
    REQUIRE(removed.size() == 1);
    CHECK(removed.front() == thin);
    CHECK_FALSE(g.edge(thin).alive);
  }

  TEST_CASE("largest component by length is kept") {
    TopologyGraph g;
    const int a = g.add_vertex({0, 0}, 5);
    const int b = g.add_vertex({10, 0}, 5);
    const int c = g.add_vertex({20, 20}, 5);
    const int d = g.add_vertex({21, 20}, 5);
    link(g, a, b);
    const int small = link(g, c, d);
    keep_largest_component(g);
    CHECK_FALSE(g.edge(small).alive);
    CHECK(g.alive_edge_count() == 1);
    TopologyGraph empty;
    CHECK_THROWS_AS(keep_largest_component(empty), EmptyGraph);
  }

  TEST_CASE("close vertices merge into their centroid") {
    TopologyGraph g;
    const int a = g.add_vertex({0, 0}, 5);
    const int b = g.add_vertex({10, 0}, 5);
    const int c = g.add_vertex({10.5, 0.5}, 5);
    const int d = g.add_vertex({20, 0}, 5);
    const int e = g.add_vertex({10, 10}, 5);
    link(g, a, b);
    link(g, b, c);
    link(g, c, d);
    link(g, c, e);
    // The old b-c edge turns into a loop of length ~1.41 through the centroid.
    merge_close_vertices(g, 2.0);
    int near_center = 0;
    for (int v : g.alive_vertices()) {
      const Point2 p = g.vertex(v).pos;
      if (dist(p, {10.25, 0.25}) < 1e-9) {
        ++near_center;
        CHECK(g.degree(v) == 3);
      }
    }
    CHECK(near_center == 1);
    CHECK(g.alive_edge_count() == 3);
  }

  TEST_CASE("pruned graph of a synthetic map satisfies the pruning rules") {
    const SynthMap m = generate_synth(testsupport::suite_spec(7));
    const SegmentParams p = testsupport::suite_params(m);
    const SegmentResult r = segment_map(m.map, p);
    const TopologyGraph& g = r.graph;
    CHECK(components(g) == 1);
    for (int v : g.alive_vertices()) {
      const auto& inc = g.vertex(v).edges;
      const bool loop_only = inc.size() == 2 && inc[0] == inc[1];
      CHECK((g.degree(v) != 2 || loop_only));
    }
    for (int e : g.alive_edges()) {
      const TopoEdge& ed = g.edge(e);
      CHECK(ed.min_clearance >= p.topo.min_clearance_px);
      CHECK(ed.path.points.front() == g.vertex(ed.from).pos);
      CHECK(ed.path.points.back() == g.vertex(ed.to).pos);
      // Every waypoint lies in free space.
      for (Point2 q : ed.path.points) {
        CHECK(m.map.at(static_cast<int>(q.x), static_cast<int>(q.y)) != Occupancy::Occupied);
      }
    }
  }

  TEST_CASE("metric parameters convert to pixels") {
    const TopologyParams t = TopologyParams::from_meters(0.05);
    CHECK(t.min_clearance_px == doctest::Approx(5.0));
    CHECK(t.deadend_min_length_px == doctest::Approx(20.0));
    CHECK(t.merge_dist_px == doctest::Approx(6.0));
    CHECK(t.iterations == 3);
    CHECK_THROWS_AS(TopologyParams::from_meters(0.0), InvalidArgument);
  }
}
