#include <doctest.h>

#include <random>

#include "areagraph/alpha_shape.hpp"
#include "areagraph/geometry.hpp"
#include "areagraph/mapio.hpp"
#include "areagraph/voronoi.hpp"
#include "support.hpp"

using namespace areagraph;

namespace {

Ring square(double x0, double y0, double s) {
  return {{x0, y0}, {x0 + s, y0}, {x0 + s, y0 + s}, {x0, y0 + s}};
}

}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("signed area and containment with holes") {
    Polygon p{square(0, 0, 4), {}};
    CHECK(signed_area(p.outer) == doctest::Approx(16.0));
    Ring hole = square(1, 1, 2);
    std::reverse(hole.begin(), hole.end());
    p.holes.push_back(hole);
    CHECK(area(p) == doctest::Approx(12.0));
    CHECK(point_in_polygon({0.5, 0.5}, p));
    CHECK_FALSE(point_in_polygon({2.0, 2.0}, p));
    CHECK_FALSE(point_in_polygon({5.0, 2.0}, p));
  }

  TEST_CASE("segment intersection parameters") {
    const auto hit = segment_intersection({0, 0}, {2, 0}, {1, -1}, {1, 1});
    REQUIRE(hit.has_value());
    CHECK(hit->first == doctest::Approx(0.5));
    CHECK(hit->second == doctest::Approx(0.5));
    CHECK_FALSE(segment_intersection({0, 0}, {1, 0}, {0, 1}, {1, 1}).has_value());
  }

  TEST_CASE("point to segment distance") {
    CHECK(dist_point_segment({1, 1}, {0, 0}, {2, 0}) == doctest::Approx(1.0));
    CHECK(dist_point_segment({3, 0}, {0, 0}, {2, 0}) == doctest::Approx(1.0));
  }

  TEST_CASE("union of a tiling keeps its area") {
    std::vector<Polygon> tiles;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 2; ++j) tiles.push_back({square(i, j, 1), {}});
    const Polygon u = polygon_union(tiles);
    CHECK(area(u) == doctest::Approx(6.0));
    CHECK(u.holes.empty());

    // Ring of 8 squares around a missing center: one hole.
    std::vector<Polygon> ring;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (i != 1 || j != 1) ring.push_back({square(i, j, 1), {}});
    const auto parts = polygon_union_all(ring);
    REQUIRE(parts.size() == 1);
    CHECK(parts[0].holes.size() == 1);
    CHECK(area(parts[0]) == doctest::Approx(8.0));
  }

  TEST_CASE("split along a chord conserves area") {
    const Polygon p{square(0, 0, 4), {}};
    const auto [a, b] = split_polygon(p, {{0, 1}, {4, 3}});
    CHECK(area(a) + area(b) == doctest::Approx(16.0));
    CHECK(std::min(area(a), area(b)) == doctest::Approx(8.0));
  }

  TEST_CASE("voronoi vertices are empty-circle centers") {
    std::mt19937 rng(11);
    SiteSet s;
    s.width = 40;
    s.height = 40;
    std::uniform_int_distribution<int> d(0, 39);
    for (int i = 0; i < 60; ++i) s.sites.push_back({d(rng) + 0.5, d(rng) + 0.5});
    // Duplicates are allowed in the input but make the oracle ambiguous.
    std::sort(s.sites.begin(), s.sites.end(),
              [](Point2 a, Point2 b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });
    s.sites.erase(std::unique(s.sites.begin(), s.sites.end()), s.sites.end());
    const VoronoiGraph vd = compute_voronoi(s);
    int checked = 0;
    for (std::size_t w = 0; w < vd.waypoints.size(); ++w) {
      if (vd.is_clip[w]) continue;
      const Point2 p = vd.waypoints[w];
      double nearest = 1e300;
      for (Point2 q : s.sites) nearest = std::min(nearest, dist(p, q));
      CHECK(vd.clearance[w] == doctest::Approx(nearest).epsilon(1e-9));
      const auto face = vd.dual_face(static_cast<int>(w));
      CHECK(face.size() >= 3);
      for (int site : face) CHECK(dist(p, vd.sites[site]) == doctest::Approx(nearest).epsilon(1e-9));
      ++checked;
    }
    CHECK(checked > 50);
    for (std::size_t h = 0; h < vd.halfedges.size(); ++h) {
      const int t = VoronoiGraph::twin(static_cast<int>(h));
      CHECK(vd.halfedges[h].source == vd.halfedges[t].target);
    }
  }

  TEST_CASE("too few sites are rejected") {
    SiteSet s;
    s.width = 10;
    s.height = 10;
    s.sites = {{1.5, 1.5}, {2.5, 2.5}, {3.5, 3.5}};
    CHECK_THROWS(compute_voronoi(s));
  }

  TEST_CASE("alpha shapes find the rooms a disk can reach") {
    // Two 20x20 rooms joined by a 4-cell door. A disk of radius 4 cannot pass.
    GridMap m = testsupport::box_map(43, 22);
    for (int r = 0; r < 22; ++r) m.set(21, r, Occupancy::Occupied);
    for (int r = 9; r < 13; ++r) m.set(21, r, Occupancy::Free);
    const SiteSet s = extract_sites(m);
    const AlphaShapeSet narrow = compute_alpha_shapes(s, 16.0);
    CHECK(narrow.rooms().size() == 2);
    CHECK(testsupport::disk_flood_count(m, 4.0) == 2);
    // A disk of radius 1.5 slides through the door.
    const AlphaShapeSet wide = compute_alpha_shapes(s, 2.25);
    CHECK(wide.rooms().size() == 1);
    CHECK(testsupport::disk_flood_count(m, 1.5) == 1);
    for (const AlphaShape& room : narrow.rooms()) {
      CHECK(room.area > 0.0);
      CHECK(room.area < narrow.boundary().area);
    }
  }
}
