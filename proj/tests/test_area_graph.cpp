#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "areagraph/area_graph.hpp"
#include "areagraph/error.hpp"
#include "areagraph/pipeline.hpp"
#include "support.hpp"

using namespace areagraph;

TEST_SUITE("area_graph") {
  TEST_CASE("alpha bounds from door and corridor widths") {
    // 1.64 m doors, 2.42 m corridors at 5 cm cells: (32.8/2)^2 and (48.4/2)^2.
    const auto [lo, hi] = alpha_bounds(1.64, 2.42, 0.05);
    CHECK(std::abs(lo - 268.96) <= 1e-9);
    CHECK(std::abs(hi - 585.64) <= 1e-9);
    const auto [lo2, hi2] = alpha_bounds_px(14.0, 20.0);
    CHECK(std::abs(lo2 - 49.0) <= 1e-9);
    CHECK(std::abs(hi2 - 100.0) <= 1e-9);
    CHECK_THROWS_AS(alpha_bounds(2.0, 2.0, 0.05), InvalidArgument);
    CHECK_THROWS_AS(alpha_bounds(2.5, 2.0, 0.05), InvalidArgument);
  }

  TEST_CASE("two rooms off one corridor") {
    SynthSpec spec;
    spec.seed = 5;
    spec.rooms = 2;
    spec.rooms_per_row = 1;
    const SynthMap m = generate_synth(spec);
    const SegmentResult r = segment_map(m.map, testsupport::suite_params(m));
    const AreaGraph& ag = r.areas;
    const double radius = std::sqrt(testsupport::suite_params(m).alpha);

    CHECK(static_cast<int>(ag.areas.size()) == testsupport::disk_flood_count(m.map, radius));
    CHECK(ag.areas.size() == 3);
    CHECK(ag.passages.size() == 2);
    CHECK(ag.room_count() >= 2);
    for (int t = 0; t <= m.room_count; ++t) CHECK(testsupport::best_iou(m, ag, t) >= 0.85);

    for (const Passage& p : ag.passages) {
      CHECK(p.a != p.b);
      const auto& na = ag.neighbors[p.a];
      CHECK(std::find(na.begin(), na.end(), p.b) != na.end());
      CHECK(p.clearance > 0.0);
    }
    for (std::size_t a = 0; a < ag.areas.size(); ++a) {
      for (int b : ag.neighbors[a]) {
        const auto& nb = ag.neighbors[b];
        CHECK(std::find(nb.begin(), nb.end(), static_cast<int>(a)) != nb.end());
      }
      const Area& area = ag.areas[a];
      CHECK(area.area_m2 == doctest::Approx(area.area_px * 0.05 * 0.05));
      double poly = 0.0;
      for (const Polygon& p : area.polygons) poly += areagraph::area(p);
      CHECK(poly == doctest::Approx(area.area_px).epsilon(1e-6));
    }
  }

  TEST_CASE("point location") {
    const SynthMap m = generate_synth(testsupport::suite_spec(3));
    const SegmentResult r = segment_map(m.map, testsupport::suite_params(m));
    int checked = 0;
    for (int y = 0; y < m.map.height(); y += 7)
      for (int x = 0; x < m.map.width(); x += 7) {
        const Point2 px = GridMap::cell_center(x, y);
        if (m.map.at(x, y) == Occupancy::Occupied) {
          CHECK_THROWS_AS(locate_area_px(r.areas, m.map, px), NoArea);
        } else if (const int l = r.areas.label(x, y); l >= 0) {
          CHECK(locate_area_px(r.areas, m.map, px) == l);
          CHECK(locate_area(r.areas, m.map, m.map.pixel_to_world(px)) == l);
          ++checked;
        }
      }
    CHECK(checked > 100);
  }

  TEST_CASE("label raster agrees with the area fans") {
    const SynthMap m = generate_synth(testsupport::suite_spec(4));
    const SegmentResult r = segment_map(m.map, testsupport::suite_params(m));
    const auto labels = rasterize_areas(r.areas.areas, m.map.width(), m.map.height());
    CHECK(labels == r.areas.labels);
    // Spot check: a labelled cell center lies in a fan of its area.
    int checked = 0;
    for (int y = 3; y < m.map.height(); y += 11)
      for (int x = 3; x < m.map.width(); x += 11) {
        const int l = r.areas.label(x, y);
        if (l < 0) continue;
        const Point2 c = GridMap::cell_center(x, y);
        bool inside = false;
        for (const FanTriangle& f : r.areas.areas[l].fans) inside = inside || f.contains(c);
        CHECK(inside);
        ++checked;
      }
    CHECK(checked > 20);
  }
}
