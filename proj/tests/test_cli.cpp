#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "areagraph/error.hpp"
#include "areagraph/export.hpp"
#include "areagraph/render.hpp"
#include "areagraph/synth.hpp"
#include "support.hpp"

using namespace areagraph;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const char* name) {
  const fs::path d = fs::temp_directory_path() / "areagraph_tests" / "cli" / name;
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

std::size_t count_of(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto i = s.find(needle); i != std::string::npos; i = s.find(needle, i + 1)) ++n;
  return n;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("synthetic maps are deterministic and match the flood-fill count") {
    SynthSpec spec;
    spec.seed = 21;
    spec.rooms = 3;
    spec.rooms_per_row = 2;
    const SynthMap a = generate_synth(spec);
    const SynthMap b = generate_synth(spec);
    CHECK(a.map == b.map);
    CHECK(a.truth == b.truth);
    const double radius = std::sqrt(testsupport::suite_params(a).alpha);
    CHECK(testsupport::disk_flood_count(a.map, radius) == 4);

    const fs::path d = scratch("synth");
    save_synth(d / "a", a);
    save_synth(d / "b", b);
    CHECK(slurp(d / "a.pgm") == slurp(d / "b.pgm"));
    CHECK(slurp(d / "a_truth.pgm") == slurp(d / "b_truth.pgm"));

    // Noise only turns unknown margin cells into occupied specks.
    spec.noise = 0.0;
    const SynthMap clean = generate_synth(spec);
    spec.noise = 0.05;
    const SynthMap noisy = generate_synth(spec);
    REQUIRE(clean.map.width() == noisy.map.width());
    long specks = 0;
    long isolated_clean = 0;
    for (int r = 0; r < clean.map.height(); ++r)
      for (int c = 0; c < clean.map.width(); ++c) {
        const Occupancy a0 = clean.map.at(c, r);
        const Occupancy b0 = noisy.map.at(c, r);
        if (a0 != b0) {
          CHECK(a0 == Occupancy::Unknown);
          CHECK(b0 == Occupancy::Occupied);
          ++specks;
        }
        if (a0 != Occupancy::Occupied) continue;
        bool all_unknown = true;
        for (int dr = -1; dr <= 1; ++dr)
          for (int dc = -1; dc <= 1; ++dc)
            if ((dr || dc) && clean.map.in_bounds(c + dc, r + dr))
              all_unknown = all_unknown && clean.map.at(c + dc, r + dr) == Occupancy::Unknown;
        isolated_clean += all_unknown;
      }
    CHECK(specks > 0);
    CHECK(isolated_clean == 0);
  }

  TEST_CASE("infeasible synthetic specs are rejected") {
    SynthSpec spec;
    spec.door_min = 120;
    spec.door_max = 130;
    CHECK_THROWS_AS(generate_synth(spec), InvalidArgument);
  }

  TEST_CASE("area graph JSON is complete and byte-stable") {
    const SynthMap m = generate_synth(testsupport::suite_spec(2));
    const SegmentResult r1 = segment_map(m.map, testsupport::suite_params(m));
    const SegmentResult r2 = segment_map(m.map, testsupport::suite_params(m));
    const auto j1 = area_graph_json(r1.areas, m.map);
    const auto j2 = area_graph_json(r2.areas, m.map);
    CHECK_NOTHROW(validate_area_graph_json(j1));
    CHECK(j1.dump() == j2.dump());
    CHECK(j1["areas"].size() == r1.areas.areas.size());
    CHECK(j1["passages"].size() == r1.areas.passages.size());

    auto broken = j1;
    broken["areas"][0].erase("room_id");
    CHECK_THROWS_AS(validate_area_graph_json(broken), InvalidArgument);

    const PassageGraph pv = build_passage_graph(r1.areas, RoadmapVariant::TopoVoronoi, m.map, r1.graph);
    const auto pj = passage_graph_json(pv, true);
    CHECK_NOTHROW(validate_passage_graph_json(pj));
    CHECK(pj["edges"].size() == pv.edges.size());
    if (!pv.edges.empty()) CHECK(pj["edges"][0].contains("polyline"));
  }

  TEST_CASE("SVG and PNG renders") {
    const SynthMap m = generate_synth(testsupport::suite_spec(2));
    const SegmentResult r = segment_map(m.map, testsupport::suite_params(m));
    SvgLayers layers;
    layers.graph = &r.graph;
    const std::string svg = render_svg(m.map, r.areas, layers);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(count_of(svg, "<path id=\"area") == r.areas.areas.size());
    CHECK(count_of(svg, "<line ") == r.areas.passages.size());
    CHECK(svg == render_svg(m.map, r.areas, layers));

    const fs::path png = scratch("render") / "seg.png";
    save_segmentation_png(png, m.map, r.areas);
    const GrayImage back = load_gray_image(png);
    CHECK(back.width == m.map.width());
    CHECK(back.height == m.map.height());
    // Same room id, same color.
    for (const Area& a : r.areas.areas) {
      Area copy = a;
      copy.id += 100;
      if (a.room_id >= 0) CHECK(area_color(copy) == area_color(a));
    }
  }

  TEST_CASE("query files and bench CSV") {
    const fs::path q = scratch("bench") / "q.txt";
    std::ofstream(q) << "# sx,sy,gx,gy\n1,2,3,4\n\n 0.5, 0.5 ,1.5,2.5\n";
    const auto qs = read_queries(q);
    REQUIRE(qs.size() == 2);
    CHECK(qs[1].start.x == 0.5);
    CHECK(qs[1].goal.y == 2.5);
    std::ofstream(q) << "1,2,3\n";
    CHECK_THROWS_AS(read_queries(q), InvalidArgument);

    CHECK(bench_csv({}) == "id,grid_m,astarp_m,vorop_m,grid_ms,astarp_ms,vorop_ms,rooms_crossed\n");

    const SynthMap m = generate_synth(testsupport::suite_spec(12));
    const SegmentResult r = segment_map(m.map, testsupport::suite_params(m));
    const PassageGraph pa = build_passage_graph(r.areas, RoadmapVariant::GridAStar, m.map, r.graph);
    const PassageGraph pv = build_passage_graph(r.areas, RoadmapVariant::TopoVoronoi, m.map, r.graph);
    std::vector<Cell> cells;
    for (int y = 0; y < m.map.height(); ++y)
      for (int x = 0; x < m.map.width(); ++x)
        if (m.map.is_free(x, y) && r.areas.label(x, y) >= 0) cells.push_back({x, y});
    std::vector<BenchRow> rows;
    for (int i = 0; i < 7; ++i) {
      const Cell a = cells[(i * 7919) % cells.size()];
      const Cell b = cells[(i * 104729 + 17) % cells.size()];
      const Query query{m.map.pixel_to_world(GridMap::cell_center(a.c, a.r)),
                        m.map.pixel_to_world(GridMap::cell_center(b.c, b.r))};
      rows.push_back(bench_query(i, m.map, pa, pv, query));
      CHECK(rows.back().error.empty());
      CHECK(rows.back().grid_m <= rows.back().astarp_m + 1e-9);
    }
    const std::string csv = bench_csv(rows);
    CHECK(count_of(csv, "\n") == 8);

    BenchRow failed;
    failed.id = 9;
    failed.error = "no path";
    const std::string row = bench_csv(std::vector<BenchRow>{failed});
    CHECK(row.substr(row.find('\n') + 1) == "9,,,,0.000,0.000,0.000,\n");

    const BenchRow wall = bench_query(0, m.map, pa, pv, {{-100.0, -100.0}, {0.0, 0.0}});
    CHECK_FALSE(wall.error.empty());
  }
}
