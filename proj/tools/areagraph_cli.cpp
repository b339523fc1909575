// areagraph: segment occupancy maps into area graphs and plan over them.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>

#include "areagraph/error.hpp"
#include "areagraph/export.hpp"
#include "areagraph/passage_graph.hpp"
#include "areagraph/pipeline.hpp"
#include "areagraph/render.hpp"
#include "areagraph/synth.hpp"

namespace fs = std::filesystem;
using namespace areagraph;

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kNoPathExit = 2;

struct RunConfig {
  std::string map;
  std::optional<double> alpha;
  std::optional<double> door_width;
  std::optional<double> corridor_width;
  double min_clearance = 0.25;
  double deadend_min_length = 1.0;
  int iterations = 3;
  double merge_dist = 0.3;
  std::string method = "voronoi-passage";
  std::string start;
  std::string goal;
  std::string queries;
  std::string out;
  bool graph_overlay = false;
  bool polylines = false;
};

void add_segment_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--map", cfg.map, "Map YAML (map_server format)")->required();
  cmd->add_option("--alpha", cfg.alpha, "Squared probe radius in pixels^2");
  cmd->add_option("--door-width", cfg.door_width, "Widest door (m)");
  cmd->add_option("--corridor-width", cfg.corridor_width, "Narrowest corridor (m)");
  cmd->add_option("--min-clearance", cfg.min_clearance, "Edge clearance threshold (m)")
      ->capture_default_str();
  cmd->add_option("--deadend-min-length", cfg.deadend_min_length, "Dead-end length threshold (m)")
      ->capture_default_str();
  cmd->add_option("--iterations", cfg.iterations, "Dead-end removal rounds")->capture_default_str();
  cmd->add_option("--merge-dist", cfg.merge_dist, "Vertex merge distance (m)")
      ->capture_default_str();
}

Point2 parse_point(const std::string& s, const char* what) {
  std::string t = s;
  for (char& c : t)
    if (c == ',') c = ' ';
  std::istringstream is(t);
  Point2 p;
  std::string rest;
  if (!(is >> p.x >> p.y) || (is >> rest))
    throw InvalidArgument("cli", std::string(what) + ": expected x,y in meters, got '" + s + "'");
  return p;
}

SegmentParams segment_params(const RunConfig& cfg, const GridMap& map) {
  const bool widths = cfg.door_width || cfg.corridor_width;
  if (cfg.alpha.has_value() == widths)
    throw InvalidArgument("cli", "give either --alpha or both --door-width and --corridor-width");
  SegmentParams p;
  if (cfg.alpha) {
    if (*cfg.alpha <= 0.0) throw InvalidArgument("cli", "--alpha must be positive");
    p.alpha = *cfg.alpha;
  } else {
    if (!cfg.door_width || !cfg.corridor_width)
      throw InvalidArgument("cli", "--door-width and --corridor-width go together");
    const auto [lo, hi] = alpha_bounds(*cfg.door_width, *cfg.corridor_width, map.resolution());
    p.alpha = 0.5 * (lo + hi);
  }
  p.topo = TopologyParams::from_meters(map.resolution(), cfg.min_clearance,
                                       cfg.deadend_min_length, cfg.iterations, cfg.merge_dist);
  return p;
}

struct Segmented {
  GridMap map;
  SegmentResult result;
};

Segmented load_and_segment(const RunConfig& cfg) {
  Segmented s;
  s.map = load_grid_map(cfg.map);
  s.result = segment_map(s.map, segment_params(cfg, s.map));
  return s;
}

std::vector<Point2> to_pixels(const GridMap& map, const std::vector<Point2>& world) {
  std::vector<Point2> out;
  for (Point2 p : world) out.push_back(map.world_to_pixel(p));
  return out;
}

int cmd_segment(const RunConfig& cfg) {
  const Segmented s = load_and_segment(cfg);
  const AreaGraph& ag = s.result.areas;
  const fs::path dir = cfg.out.empty() ? fs::path(".") : fs::path(cfg.out);
  fs::create_directories(dir);

  const nlohmann::json areas = area_graph_json(ag, s.map);
  validate_area_graph_json(areas);
  write_text_file(dir / "areas.json", areas.dump(1) + "\n");
  write_text_file(dir / "stats.json", segment_stats_json(s.result).dump(1) + "\n");
  write_text_file(dir / "segmentation.svg", render_svg(s.map, ag));
  save_segmentation_png(dir / "segmentation.png", s.map, ag);

  std::printf("areas %zu (rooms %zu)  passages %zu  %.1f ms\n", ag.areas.size(), ag.room_count(),
              ag.passages.size(), s.result.total_ms);
  for (const Area& a : ag.areas)
    std::printf("  area %d  room %d  %.2f m2\n", a.id, a.room_id, a.area_m2);
  return kOk;
}

int cmd_plan(const RunConfig& cfg) {
  const Point2 start = parse_point(cfg.start, "--start");
  const Point2 goal = parse_point(cfg.goal, "--goal");
  const Segmented s = load_and_segment(cfg);

  PlanResult r;
  if (cfg.method == "grid") {
    r = plan_grid(s.map, start, goal);
  } else {
    const RoadmapVariant v =
        cfg.method == "astar-passage" ? RoadmapVariant::GridAStar : RoadmapVariant::TopoVoronoi;
    const PassageGraph pg = build_passage_graph(s.result.areas, v, s.map, s.result.graph);
    std::printf("roadmap %s built in %.1f ms\n", variant_name(v), pg.build_ms);
    r = plan(pg, start, goal);
  }
  if (!r.found) {
    std::printf("no path\n");
    return kNoPathExit;
  }
  std::printf("method %s  length %.3f m  time %.3f ms", method_name(r.method), r.length_m, r.ms);
  if (r.method != PlanMethod::Grid) std::printf("  rooms crossed %d", r.rooms_crossed());
  std::printf("\n");
  if (!cfg.out.empty()) {
    SvgLayers layers;
    layers.paths.push_back(to_pixels(s.map, r.path));
    write_text_file(cfg.out, render_svg(s.map, s.result.areas, layers));
  }
  return kOk;
}

int cmd_bench(const RunConfig& cfg) {
  const std::vector<Query> queries = read_queries(cfg.queries);
  const Segmented s = load_and_segment(cfg);
  const AreaGraph& ag = s.result.areas;
  const PassageGraph pa = build_passage_graph(ag, RoadmapVariant::GridAStar, s.map, s.result.graph);
  const PassageGraph pv =
      build_passage_graph(ag, RoadmapVariant::TopoVoronoi, s.map, s.result.graph);

  std::vector<BenchRow> rows;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    rows.push_back(bench_query(static_cast<int>(i), s.map, pa, pv, queries[i]));
    if (!rows.back().error.empty())
      std::fprintf(stderr, "query %zu: %s\n", i, rows.back().error.c_str());
  }
  const std::string csv = bench_csv(rows);
  if (cfg.out.empty())
    std::cout << csv;
  else
    write_text_file(cfg.out, csv);
  std::fprintf(stderr, "construction: astar-passage %.1f ms, voronoi-passage %.1f ms (%zu edges, %zu edges)\n",
               pa.build_ms, pv.build_ms, pa.edges.size(), pv.edges.size());
  return kOk;
}

int cmd_render(const RunConfig& cfg) {
  const Segmented s = load_and_segment(cfg);
  const fs::path out = cfg.out.empty() ? fs::path("segmentation.svg") : fs::path(cfg.out);
  SvgLayers layers;
  if (cfg.graph_overlay) layers.graph = &s.result.graph;
  write_text_file(out, render_svg(s.map, s.result.areas, layers));
  fs::path png = out;
  png.replace_extension(".png");
  save_segmentation_png(png, s.map, s.result.areas);
  if (cfg.polylines) {
    const PassageGraph pv =
        build_passage_graph(s.result.areas, RoadmapVariant::TopoVoronoi, s.map, s.result.graph);
    fs::path js = out;
    js.replace_extension(".passages.json");
    const nlohmann::json j = passage_graph_json(pv, true);
    validate_passage_graph_json(j);
    write_text_file(js, j.dump(1) + "\n");
  }
  std::printf("wrote %s and %s\n", out.string().c_str(), png.string().c_str());
  return kOk;
}

int cmd_synth(const SynthSpec& spec, const std::string& out) {
  const SynthMap m = generate_synth(spec);
  const fs::path stem = out.empty() ? fs::path("synth") : fs::path(out);
  if (stem.has_parent_path()) fs::create_directories(stem.parent_path());
  save_synth(stem, m);
  std::printf("%dx%d cells, %d rooms, corridor %d px, widest door %d px\n", m.map.width(),
              m.map.height(), m.room_count, m.corridor_width, m.max_door());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Area graph segmentation and passage-graph planning for occupancy maps"};
  app.set_config("--config", "", "INI/TOML file with option values");
  app.require_subcommand(1);

  RunConfig cfg;
  SynthSpec spec;

  auto* seg = app.add_subcommand("segment", "Segment a map; write areas.json, stats and images");
  add_segment_options(seg, cfg);
  seg->add_option("--out", cfg.out, "Output directory");

  auto* pl = app.add_subcommand("plan", "Plan one query");
  add_segment_options(pl, cfg);
  pl->add_option("--method", cfg.method, "grid | astar-passage | voronoi-passage")
      ->check(CLI::IsMember({"grid", "astar-passage", "voronoi-passage"}))
      ->capture_default_str();
  pl->add_option("--start", cfg.start, "Start x,y (m)")->required();
  pl->add_option("--goal", cfg.goal, "Goal x,y (m)")->required();
  pl->add_option("--out", cfg.out, "Optional SVG with the path");

  auto* bench = app.add_subcommand("bench", "Run a query file with all methods; CSV out");
  add_segment_options(bench, cfg);
  bench->add_option("--queries", cfg.queries, "Lines of sx,sy,gx,gy (m)")->required();
  bench->add_option("--out", cfg.out, "CSV path (stdout when omitted)");

  auto* rend = app.add_subcommand("render", "Render the segmentation as SVG and PNG");
  add_segment_options(rend, cfg);
  rend->add_option("--out", cfg.out, "SVG path; the PNG goes next to it");
  rend->add_flag("--graph", cfg.graph_overlay, "Overlay the topology graph");
  rend->add_flag("--passage-json", cfg.polylines,
                 "Also write the Voronoi passage graph with polylines");

  auto* syn = app.add_subcommand("synth", "Generate a synthetic map with ground truth");
  syn->add_option("--seed", spec.seed)->capture_default_str();
  syn->add_option("--out", cfg.out, "Output stem (writes .pgm, .yaml, _truth.pgm)");
  syn->add_option("--bands", spec.bands)->capture_default_str();
  syn->add_option("--rooms", spec.rooms)->capture_default_str();
  syn->add_option("--rooms-per-row", spec.rooms_per_row)->capture_default_str();
  syn->add_option("--room-min", spec.room_min, "cells")->capture_default_str();
  syn->add_option("--room-max", spec.room_max, "cells")->capture_default_str();
  syn->add_option("--corridor-px", spec.corridor_width, "cells")->capture_default_str();
  syn->add_option("--door-min", spec.door_min, "cells")->capture_default_str();
  syn->add_option("--door-max", spec.door_max, "cells")->capture_default_str();
  syn->add_option("--furniture", spec.furniture)->capture_default_str();
  syn->add_option("--noise", spec.noise)->capture_default_str();
  syn->add_option("--resolution", spec.resolution)->capture_default_str();
  syn->add_option("--min-width", spec.min_width, "cells")->capture_default_str();
  syn->add_option("--min-height", spec.min_height, "cells")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*seg) return cmd_segment(cfg);
    if (*pl) return cmd_plan(cfg);
    if (*bench) return cmd_bench(cfg);
    if (*rend) return cmd_render(cfg);
    if (*syn) return cmd_synth(spec, cfg.out);
  } catch (const Error& e) {
    std::fprintf(stderr, "error [%s]: %s\n", e.stage().c_str(), e.what());
    return kFailure;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kFailure;
  }
  return kFailure;
}
