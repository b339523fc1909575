#include "areagraph/pipeline.hpp"

#include <chrono>

#include "areagraph/error.hpp"

namespace areagraph {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

const StageStats* SegmentResult::stage(const std::string& name) const {
  for (const auto& s : stages)
    if (s.name == name) return &s;
  return nullptr;
}

SegmentResult segment_map(const GridMap& map, const SegmentParams& params) {
  if (!(params.alpha > 0.0)) throw InvalidArgument("segment_map", "alpha must be positive");
  const auto start = Clock::now();
  SegmentResult res;
  auto t0 = Clock::now();
  auto mark = [&](const std::string& name, double area) {
    res.stages.push_back({name, area, res.graph.alive_edge_count(), ms_since(t0)});
    t0 = Clock::now();
  };

  res.sites = extract_sites(map);
  res.voronoi = compute_voronoi(res.sites);
  mark("voronoi", 0.0);
  res.shapes = compute_alpha_shapes(res.voronoi, params.alpha);
  mark("alpha_shapes", 0.0);

  res.graph = TopologyGraph::from_voronoi(res.voronoi);
  PolygonTracker tracker(res.voronoi, res.graph);
  mark("half_polygons", tracker.total_area());

  const auto& tp = params.topo;
  const std::vector<int> removed =
      remove_low_clearance_edges(res.graph, tp.min_clearance_px, &tracker);
  tracker.absorb_low_clearance(res.graph, removed, &res.shapes.boundary());
  mark("clearance", tracker.total_area());

  filter_outside_boundary(res.graph, res.shapes.boundary(), &tracker);
  mark("boundary", tracker.total_area());

  join_degree_two(res.graph, &tracker);
  mark("join", tracker.total_area());

  prune_dead_ends(res.graph, tp.deadend_min_length_px, tp.iterations, &tracker);
  mark("dead_ends", tracker.total_area());

  keep_largest_component(res.graph, &tracker);
  mark("component", tracker.total_area());

  const SiteLocator locator(res.sites.sites);
  merge_close_vertices(res.graph, tp.merge_dist_px, &tracker,
                       [&](Point2 p) { return locator.clearance(p); });
  join_degree_two(res.graph, &tracker);
  mark("merge_vertices", tracker.total_area());

  RoomMergeOptions opts;
  opts.min_clearance_px = tp.min_clearance_px;
  res.areas = merge_rooms(res.graph, res.voronoi, tracker.polys(), res.shapes, map, opts);
  double total = 0.0;
  for (const auto& a : res.areas.areas) total += a.area_px;
  mark("rooms", total);
  res.total_ms = ms_since(start);
  return res;
}

}  // namespace areagraph
