#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "areagraph/area_graph.hpp"
#include "areagraph/passage_graph.hpp"
#include "areagraph/pipeline.hpp"

namespace areagraph {

/// Areas (rings in world meters, roomID, m^2) and passages (segment, waypoint,
/// the two area ids).
nlohmann::json area_graph_json(const AreaGraph& ag, const GridMap& map);

/// Passage vertices and edges with lengths; edge polylines when `polylines`.
nlohmann::json passage_graph_json(const PassageGraph& pg, bool polylines = false);

/// Area count, per-area m^2, passage count and stage timings.
nlohmann::json segment_stats_json(const SegmentResult& r);

/// Throws InvalidArgument when a document produced above misses a required
/// field or has the wrong type.
void validate_area_graph_json(const nlohmann::json& j);
void validate_passage_graph_json(const nlohmann::json& j);

/// Start and goal in world meters.
struct Query {
  Point2 start;
  Point2 goal;
};

/// One query per line: "sx,sy,gx,gy". Blank lines and lines starting with
/// '#' are skipped.
std::vector<Query> read_queries(const std::filesystem::path& path);

struct BenchRow {
  int id = 0;
  double grid_m = kNoPath;
  double astarp_m = kNoPath;
  double vorop_m = kNoPath;
  double grid_ms = 0.0;
  double astarp_ms = 0.0;
  double vorop_ms = 0.0;
  int rooms_crossed = -1;
  /// Error text for a query that could not be planned.
  std::string error;
};

/// Runs one query with all three methods. Errors are recorded in the row.
BenchRow bench_query(int id, const GridMap& map, const PassageGraph& astar,
                     const PassageGraph& voronoi, const Query& q);

/// Header "id,grid_m,astarp_m,vorop_m,grid_ms,astarp_ms,vorop_ms,rooms_crossed";
/// missing lengths are left empty.
std::string bench_csv(std::span<const BenchRow> rows);

}  // namespace areagraph
