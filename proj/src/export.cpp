#include "areagraph/export.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "areagraph/error.hpp"

namespace areagraph {
namespace {

using nlohmann::json;

json point_json(Point2 p) { return json::array({p.x, p.y}); }

json ring_json(const GridMap& map, const Ring& ring) {
  json out = json::array();
  for (Point2 p : ring) out.push_back(point_json(map.pixel_to_world(p)));
  return out;
}

void require(const json& j, const char* key, json::value_t type, const std::string& where) {
  if (!j.is_object() || !j.contains(key))
    throw InvalidArgument("export", where + ": missing '" + key + "'");
  const json::value_t t = j.at(key).type();
  const bool number = type == json::value_t::number_float &&
                      (t == json::value_t::number_integer || t == json::value_t::number_unsigned);
  const bool integer = type == json::value_t::number_integer && t == json::value_t::number_unsigned;
  if (t != type && !number && !integer)
    throw InvalidArgument("export", where + ": '" + key + "' has the wrong type");
}

std::string num(double v, const char* f = "%.3f") {
  if (v == kNoPath) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

}  // namespace

json area_graph_json(const AreaGraph& ag, const GridMap& map) {
  json areas = json::array();
  for (const Area& a : ag.areas) {
    json polys = json::array();
    for (const Polygon& p : a.polygons) {
      json holes = json::array();
      for (const Ring& h : p.holes) holes.push_back(ring_json(map, h));
      polys.push_back({{"outer", ring_json(map, p.outer)}, {"holes", holes}});
    }
    areas.push_back({{"id", a.id},
                     {"room_id", a.room_id},
                     {"area_m2", a.area_m2},
                     {"neighbors", ag.neighbors[a.id]},
                     {"polygons", polys}});
  }
  json passages = json::array();
  for (const Passage& p : ag.passages)
    passages.push_back({{"id", p.id},
                        {"areas", json::array({p.a, p.b})},
                        {"segment", json::array({point_json(map.pixel_to_world(p.segment.a)),
                                                 point_json(map.pixel_to_world(p.segment.b))})},
                        {"waypoint", point_json(map.pixel_to_world(p.waypoint))},
                        {"clearance_m", p.clearance * map.resolution()}});
  return {{"frame", "world"},
          {"resolution", map.resolution()},
          {"width", map.width()},
          {"height", map.height()},
          {"areas", areas},
          {"passages", passages}};
}

json passage_graph_json(const PassageGraph& pg, bool polylines) {
  const GridMap& map = *pg.map;
  json vertices = json::array();
  for (std::size_t i = 0; i < pg.vertex_pos.size(); ++i) {
    const Passage& p = pg.ag->passages[i];
    vertices.push_back({{"id", static_cast<int>(i)},
                        {"position", point_json(map.pixel_to_world(pg.vertex_pos[i]))},
                        {"areas", json::array({p.a, p.b})}});
  }
  json edges = json::array();
  for (const PassageEdge& e : pg.edges) {
    json je = {{"a", e.a}, {"b", e.b}, {"area", e.area}, {"length_m", e.length_m}};
    if (polylines) {
      json pts = json::array();
      for (Point2 p : e.points(pg.waypoints)) pts.push_back(point_json(map.pixel_to_world(p)));
      je["polyline"] = pts;
    }
    edges.push_back(std::move(je));
  }
  return {{"variant", variant_name(pg.variant)},
          {"build_ms", pg.build_ms},
          {"vertices", vertices},
          {"edges", edges},
          {"warnings", pg.warnings}};
}

json segment_stats_json(const SegmentResult& r) {
  json areas = json::array();
  for (const Area& a : r.areas.areas)
    areas.push_back({{"id", a.id}, {"room_id", a.room_id}, {"area_m2", a.area_m2}});
  json stages = json::array();
  for (const StageStats& s : r.stages)
    stages.push_back({{"name", s.name}, {"edges", s.edges}, {"area_px", s.area_px}, {"ms", s.ms}});
  return {{"area_count", r.areas.areas.size()},
          {"room_count", r.areas.room_count()},
          {"passage_count", r.areas.passages.size()},
          {"areas", areas},
          {"stages", stages},
          {"total_ms", r.total_ms}};
}

void validate_area_graph_json(const json& j) {
  using T = json::value_t;
  require(j, "resolution", T::number_float, "area graph");
  require(j, "areas", T::array, "area graph");
  require(j, "passages", T::array, "area graph");
  for (const json& a : j.at("areas")) {
    require(a, "id", T::number_integer, "area");
    require(a, "room_id", T::number_integer, "area");
    require(a, "area_m2", T::number_float, "area");
    require(a, "polygons", T::array, "area");
    for (const json& p : a.at("polygons")) {
      require(p, "outer", T::array, "polygon");
      require(p, "holes", T::array, "polygon");
    }
  }
  for (const json& p : j.at("passages")) {
    require(p, "id", T::number_integer, "passage");
    require(p, "areas", T::array, "passage");
    require(p, "segment", T::array, "passage");
    require(p, "waypoint", T::array, "passage");
    if (p.at("areas").size() != 2 || p.at("segment").size() != 2)
      throw InvalidArgument("export", "passage: expected two areas and two segment ends");
  }
}

void validate_passage_graph_json(const json& j) {
  using T = json::value_t;
  require(j, "variant", T::string, "passage graph");
  require(j, "vertices", T::array, "passage graph");
  require(j, "edges", T::array, "passage graph");
  for (const json& v : j.at("vertices")) {
    require(v, "id", T::number_integer, "vertex");
    require(v, "position", T::array, "vertex");
  }
  for (const json& e : j.at("edges")) {
    require(e, "a", T::number_integer, "edge");
    require(e, "b", T::number_integer, "edge");
    require(e, "length_m", T::number_float, "edge");
  }
}

std::vector<Query> read_queries(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw IoError("bench", "cannot open " + path.string());
  std::vector<Query> out;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    for (char& ch : line)
      if (ch == ',') ch = ' ';
    std::istringstream is(line);
    Query q;
    if (!(is >> q.start.x >> q.start.y >> q.goal.x >> q.goal.y))
      throw InvalidArgument("bench", path.string() + ":" + std::to_string(lineno) +
                                         ": expected sx,sy,gx,gy");
    out.push_back(q);
  }
  return out;
}

BenchRow bench_query(int id, const GridMap& map, const PassageGraph& astar,
                     const PassageGraph& voronoi, const Query& q) {
  BenchRow row;
  row.id = id;
  try {
    const PlanResult g = plan_grid(map, q.start, q.goal);
    const PlanResult a = plan(astar, q.start, q.goal);
    const PlanResult v = plan(voronoi, q.start, q.goal);
    row.grid_m = g.length_m;
    row.astarp_m = a.length_m;
    row.vorop_m = v.length_m;
    row.grid_ms = g.ms;
    row.astarp_ms = a.ms;
    row.vorop_ms = v.ms;
    row.rooms_crossed = a.found ? a.rooms_crossed() : v.found ? v.rooms_crossed() : -1;
    if (!g.found || !a.found || !v.found) row.error = "no path";
  } catch (const Error& e) {
    row.error = e.what();
  }
  return row;
}

std::string bench_csv(std::span<const BenchRow> rows) {
  std::string out = "id,grid_m,astarp_m,vorop_m,grid_ms,astarp_ms,vorop_ms,rooms_crossed\n";
  for (const BenchRow& r : rows) {
    out += std::to_string(r.id) + "," + num(r.grid_m) + "," + num(r.astarp_m) + "," +
           num(r.vorop_m) + "," + num(r.grid_ms) + "," + num(r.astarp_ms) + "," +
           num(r.vorop_ms) + "," + (r.rooms_crossed >= 0 ? std::to_string(r.rooms_crossed) : "") +
           "\n";
  }
  return out;
}

}  // namespace areagraph
