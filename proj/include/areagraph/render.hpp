#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "areagraph/area_graph.hpp"
#include "areagraph/mapio.hpp"
#include "areagraph/topology_graph.hpp"

namespace areagraph {

/// Optional overlays for render_svg. Paths are in the pixel frame.
struct SvgLayers {
  const TopologyGraph* graph = nullptr;
  std::vector<std::vector<Point2>> paths;
  bool passages = true;
};

/// Fill color of an area, derived from its roomID (area id for non-rooms) so
/// colors are stable between runs.
std::array<std::uint8_t, 3> area_color(const Area& a);

/// Map, area polygons, passages and overlays as an SVG document. One SVG
/// unit per cell, y pointing down (row 0 of the map at the bottom).
std::string render_svg(const GridMap& map, const AreaGraph& ag, const SvgLayers& layers = {});

/// RGB image of the label raster: areas in their colors, walls black,
/// unknown gray.
void save_segmentation_png(const std::filesystem::path& path, const GridMap& map,
                           const AreaGraph& ag);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace areagraph
