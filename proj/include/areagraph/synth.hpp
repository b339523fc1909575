#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "areagraph/mapio.hpp"

namespace areagraph {

/// Floor plan made of bands: each band is a horizontal corridor with a row of
/// rooms above and below it. With more than one band a vertical spine
/// corridor on the left joins the band corridors. All sizes in cells.
struct SynthSpec {
  int bands = 1;
  int rooms_per_row = 2;
  /// Total rooms; rooms beyond this count are left out of the last rows.
  int rooms = 4;
  int room_min = 60;
  int room_max = 100;
  int corridor_width = 20;
  int door_min = 10;
  int door_max = 16;
  int wall = 2;
  int margin = 6;
  /// Furniture blobs per room (0-2), placed in the corners far from the door.
  int furniture = 0;
  /// Probability of an occupied speckle per cell of the unknown margin.
  double noise = 0.0;
  double resolution = 0.05;
  /// The map is padded with unknown cells up to at least this size.
  int min_width = 0;
  int min_height = 0;
  std::uint64_t seed = 1;
};

struct SynthMap {
  GridMap map;
  /// Ground truth per cell: room index, `corridor_label` for the corridor
  /// network, -1 for walls, doorways and outside.
  std::vector<int> truth;
  int room_count = 0;
  int corridor_label = 0;
  int corridor_width = 0;
  std::vector<int> door_widths;

  int max_door() const;
  int truth_at(int c, int r) const { return truth[static_cast<std::size_t>(r) * map.width() + c]; }
};

/// Throws InvalidArgument for infeasible specs (e.g. a door wider than its room).
SynthMap generate_synth(const SynthSpec& spec);

/// Writes `<stem>.pgm`, `<stem>.yaml` and `<stem>_truth.pgm` (label + 1 per
/// cell, 0 elsewhere; labels above 254 are clamped).
void save_synth(const std::filesystem::path& stem, const SynthMap& m);

/// Connected components (8-neighborhood) of Free cells whose center is
/// farther than `radius` from every Occupied cell center.
int disk_component_count(const GridMap& map, double radius);
/// Component id per cell (-1 where the disk does not fit).
std::vector<int> disk_components(const GridMap& map, double radius, int* count = nullptr);

}  // namespace areagraph
