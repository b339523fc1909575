#pragma once

// Helpers shared by the unit tests and the acceptance binary. The oracles
// here only use the map raster, never the library's own geometry.

#include <cmath>
#include <deque>
#include <random>
#include <string>
#include <vector>

#include "areagraph/area_graph.hpp"
#include "areagraph/mapio.hpp"
#include "areagraph/pipeline.hpp"
#include "areagraph/synth.hpp"

namespace testsupport {

using namespace areagraph;

/// Map of the seeded suite: 2-8 rooms, doors 10-16 px, corridors 20-30 px.
inline SynthSpec suite_spec(std::uint64_t seed) {
  std::mt19937 rng(static_cast<std::uint32_t>(seed));
  SynthSpec s;
  s.seed = seed;
  s.rooms = 2 + static_cast<int>(rng() % 7);
  s.bands = (s.rooms >= 6 && rng() % 2) ? 2 : 1;
  s.rooms_per_row = (s.rooms + 2 * s.bands - 1) / (2 * s.bands);
  s.corridor_width = 20 + static_cast<int>(rng() % 11);
  s.door_min = 10;
  s.door_max = 16;
  s.furniture = static_cast<int>(rng() % 3);
  s.noise = static_cast<double>(rng() % 3) * 0.01;
  return s;
}

/// Segmentation parameters used on synthetic maps: alpha in the middle of
/// the valid interval, min clearance 0.1 m.
inline SegmentParams suite_params(const SynthMap& m, double t = 0.5) {
  const auto [lo, hi] = alpha_bounds_px(m.max_door() + 1, m.corridor_width + 1);
  SegmentParams p;
  p.alpha = lo + t * (hi - lo);
  p.topo = TopologyParams::from_meters(m.map.resolution(), 0.1);
  return p;
}

/// Number of 8-connected components of Free cells whose center is farther
/// than `radius` from every Occupied cell center (brute force).
inline int disk_flood_count(const GridMap& map, double radius) {
  const int w = map.width();
  const int h = map.height();
  const int k = static_cast<int>(std::ceil(radius));
  std::vector<char> fits(static_cast<std::size_t>(w) * h, 0);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      if (map.at(c, r) != Occupancy::Free) continue;
      bool ok = true;
      for (int dr = -k; dr <= k && ok; ++dr)
        for (int dc = -k; dc <= k && ok; ++dc) {
          const int cc = c + dc;
          const int rr = r + dr;
          if (cc < 0 || rr < 0 || cc >= w || rr >= h) continue;
          if (map.at(cc, rr) == Occupancy::Occupied && dc * dc + dr * dr <= radius * radius)
            ok = false;
        }
      fits[static_cast<std::size_t>(r) * w + c] = ok;
    }
  int count = 0;
  std::vector<char> seen(fits.size(), 0);
  for (std::size_t i = 0; i < fits.size(); ++i) {
    if (!fits[i] || seen[i]) continue;
    ++count;
    std::deque<std::size_t> q{i};
    seen[i] = 1;
    while (!q.empty()) {
      const std::size_t u = q.front();
      q.pop_front();
      const int c = static_cast<int>(u % w);
      const int r = static_cast<int>(u / w);
      for (int dr = -1; dr <= 1; ++dr)
        for (int dc = -1; dc <= 1; ++dc) {
          const int cc = c + dc;
          const int rr = r + dr;
          if (cc < 0 || rr < 0 || cc >= w || rr >= h) continue;
          const std::size_t v = static_cast<std::size_t>(rr) * w + cc;
          if (fits[v] && !seen[v]) {
            seen[v] = 1;
            q.push_back(v);
          }
        }
    }
  }
  return count;
}

/// Best IoU of ground-truth label `t` against any area, over Free cells.
inline double best_iou(const SynthMap& m, const AreaGraph& ag, int t, int* best_area = nullptr) {
  const int w = m.map.width();
  const int h = m.map.height();
  std::vector<long> inter(ag.areas.size(), 0);
  std::vector<long> lab(ag.areas.size(), 0);
  long truth = 0;
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      if (m.map.at(c, r) != Occupancy::Free) continue;
      const int l = ag.label(c, r);
      const bool in_t = m.truth_at(c, r) == t;
      truth += in_t;
      if (l >= 0) {
        ++lab[l];
        inter[l] += in_t;
      }
    }
  double best = 0.0;
  for (std::size_t a = 0; a < ag.areas.size(); ++a) {
    const long uni = truth + lab[a] - inter[a];
    const double iou = uni > 0 ? static_cast<double>(inter[a]) / uni : 0.0;
    if (iou > best) {
      best = iou;
      if (best_area) *best_area = static_cast<int>(a);
    }
  }
  return best;
}

/// Parses ASCII art into a map: '#' occupied, '?' unknown, anything else
/// free. The first text line is the top row.
inline GridMap ascii_map(const std::vector<std::string>& rows, double resolution = 0.05) {
  const int h = static_cast<int>(rows.size());
  const int w = static_cast<int>(rows.front().size());
  GridMap m(w, h, resolution);
  for (int i = 0; i < h; ++i)
    for (int c = 0; c < w; ++c) {
      const char ch = rows[i][c];
      m.set(c, h - 1 - i,
            ch == '#'   ? Occupancy::Occupied
            : ch == '?' ? Occupancy::Unknown
                        : Occupancy::Free);
    }
  return m;
}

/// Free w x h room surrounded by a one-cell wall.
inline GridMap box_map(int w, int h, double resolution = 0.05) {
  GridMap m(w, h, resolution);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c)
      if (r == 0 || c == 0 || r == h - 1 || c == w - 1) m.set(c, r, Occupancy::Occupied);
  return m;
}

}  // namespace testsupport
