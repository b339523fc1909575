#include "areagraph/synth.hpp"

#include <algorithm>
#include <deque>
#include <random>

#include "areagraph/error.hpp"
#include "areagraph/geometry.hpp"

namespace areagraph {
namespace {

struct Rect {
  int x0, y0, x1, y1;  // half-open
};

class Painter {
 public:
  Painter(SynthMap& m) : m_(m) {}
  void fill(Rect r, Occupancy v, int label) {
    for (int y = r.y0; y < r.y1; ++y)
      for (int x = r.x0; x < r.x1; ++x) {
        m_.map.set(x, y, v);
        m_.truth[static_cast<std::size_t>(y) * m_.map.width() + x] = label;
      }
  }

 private:
  SynthMap& m_;
};

}  // namespace

int SynthMap::max_door() const {
  return door_widths.empty() ? 0 : *std::max_element(door_widths.begin(), door_widths.end());
}

SynthMap generate_synth(const SynthSpec& s) {
  if (s.bands < 1 || s.rooms_per_row < 1 || s.rooms < 1)
    throw InvalidArgument("synth", "need at least one band, column and room");
  if (s.rooms > 2 * s.bands * s.rooms_per_row)
    throw InvalidArgument("synth", "more rooms than slots");
  if (s.room_min > s.room_max || s.door_min > s.door_max || s.door_min < 1 || s.wall < 1 ||
      s.corridor_width < 1 || s.margin < 0)
    throw InvalidArgument("synth", "inconsistent size ranges");
  if (s.door_max + 4 > s.room_min) throw InvalidArgument("synth", "door wider than room");

  std::mt19937_64 rng(s.seed);
  auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };

  const int w = s.wall;
  const int c = s.corridor_width;
  const bool spine = s.bands > 1;
  std::vector<int> col_w(s.rooms_per_row);
  for (int& v : col_w) v = uniform(s.room_min, s.room_max);
  std::vector<int> row_h(2 * s.bands);
  for (int& v : row_h) v = uniform(s.room_min, s.room_max);

  const int x_start = s.margin;
  const int rooms_x0 = x_start + w + (spine ? c + w : 0);
  int x_end = rooms_x0;
  for (int v : col_w) x_end += v + w;
  int y_end = s.margin + w;
  for (int b = 0; b < s.bands; ++b) y_end += row_h[2 * b] + w + c + w + row_h[2 * b + 1] + w;

  SynthMap out;
  out.map = GridMap(std::max(x_end + s.margin, s.min_width),
                    std::max(y_end + s.margin, s.min_height), s.resolution, {},
                    Occupancy::Unknown);
  out.truth.assign(static_cast<std::size_t>(out.map.width()) * out.map.height(), -1);
  out.corridor_width = c;
  Painter paint(out);
  paint.fill({x_start, s.margin, x_end, y_end}, Occupancy::Occupied, -1);

  std::vector<std::pair<Rect, int>> rooms;  // room rect, row parity (0 below corridor)
  std::vector<Rect> corridors;
  int y = s.margin + w;
  for (int b = 0; b < s.bands; ++b) {
    const int ya = y;
    const int yc = ya + row_h[2 * b] + w;
    const int yb = yc + c + w;
    corridors.push_back({spine ? x_start + w : rooms_x0, yc, x_end - w, yc + c});
    int x = rooms_x0;
    for (int k = 0; k < s.rooms_per_row; ++k) {
      rooms.push_back({{x, ya, x + col_w[k], ya + row_h[2 * b]}, 0});
      rooms.push_back({{x, yb, x + col_w[k], yb + row_h[2 * b + 1]}, 1});
      x += col_w[k] + w;
    }
    y = yb + row_h[2 * b + 1] + w;
  }
  if (spine) corridors.push_back({x_start + w, corridors.front().y0, x_start + w + c,
                                  corridors.back().y1});
  // Fill order: bands bottom-up, rooms left to right, lower row first.
  std::stable_sort(rooms.begin(), rooms.end(), [](const auto& a, const auto& b) {
    if (a.first.y0 != b.first.y0) return a.first.y0 < b.first.y0;
    return a.first.x0 < b.first.x0;
  });
  rooms.resize(s.rooms);

  out.room_count = s.rooms;
  out.corridor_label = s.rooms;
  for (const Rect& r : corridors) paint.fill(r, Occupancy::Free, out.corridor_label);
  for (int i = 0; i < s.rooms; ++i) {
    const auto [r, above] = rooms[i];
    paint.fill(r, Occupancy::Free, i);
    const int d = uniform(s.door_min, s.door_max);
    out.door_widths.push_back(d);
    const int dx = uniform(r.x0 + 2, r.x1 - 2 - d);
    const int dy0 = above ? r.y0 - w : r.y1;
    paint.fill({dx, dy0, dx + d, dy0 + w}, Occupancy::Free, -1);

    // Blobs sit in the two corners away from the corridor wall so that they
    // never pinch the room shut.
    for (int f = 0; f < std::min(s.furniture, 2); ++f) {
      const int fw = uniform(3, 8);
      const int fh = uniform(3, 8);
      const int fx = f == 0 ? r.x0 : r.x1 - fw;
      const int fy = above ? r.y1 - fh : r.y0;
      paint.fill({fx, fy, fx + fw, fy + fh}, Occupancy::Occupied, -1);
    }
  }

  if (s.noise > 0.0) {
    std::bernoulli_distribution speck(s.noise);
    // Speckles stay in the margin; padding added for min_width/min_height
    // is left clean.
    for (int r = 0; r < y_end + s.margin; ++r)
      for (int x = 0; x < x_end + s.margin; ++x) {
        const bool inside = x >= x_start && x < x_end && r >= s.margin && r < y_end;
        if (!inside && speck(rng)) out.map.set(x, r, Occupancy::Occupied);
      }
  }
  return out;
}

void save_synth(const std::filesystem::path& stem, const SynthMap& m) {
  save_grid_map(stem, m.map);
  GrayImage img;
  img.width = m.map.width();
  img.height = m.map.height();
  img.pixels.resize(static_cast<std::size_t>(img.width) * img.height);
  // Image rows run top-down; map rows bottom-up.
  for (int r = 0; r < img.height; ++r)
    for (int x = 0; x < img.width; ++x) {
      const int l = m.truth_at(x, r);
      img.pixels[static_cast<std::size_t>(img.height - 1 - r) * img.width + x] =
          static_cast<std::uint8_t>(std::clamp(l + 1, 0, 255));
    }
  auto truth = stem;
  truth += "_truth.pgm";
  save_pgm(truth, img);
}

std::vector<int> disk_components(const GridMap& map, double radius, int* count) {
  std::vector<Point2> occ;
  for (int r = 0; r < map.height(); ++r)
    for (int x = 0; x < map.width(); ++x)
      if (map.at(x, r) == Occupancy::Occupied) occ.push_back(GridMap::cell_center(x, r));
  const SiteLocator loc(std::move(occ));
  const int w = map.width();
  const int h = map.height();
  std::vector<char> fits(static_cast<std::size_t>(w) * h, 0);
  for (int r = 0; r < h; ++r)
    for (int x = 0; x < w; ++x)
      fits[static_cast<std::size_t>(r) * w + x] =
          map.at(x, r) == Occupancy::Free && loc.clearance(GridMap::cell_center(x, r)) > radius;
  std::vector<int> comp(fits.size(), -1);
  int n = 0;
  std::deque<int> q;
  for (std::size_t i = 0; i < fits.size(); ++i) {
    if (!fits[i] || comp[i] >= 0) continue;
    comp[i] = n;
    q.push_back(static_cast<int>(i));
    while (!q.empty()) {
      const int cur = q.front();
      q.pop_front();
      const int cx = cur % w;
      const int cy = cur / w;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          const int nx = cx + dx;
          const int ny = cy + dy;
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          const std::size_t j = static_cast<std::size_t>(ny) * w + nx;
          if (!fits[j] || comp[j] >= 0) continue;
          comp[j] = n;
          q.push_back(static_cast<int>(j));
        }
    }
    ++n;
  }
  if (count) *count = n;
  return comp;
}

int disk_component_count(const GridMap& map, double radius) {
  int n = 0;
  disk_components(map, radius, &n);
  return n;
}

}  // namespace areagraph
