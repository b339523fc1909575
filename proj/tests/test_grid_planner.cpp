#include <doctest.h>

#include <cmath>
#include <queue>
#include <random>

#include "areagraph/grid_planner.hpp"
#include "support.hpp"

using namespace areagraph;

namespace {

// Plain Dijkstra with its own neighbor rules, in cells.
double reference_length(const GridMap& m, Cell s, Cell g) {
  const int w = m.width();
  const int h = m.height();
  auto free = [&](int c, int r) { return c >= 0 && r >= 0 && c < w && r < h && m.at(c, r) == Occupancy::Free; };
  if (!free(s.c, s.r) || !free(g.c, g.r)) return kNoPath;
  std::vector<double> d(static_cast<std::size_t>(w) * h, kNoPath);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  d[s.r * w + s.c] = 0.0;
  pq.push({0.0, s.r * w + s.c});
  while (!pq.empty()) {
    const auto [du, u] = pq.top();
    pq.pop();
    if (du > d[u]) continue;
    const int c = u % w;
    const int r = u / w;
    for (int dr = -1; dr <= 1; ++dr)
      for (int dc = -1; dc <= 1; ++dc) {
        if (!dr && !dc) continue;
        if (!free(c + dc, r + dr)) continue;
        if (dr && dc && (!free(c + dc, r) || !free(c, r + dr))) continue;
        const int v = (r + dr) * w + c + dc;
        const double nd = du + std::sqrt(double(dr * dr + dc * dc));
        if (nd < d[v]) {
          d[v] = nd;
          pq.push({nd, v});
        }
      }
  }
  return d[g.r * w + g.c];
}

GridMap random_map(std::uint32_t seed, int w, int h, double density) {
  std::mt19937 rng(seed);
  std::bernoulli_distribution occ(density);
  GridMap m(w, h, 0.1);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c)
      if (occ(rng)) m.set(c, r, Occupancy::Occupied);
  return m;
}

bool valid_path(const GridMap& m, const GridPath& p) {
  for (std::size_t i = 0; i < p.cells.size(); ++i) {
    const Cell c = p.cells[i];
    if (!m.is_free(c.c, c.r)) return false;
    if (i == 0) continue;
    const Cell b = p.cells[i - 1];
    const int dc = c.c - b.c;
    const int dr = c.r - b.r;
    if (std::abs(dc) > 1 || std::abs(dr) > 1 || (!dc && !dr)) return false;
    if (dc && dr && (!m.is_free(b.c + dc, b.r) || !m.is_free(b.c, b.r + dr))) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("grid_planner") {
  TEST_CASE("octile distance") {
    CHECK(octile_distance({0, 0}, {3, 0}) == doctest::Approx(3.0));
    CHECK(octile_distance({0, 0}, {3, 3}) == doctest::Approx(3.0 * std::sqrt(2.0)));
    CHECK(octile_distance({0, 0}, {4, 1}) == doctest::Approx(3.0 + std::sqrt(2.0)));
  }

  TEST_CASE("A* matches an independent Dijkstra on random maps") {
    int solved = 0;
    for (std::uint32_t seed = 1; seed <= 25; ++seed) {
      const GridMap m = random_map(seed, 30, 24, 0.28);
      std::mt19937 rng(seed * 7);
      for (int q = 0; q < 8; ++q) {
        const Cell s{static_cast<int>(rng() % 30), static_cast<int>(rng() % 24)};
        const Cell g{static_cast<int>(rng() % 30), static_cast<int>(rng() % 24)};
        const double ref = reference_length(m, s, g);
        const GridPath p = grid_astar(m, s, g);
        const double oracle = bfs_oracle(m, s, g);
        if (ref == kNoPath) {
          CHECK_FALSE(p.found());
          CHECK(oracle == kNoPath);
          continue;
        }
        REQUIRE(p.found());
        ++solved;
        CHECK(p.length_m == doctest::Approx(ref * 0.1).epsilon(1e-12));
        CHECK(oracle == doctest::Approx(ref * 0.1).epsilon(1e-12));
        CHECK(valid_path(m, p));
        CHECK(p.cells.front() == s);
        CHECK(p.cells.back() == g);
      }
    }
    CHECK(solved > 50);
  }

  TEST_CASE("no corner cutting") {
    const GridMap m = testsupport::ascii_map({
        "..#",
        ".#.",
        "...",
    });
    // Every diagonal out of the left column or into (2,1) squeezes past the
    // center wall, so the only path is five axis steps round the bottom.
    const GridPath p = grid_astar(m, {0, 2}, {2, 1});
    REQUIRE(p.found());
    CHECK(valid_path(m, p));
    CHECK(p.length_m == doctest::Approx(0.25));
  }

  TEST_CASE("one sweep gives the same lengths as separate searches") {
    const GridMap m = random_map(99, 40, 30, 0.2);
    std::vector<Cell> targets;
    for (int i = 0; i < 12; ++i) targets.push_back({(i * 7) % 40, (i * 5) % 30});
    const Cell s{20, 15};
    if (!m.is_free(s.c, s.r)) return;
    const auto sweep = grid_paths_to(m, s, targets);
    for (std::size_t k = 0; k < targets.size(); ++k) {
      const GridPath single = grid_astar(m, s, targets[k]);
      CHECK(sweep[k].found() == single.found());
      if (single.found()) {
        CHECK(sweep[k].length_m == doctest::Approx(single.length_m).epsilon(1e-12));
        CHECK(valid_path(m, sweep[k]));
      }
    }
  }

  TEST_CASE("search regions restrict the cells used") {
    GridMap m(10, 5, 1.0);
    std::vector<int> labels(50, 0);
    for (int c = 0; c < 10; ++c) labels[2 * 10 + c] = 1;  // middle row is another area
    SearchRegion region;
    region.labels = &labels;
    region.label = 0;
    CHECK_FALSE(grid_astar(m, {0, 0}, {0, 4}, &region).found());
    region.extra = {{5, 2}};
    const GridPath p = grid_astar(m, {0, 0}, {0, 4}, &region);
    REQUIRE(p.found());
    bool through = false;
    for (Cell c : p.cells) through = through || (c.r == 2 && c.c == 5);
    CHECK(through);
    CHECK(grid_astar(m, {0, 0}, {0, 4}).length_m == doctest::Approx(4.0));
  }

  TEST_CASE("line of sight") {
    const GridMap m = testsupport::ascii_map({
        ".....",
        "..#..",
        ".....",
    });
    CHECK(line_of_sight(m, {0.5, 0.5}, {4.5, 0.5}));
    CHECK_FALSE(line_of_sight(m, {0.5, 1.5}, {4.5, 1.5}));
    CHECK(line_of_sight(m, {0.5, 2.5}, {4.5, 2.5}));
    CHECK_FALSE(line_of_sight(m, {1.5, 0.5}, {3.5, 2.5}));
    const GridMap corner = testsupport::ascii_map({
        ".#",
        "#.",
    });
    CHECK_FALSE(line_of_sight(corner, {0.5, 1.5}, {1.5, 0.5}));
  }
}
