#include "areagraph/grid_planner.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>

namespace areagraph {
namespace {

constexpr double kSqrt2 = 1.4142135623730951;

// Dense search state over a window of the map.
class Window {
 public:
  Window(const GridMap& map, const SearchRegion* region) {
    if (region && region->c1 >= region->c0 && region->r1 >= region->r0) {
      c0_ = std::max(0, region->c0);
      r0_ = std::max(0, region->r0);
      w_ = std::min(map.width() - 1, region->c1) - c0_ + 1;
      h_ = std::min(map.height() - 1, region->r1) - r0_ + 1;
    } else {
      w_ = map.width();
      h_ = map.height();
    }
    w_ = std::max(w_, 0);
    h_ = std::max(h_, 0);
    allowed_.assign(static_cast<std::size_t>(w_) * h_, 0);
    for (int r = 0; r < h_; ++r)
      for (int c = 0; c < w_; ++c) {
        const int mc = c + c0_;
        const int mr = r + r0_;
        bool ok = map.at(mc, mr) == Occupancy::Free;
        if (ok && region && region->labels)
          ok = (*region->labels)[map.index(mc, mr)] == region->label;
        allowed_[static_cast<std::size_t>(r) * w_ + c] = ok;
      }
    if (region)
      for (Cell x : region->extra)
        if (inside(x) && map.is_free(x.c, x.r)) allowed_[local(x)] = 1;
  }

  bool inside(Cell x) const {
    return x.c >= c0_ && x.r >= r0_ && x.c < c0_ + w_ && x.r < r0_ + h_;
  }
  int local(Cell x) const { return (x.r - r0_) * w_ + (x.c - c0_); }
  Cell cell(int i) const { return {i % w_ + c0_, i / w_ + r0_}; }
  bool ok(Cell x) const { return inside(x) && allowed_[local(x)]; }
  std::size_t size() const { return allowed_.size(); }

  template <class F>
  void for_neighbors(int i, F&& f) const {
    const Cell x = cell(i);
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0) continue;
        const Cell n{x.c + dx, x.r + dy};
        if (!ok(n)) continue;
        if (dx != 0 && dy != 0 && (!ok({x.c + dx, x.r}) || !ok({x.c, x.r + dy}))) continue;
        f(local(n), dx != 0 && dy != 0 ? kSqrt2 : 1.0);
      }
  }

 private:
  int c0_ = 0;
  int r0_ = 0;
  int w_ = 0;
  int h_ = 0;
  std::vector<char> allowed_;
};

GridPath trace(const Window& win, const std::vector<int>& parent, int goal, double cost,
               double res) {
  GridPath p;
  for (int i = goal; i >= 0; i = parent[i]) p.cells.push_back(win.cell(i));
  std::reverse(p.cells.begin(), p.cells.end());
  p.length_m = cost * res;
  return p;
}

struct QItem {
  double f;
  double g;
  int i;
  // Min-heap on f; among equal f prefer deeper nodes.
  bool operator<(const QItem& o) const { return f != o.f ? f > o.f : g < o.g; }
};

}  // namespace

Cell cell_of(Point2 px) {
  return {static_cast<int>(std::floor(px.x)), static_cast<int>(std::floor(px.y))};
}

double octile_distance(Cell a, Cell b) {
  const int dx = std::abs(a.c - b.c);
  const int dy = std::abs(a.r - b.r);
  return std::max(dx, dy) + (kSqrt2 - 1.0) * std::min(dx, dy);
}

GridPath grid_astar(const GridMap& map, Cell start, Cell goal, const SearchRegion* region) {
  const Window win(map, region);
  if (!win.ok(start) || !win.ok(goal)) return {};
  std::vector<double> g(win.size(), kNoPath);
  std::vector<int> parent(win.size(), -1);
  std::vector<char> closed(win.size(), 0);
  const int s = win.local(start);
  const int t = win.local(goal);
  std::priority_queue<QItem> open;
  g[s] = 0.0;
  open.push({octile_distance(start, goal), 0.0, s});
  while (!open.empty()) {
    const QItem cur = open.top();
    open.pop();
    if (closed[cur.i]) continue;
    closed[cur.i] = 1;
    if (cur.i == t) return trace(win, parent, t, g[t], map.resolution());
    win.for_neighbors(cur.i, [&](int n, double step) {
      const double ng = g[cur.i] + step;
      if (closed[n] || ng >= g[n]) return;
      g[n] = ng;
      parent[n] = cur.i;
      open.push({ng + octile_distance(win.cell(n), goal), ng, n});
    });
  }
  return {};
}

std::vector<GridPath> grid_paths_to(const GridMap& map, Cell start, std::span<const Cell> targets,
                                    const SearchRegion* region) {
  std::vector<GridPath> out(targets.size());
  const Window win(map, region);
  if (!win.ok(start)) return out;
  std::vector<double> g(win.size(), kNoPath);
  std::vector<int> parent(win.size(), -1);
  std::vector<char> closed(win.size(), 0);
  std::vector<char> wanted(win.size(), 0);
  std::size_t remaining = 0;
  for (Cell t : targets)
    if (win.ok(t) && !wanted[win.local(t)]) {
      wanted[win.local(t)] = 1;
      ++remaining;
    }
  const int s = win.local(start);
  std::priority_queue<QItem> open;
  g[s] = 0.0;
  open.push({0.0, 0.0, s});
  while (!open.empty() && remaining > 0) {
    const QItem cur = open.top();
    open.pop();
    if (closed[cur.i]) continue;
    closed[cur.i] = 1;
    if (wanted[cur.i]) --remaining;
    win.for_neighbors(cur.i, [&](int n, double step) {
      const double ng = g[cur.i] + step;
      if (closed[n] || ng >= g[n]) return;
      g[n] = ng;
      parent[n] = cur.i;
      open.push({ng, ng, n});
    });
  }
  for (std::size_t k = 0; k < targets.size(); ++k) {
    if (!win.ok(targets[k])) continue;
    const int t = win.local(targets[k]);
    if (closed[t]) out[k] = trace(win, parent, t, g[t], map.resolution());
  }
  return out;
}

double bfs_oracle(const GridMap& map, Cell start, Cell goal) {
  const int w = map.width();
  const int h = map.height();
  auto free_at = [&](int c, int r) {
    return c >= 0 && r >= 0 && c < w && r < h && map.at(c, r) == Occupancy::Free;
  };
  if (!free_at(start.c, start.r) || !free_at(goal.c, goal.r)) return kNoPath;
  // Costs are kept as (axis steps, diagonal steps) to compare exactly.
  struct Cost {
    long a = 0;
    long d = 0;
    double value() const { return a + d * kSqrt2; }
  };
  std::vector<double> best(static_cast<std::size_t>(w) * h, kNoPath);
  struct Entry {
    double value;
    int idx;
    Cost cost;
    bool operator>(const Entry& o) const { return value > o.value; }
  };
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> pq;
  const int s = start.r * w + start.c;
  best[s] = 0.0;
  pq.push({0.0, s, Cost{}});
  static constexpr int kAxis[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  static constexpr int kDiag[4][2] = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  while (!pq.empty()) {
    const auto [v, idx, cost] = pq.top();
    pq.pop();
    if (v > best[idx]) continue;
    const int c = idx % w;
    const int r = idx / w;
    if (c == goal.c && r == goal.r) return cost.value() * map.resolution();
    for (const auto& d : kAxis) {
      const int nc = c + d[0];
      const int nr = r + d[1];
      if (!free_at(nc, nr)) continue;
      const Cost nxt{cost.a + 1, cost.d};
      const int ni = nr * w + nc;
      if (nxt.value() < best[ni]) {
        best[ni] = nxt.value();
        pq.push({best[ni], ni, nxt});
      }
    }
    for (const auto& d : kDiag) {
      const int nc = c + d[0];
      const int nr = r + d[1];
      if (!free_at(nc, nr) || !free_at(c + d[0], r) || !free_at(c, r + d[1])) continue;
      const Cost nxt{cost.a, cost.d + 1};
      const int ni = nr * w + nc;
      if (nxt.value() < best[ni]) {
        best[ni] = nxt.value();
        pq.push({best[ni], ni, nxt});
      }
    }
  }
  return kNoPath;
}

bool line_of_sight(const GridMap& map, Point2 a, Point2 b) {
  Cell cur = cell_of(a);
  const Cell end = cell_of(b);
  if (!map.is_free(cur.c, cur.r)) return false;
  const Point2 d = b - a;
  const int sx = d.x > 0 ? 1 : -1;
  const int sy = d.y > 0 ? 1 : -1;
  const double inf = kNoPath;
  const double dtx = d.x != 0.0 ? std::abs(1.0 / d.x) : inf;
  const double dty = d.y != 0.0 ? std::abs(1.0 / d.y) : inf;
  double tx = d.x != 0.0 ? ((sx > 0 ? cur.c + 1 - a.x : a.x - cur.c) * dtx) : inf;
  double ty = d.y != 0.0 ? ((sy > 0 ? cur.r + 1 - a.y : a.y - cur.r) * dty) : inf;
  constexpr double kTie = 1e-12;
  while (!(cur == end)) {
    if (std::min(tx, ty) > 1.0) break;
    if (std::abs(tx - ty) <= kTie) {
      // Through a corner: both side cells must be free.
      if (!map.is_free(cur.c + sx, cur.r) || !map.is_free(cur.c, cur.r + sy)) return false;
      cur.c += sx;
      cur.r += sy;
      tx += dtx;
      ty += dty;
    } else if (tx < ty) {
      cur.c += sx;
      tx += dtx;
    } else {
      cur.r += sy;
      ty += dty;
    }
    if (!map.is_free(cur.c, cur.r)) return false;
  }
  return true;
}

}  // namespace areagraph
