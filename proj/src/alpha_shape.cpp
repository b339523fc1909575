#include "areagraph/alpha_shape.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "areagraph/error.hpp"

namespace areagraph {
namespace {

double face_area(const VoronoiGraph& vd, int w) {
  Ring ring;
  for (int s : vd.dual_face(w)) ring.push_back(vd.sites[s]);
  return std::abs(signed_area(ring));
}

AlphaShape make_shape(const VoronoiGraph& vd, std::vector<int> faces,
                      const std::vector<int>& label, int my_label) {
  std::vector<std::pair<int, int>> edges;
  double total = 0.0;
  for (int w : faces) {
    const auto& out = vd.outgoing[w];
    const std::size_t k = out.size();
    for (std::size_t i = 0; i < k; ++i) {
      const int h_next = out[(i + 1) % k];
      const int nb = vd.halfedges[h_next].target;
      if (!vd.is_clip[nb] && label[nb] == my_label) continue;
      edges.emplace_back(vd.halfedges[out[i]].site, vd.halfedges[h_next].site);
    }
    total += face_area(vd, w);
  }
  std::vector<Ring> rings;
  for (const auto& ids : trace_rings(vd.sites, edges)) {
    Ring r;
    r.reserve(ids.size());
    for (int id : ids) r.push_back(vd.sites[id]);
    rings.push_back(std::move(r));
  }
  AlphaShape shape;
  shape.area = total;
  shape.faces = std::move(faces);
  shape.index = ShapeIndex(rings);
  shape.rings = std::move(rings);
  return shape;
}

}  // namespace

AlphaShapeSet compute_alpha_shapes(const VoronoiGraph& vd, double alpha) {
  if (!(alpha > 0.0)) throw InvalidArgument("compute_alpha_shapes", "alpha must be positive");
  const double radius = std::sqrt(alpha);
  const int n = static_cast<int>(vd.waypoints.size());

  std::vector<char> open(n, 0);
  for (int w = 0; w < n; ++w)
    open[w] = !vd.is_clip[w] && vd.clearance[w] * vd.clearance[w] > alpha;

  auto passable = [&](int h) { return vd.min_clearance_point(h).second > radius; };

  // 0 = unlabeled, 1 = exterior, 2.. = components.
  std::vector<int> label(n, 0);
  std::deque<int> queue;
  for (int w = 0; w < n; ++w) {
    if (!open[w]) continue;
    for (int h : vd.outgoing[w]) {
      if (vd.is_clip[vd.halfedges[h].target] && passable(h)) {
        label[w] = 1;
        queue.push_back(w);
        break;
      }
    }
  }
  auto flood = [&](int lbl) {
    while (!queue.empty()) {
      const int w = queue.front();
      queue.pop_front();
      for (int h : vd.outgoing[w]) {
        const int t = vd.halfedges[h].target;
        if (vd.is_clip[t] || !open[t] || label[t] != 0 || !passable(h)) continue;
        label[t] = lbl;
        queue.push_back(t);
      }
    }
  };
  flood(1);

  int next_label = 2;
  for (int w = 0; w < n; ++w) {
    if (!open[w] || label[w] != 0) continue;
    label[w] = next_label;
    queue.push_back(w);
    flood(next_label);
    ++next_label;
  }
  std::vector<std::vector<int>> room_faces(next_label);
  for (int w = 0; w < n; ++w)
    if (label[w] >= 2) room_faces[label[w]].push_back(w);

  // Boundary: largest edge-connected group of non-exterior faces.
  std::vector<int> blabel(n, -1);
  std::vector<std::vector<int>> groups;
  for (int w = 0; w < n; ++w) {
    if (vd.is_clip[w] || label[w] == 1 || blabel[w] >= 0) continue;
    const int g = static_cast<int>(groups.size());
    groups.emplace_back();
    blabel[w] = g;
    queue.push_back(w);
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      groups[g].push_back(u);
      for (int h : vd.outgoing[u]) {
        const int t = vd.halfedges[h].target;
        if (vd.is_clip[t] || label[t] == 1 || blabel[t] >= 0) continue;
        blabel[t] = g;
        queue.push_back(t);
      }
    }
  }
  if (groups.empty()) throw GeometryError("compute_alpha_shapes", "no interior faces at this alpha");

  double best_area = -1.0;
  int best = 0;
  for (int g = 0; g < static_cast<int>(groups.size()); ++g) {
    double a = 0.0;
    for (int w : groups[g]) a += face_area(vd, w);
    if (a > best_area) {
      best_area = a;
      best = g;
    }
  }

  AlphaShapeSet out;
  out.alpha = alpha;
  {
    std::vector<int> bl(n, -1);
    for (int w : groups[best]) bl[w] = 0;
    out.shapes.push_back(make_shape(vd, groups[best], bl, 0));
  }
  std::vector<AlphaShape> room_shapes;
  for (int l = 2; l < next_label; ++l) {
    // Rooms outside the boundary group (inside noise islands) are ignored.
    if (blabel[room_faces[l].front()] != best) continue;
    room_shapes.push_back(make_shape(vd, std::move(room_faces[l]), label, l));
  }
  std::stable_sort(room_shapes.begin(), room_shapes.end(),
                   [](const AlphaShape& a, const AlphaShape& b) { return a.area > b.area; });
  for (auto& s : room_shapes) out.shapes.push_back(std::move(s));
  return out;
}

AlphaShapeSet compute_alpha_shapes(const SiteSet& sites, double alpha) {
  return compute_alpha_shapes(compute_voronoi(sites), alpha);
}

}  // namespace areagraph
