#pragma once

#include <span>
#include <vector>

#include "areagraph/geometry.hpp"
#include "areagraph/mapio.hpp"
#include "areagraph/voronoi.hpp"

namespace areagraph {

/// One connected component of open space (or the map boundary), as the
/// boundary rings of a union of Delaunay faces.
struct AlphaShape {
  std::vector<Ring> rings;
  double area = 0.0;
  /// Voronoi waypoints whose dual Delaunay faces make up the shape.
  std::vector<int> faces;
  ShapeIndex index;

  bool contains(Point2 p) const { return index.contains(p); }
  const BBox& bbox() const { return index.bbox(); }
};

/// shapes[0] is the map boundary; the rest are rooms ordered by decreasing area.
struct AlphaShapeSet {
  double alpha = 0.0;
  std::vector<AlphaShape> shapes;

  const AlphaShape& boundary() const { return shapes.front(); }
  std::span<const AlphaShape> rooms() const {
    return std::span<const AlphaShape>(shapes).subspan(shapes.empty() ? 0 : 1);
  }
};

/// `alpha` is the squared radius (pixels^2) of the probe disk. A Delaunay face
/// is open when its circumradius^2 exceeds alpha; two open faces are in the
/// same component when the disk can slide across their shared edge (the dual
/// Voronoi edge keeps clearance above sqrt(alpha)). Components reachable from
/// infinity are exterior; the remaining faces form the boundary shape.
AlphaShapeSet compute_alpha_shapes(const VoronoiGraph& vd, double alpha);
AlphaShapeSet compute_alpha_shapes(const SiteSet& sites, double alpha);

}  // namespace areagraph
