#pragma once

#include <vector>

#include "sphstab/sphgeo.hpp"

namespace sphstab {

/// Simplicial convex hull of a point set in R^d, d in [3, 5].
///
/// Coplanar configurations (the regular polytopes have plenty of them during
/// incremental insertion) are resolved as if every point were pushed an
/// infinitesimal step toward an interior point, later points further. The
/// union of the facets sharing a supporting plane is the true facet.
struct HullComplex {
  int dim = 0;
  std::vector<Vec> points;
  std::vector<std::vector<int>> facets;     // d vertex indices each
  std::vector<std::vector<int>> neighbors;  // neighbors[f][k] lies across from facets[f][k]
  std::vector<Vec> normals;                 // outward unit normals
  std::vector<double> offsets;              // signed distance of the facet plane from o

  int facet_count() const { return static_cast<int>(facets.size()); }
  /// Indices of points that are hull vertices.
  std::vector<int> vertices() const;
  /// Every (d-2)-face (ridge) once, as sorted index tuples.
  std::vector<std::vector<int>> ridges() const;
  /// o lies strictly inside: every facet plane has positive offset.
  bool contains_origin_strictly(double tol = 0.0) const;
};

/// Incremental (beneath-beyond) hull with exact orientation signs. Throws
/// DimensionError for fewer than d + 1 points or flat input.
HullComplex convex_hull(const std::vector<Vec>& points);
HullComplex convex_hull(const PointSet& points);

/// Exact sign of det[p_1 - p_0, ..., p_{d-1} - p_0, q - p_0]; `simplex` holds d points of R^d.
int orientation_sign(const std::vector<const Vec*>& simplex, const Vec& q);

}  // namespace sphstab
