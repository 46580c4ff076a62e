#pragma once

// Spherical Delone cells (radially projected hull facets), their dual
// Dirichlet-Voronoi cells with face lattices, closest points q_i(F) and the
// quasi-orthoschemes that dissect a DV cell.

#include <vector>

#include "sphstab/hull.hpp"
#include "sphstab/sphgeo.hpp"

namespace sphstab {

struct DeloneCell {
  std::vector<int> vertices;                // sorted point indices
  std::vector<std::vector<int>> simplices;  // simplicial pieces (one unless co-spherical)
  Vec circumcenter;
  double circumradius = 0.0;
  double volume = 0.0;                      // NaN for d = 5
  std::vector<int> adjacent;                // cells sharing a (d-2)-face
};

struct DeloneComplex {
  int dim = 0;
  PointSet points;
  std::vector<DeloneCell> cells;
  double max_circumradius = 0.0;
  int max_cell = -1;

  double total_volume() const;
  /// Cells having point i as a vertex.
  std::vector<int> cells_of(int i) const;
};

/// Delone decomposition for d in [3, 5] (cell volumes for d <= 4 when
/// `volumes` is set, NaN otherwise). Throws HypothesisError when o is not an
/// interior point of the hull.
DeloneComplex delone_complex(const PointSet& points, bool volumes = true);

/// A face of a DV cell, given by the DV vertices it contains.
struct DVFace {
  int dim = 0;
  std::vector<int> vertices;  // indices into DVCell::vertices, sorted
  std::vector<int> subfaces;  // faces of dimension dim - 1 contained in this one
};

struct DVCell {
  int owner = -1;
  int dim = 0;       // ambient d
  bool bounded = true;
  Vec center;        // x_owner
  std::vector<Vec> vertices;           // DV vertices = Delone circumcenters
  std::vector<int> vertex_cell;        // Delone cell dual to each vertex
  std::vector<double> vertex_distance; // delta(x_owner, vertex)
  std::vector<DVFace> faces;           // dims 0..d-2, sorted by dimension
  std::vector<int> facet_neighbors;    // j such that the bisector of (owner, j) carries a facet
  std::vector<Vec> constraints;        // x_owner - x_j for all j

  /// u is at least as close to x_owner as to every other point.
  bool contains(const Vec& u, double tol = 1e-12) const;
  std::vector<int> faces_of_dim(int m) const;
};

/// DV cell of point i. With o interior the face lattice is read off the Delone
/// complex; otherwise only the bisector constraints are returned (bounded = false).
DVCell dv_cell(const PointSet& points, int i);
DVCell dv_cell(const DeloneComplex& complex, int i);

struct ClosestPoint {
  Vec q;
  double distance = 0.0;
  bool relint = false;
};

/// Point of face `face` of `cell` closest to the owner.
ClosestPoint closest_point_on_face(const DVCell& cell, int face);

struct QuasiOrthoscheme {
  std::vector<int> tower;    // face indices F_0, ..., F_{d-2}
  std::vector<Vec> vertices; // x_i, q_i(F_{d-2}), ..., q_i(F_0)
  bool is_orthoscheme = false;
  double volume = 0.0;
};

/// Simplices from every proper tower of faces of the cell (d in [3, 4]).
std::vector<QuasiOrthoscheme> quasi_orthoschemes(const DVCell& cell);

/// Largest |cos| between the great spheres through z_0..z_i and z_i..z_{n-1}
/// (measured orthogonally to z_i), over i = 1..n-2. Zero for an orthoscheme chain.
double orthoscheme_chain_defect(const std::vector<Vec>& z);

}  // namespace sphstab
