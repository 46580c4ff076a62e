#pragma once

// Constructive recovery of a regular polytope from an eps-perturbed packing:
// the almost-orthogonal basis, simplex and crosspolytope recovery, reflection
// chaining over Delone cells for the icosahedron and 600-cell, and a
// Procrustes alignment used as an independent cross-check.

#include <limits>
#include <vector>

#include "sphstab/polytopes.hpp"
#include "sphstab/sphgeo.hpp"

namespace sphstab {

/// Orthonormal v_1..v_n with lin{u_i..u_n} = lin{v_i..v_n} and <u_i, v_i> > 0,
/// built by peeling off v_n = u_n and recursing in its orthogonal complement.
/// Requires 0 <= eta < 1/(n-1) (DomainError) and |<u_i, u_j>| <= eta
/// (HypothesisError).
std::vector<Vec> almost_orthogonal_basis(const std::vector<Vec>& u, double eta);

struct RecoveryResult {
  PolytopeType type{PolytopeKind::Simplex, 0};
  Mat rotation;                  // Phi in O(d)
  std::vector<int> matching;     // reference vertex matched with each input point
  std::vector<Vec> fitted;       // the exact regular configuration, in input order
  std::vector<double> deviations;
  double max_deviation = 0.0;
  double eps = 0.0;
  double constant = 0.0;         // c_P
  double certified_bound = 0.0;  // c_P eps
  bool pass = false;

  static constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
  double minimax_deviation = kNaN;       // d = 2 simplex: best rotation of the fitted triangle
  double step1_max_circumradius = kNaN;  // largest Delone circumradius
  double step1_bound = kNaN;             // r_{d-1}(phi) + gamma eps
  double duplicate_spread = kNaN;        // largest disagreement between per-cell estimates
  double chain_constant = kNaN;          // 16 sqrt(d-1) / sin phi
  int seed_cell = -1;
};

/// Exploratory runs skip the eps < eps_P precondition (and nothing else), for
/// experiments beyond the range where the constants are claimed.
enum class Hypotheses { Enforce, Exploratory };

/// Absolute allowance added to every certified bound so that eps = 0 inputs
/// are judged up to rounding.
inline constexpr double kCertificationFloor = 1e-9;

/// Regular simplex recovery from d+1 points of S^{d-1}. For d >= 3 the points
/// are lifted to S^d, straightened with almost_orthogonal_basis and rotated
/// back; for d = 2 the fitted triangle is anchored on the closest pair.
RecoveryResult recover_simplex(const PointSet& u, double eps, Hypotheses h = Hypotheses::Enforce);

/// Crosspolytope recovery from 2d points via the antipodal pairing.
RecoveryResult recover_crosspolytope(const PointSet& x, double eps, Hypotheses h = Hypotheses::Enforce);

/// The vertex v_d != v0 that forms a regular simplex with `facet` (d-1 points):
/// the reflection of v0 in the great subsphere through the facet.
UnitVector reflect_vertex(const PointSet& facet, const UnitVector& v0);

/// Icosahedron / 600-cell recovery: Step-1 circumradius check, per-cell
/// regular fits, reflection chaining from a seed cell and a final orthogonal
/// fit to the averaged per-cell estimates.
RecoveryResult recover_global(const PointSet& points, PolytopeKind kind, double eps);

/// Dispatches on the polytope kind.
RecoveryResult recover(const PointSet& points, const PolytopeType& type, double eps,
                       Hypotheses h = Hypotheses::Enforce);

/// Least-squares orthogonal map sending from[k] towards to[k] (SVD).
Mat fit_orthogonal(const std::vector<Vec>& from, const std::vector<Vec>& to);

struct ProcrustesResult {
  Mat rotation;
  std::vector<int> matching;  // reference vertex matched with each point
  std::vector<double> deviations;
  double max_deviation = 0.0;
  double cost = 0.0;          // sum of squared chord distances
  bool rank_deficient = false;
};

/// Orthogonal Procrustes with a greedy matching refined by alternation,
/// started from every edge-clique through points[0].
ProcrustesResult procrustes_align(const PointSet& points, const PointSet& reference);

}  // namespace sphstab
