#pragma once

// The four simplicial regular polytopes inscribed in S^{d-1}, their packing
// radii phi_P and the stability constants (c_P, eps_P) they are certified with.

#include <cstdint>
#include <string>

#include "sphstab/sphgeo.hpp"

namespace sphstab {

enum class PolytopeKind { Simplex, Crosspolytope, Icosahedron, Cell600 };

struct PolytopeType {
  PolytopeKind kind;
  int dim;  // ambient dimension d

  static PolytopeType simplex(int d) { return {PolytopeKind::Simplex, d}; }
  static PolytopeType crosspolytope(int d) { return {PolytopeKind::Crosspolytope, d}; }
  static PolytopeType icosahedron() { return {PolytopeKind::Icosahedron, 3}; }
  static PolytopeType cell600() { return {PolytopeKind::Cell600, 4}; }

  bool operator==(const PolytopeType&) const = default;
};

std::string to_string(PolytopeKind kind);
std::string to_string(const PolytopeType& type);
/// Accepts simplex, crosspolytope (cross), icosahedron (ico), 600-cell (cell600).
PolytopeKind parse_polytope_kind(const std::string& name);
/// Resolves the dimension: required for simplex/crosspolytope, checked for the others.
PolytopeType make_polytope_type(PolytopeKind kind, int dim);

struct StabilityConstants {
  double c;    // deviation factor c_P
  double eps;  // admissible perturbation ceiling eps_P
};

struct PolytopeSpec {
  PolytopeType type;
  double phi;  // half the minimal vertex distance
  int f0;      // number of vertices
  PointSet vertices;
  StabilityConstants constants;
};

double polytope_phi(const PolytopeType& type);
int polytope_f0(const PolytopeType& type);
PolytopeSpec generate(const PolytopeType& type);

/// Certified constants as stated for each family. The simplex/crosspolytope
/// entries grow polynomially in d; the icosahedron and 600-cell entries are
/// chained ceilings far from tight.
StabilityConstants stability_constants(const PolytopeType& type);

/// epsilon ceiling used by the crosspolytope recovery hypothesis, 1/(64 d^4).
double crosspolytope_eps_ceiling(int d);

struct PackingReport {
  int count = 0;
  double min_distance = 0.0;
  bool separated = false;            // min_distance >= 2 (phi - eps)
  double sampled_covering_radius = 0.0;  // max over samples of the distance to the nearest point
  double covering_radius = 0.0;      // exact where available, otherwise the sampled value
  bool covering = false;             // covering_radius < 2 (phi - eps)
  bool origin_interior = false;      // o in int conv(points)
  bool valid() const { return separated; }
};

/// Checks a candidate packing against the hypotheses of the stability theorem.
/// The covering radius is sampled (`samples` uniform points) and, when the hull
/// is available, made exact through its deep holes (Delone circumcenters) or a
/// hemisphere witness.
PackingReport validate_packing(const PointSet& points, double phi, double eps,
                               std::uint64_t seed = 1, int samples = 100000);

/// Smallest pairwise geodesic distance.
double min_pairwise_distance(const PointSet& points);

}  // namespace sphstab
