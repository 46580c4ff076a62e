#pragma once

// Numerical checks of the volume/density inequalities behind the stability
// theorem, of the constants its proofs rely on, and randomized checks of the
// elementary geometric lemmas.

#include <cstdint>
#include <string>
#include <vector>

namespace sphstab {

struct LemmaRow {
  std::string lemma;
  std::string params;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // positive when the inequality holds
  bool pass = false;
  bool gate = true;    // false for rows recorded for information only
};

/// {1e-8, 1e-7, 1e-6, 1e-5}.
std::vector<double> default_eps_grid();
/// {1e4, 1e5, 1e6, 1e7, 1e12}; each lemma keeps the values in its range.
std::vector<double> default_gammas();

/// d 2^{(d+3)/2} / sin r_{d-1}(phi).
double aleph(int d, double phi);

/// Both sides of the orthoscheme volume and density inequalities for every eps
/// in the grid that lies in the respective range. The icosahedron (d = 3,
/// phi = phi_I) and 600-cell (d = 4, phi = pi/10) settings add their specific
/// estimates. Throws HypothesisError unless d in {3, 4} and
/// phi < asin sqrt(d / (4(d-1))).
std::vector<LemmaRow> verify_volume_lemmas(double phi, int d, const std::vector<double>& eps_grid,
                                           const std::vector<double>& gammas);

/// 1 / |B(z_0, r_2(phi_I - eps0))|.
double icosahedron_delta0(double eps0 = 1e-6);
/// (1 - cos alpha) / (2 |C_0|) for the cone C_0 of the 600-cell argument.
double cell600_delta0(double eps0 = 1e-14);

/// Numeric constants used by the icosahedron and 600-cell arguments.
std::vector<LemmaRow> verify_stability_constants();

/// verify_volume_lemmas for both polytopes and a generic angle in each
/// dimension, followed by verify_stability_constants.
std::vector<LemmaRow> default_lemma_suite();

struct InequalityReport {
  std::string lemma;
  int instances = 0;
  int violations = 0;
  double min_slack = 0.0;
  bool pass() const { return violations == 0 && instances > 0; }
};

/// Randomized instances (`samples` per lemma) of the almost-orthogonal basis
/// bounds, the hemisphere lemma and its corollary, the triangle area bound,
/// the angle bounds (i) and (ii) and the tetrahedron volume bound.
std::vector<InequalityReport> check_geometric_inequalities(int samples, std::uint64_t seed = 1);

/// CSV with header lemma,params,lhs,rhs,slack,pass,gate.
std::string lemma_csv(const std::vector<LemmaRow>& rows);

}  // namespace sphstab
