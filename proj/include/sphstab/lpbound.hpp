#pragma once

// Gegenbauer polynomials Q_i (normalized Q_i(1) = 1) for S^{d-1}, the
// Delsarte linear-programming bound and the pair analysis it drives for
// near-crosspolytope packings.

#include <limits>
#include <vector>

#include "sphstab/sphgeo.hpp"

namespace sphstab {

/// Q_i(t) by the three-term recursion. d >= 2, i >= 0, t in [-1, 1].
double gegenbauer_eval(int d, int i, double t);
/// Q_0(t), ..., Q_k(t).
std::vector<double> gegenbauer_values(int d, int k, double t);

/// Monomial coefficients of Q_0..Q_k: row i holds Q_i = sum_j table(i, j) t^j.
struct GegenbauerBasis {
  int dim = 0;
  int max_degree = 0;
  Mat table;
};
GegenbauerBasis gegenbauer_basis(int d, int k);

/// Coefficients f_i with poly = sum f_i Q_i; `monomial[j]` multiplies t^j.
std::vector<double> expand_in_gegenbauer(int d, const std::vector<double>& monomial);

/// Evaluates a monomial-coefficient polynomial (Horner).
double eval_monomial(const std::vector<double>& monomial, double t);

struct LPCertificate {
  int dim = 0;
  std::vector<double> coeffs;  // f_0, ..., f_k in the Gegenbauer basis
  double s = 0.0;              // f <= 0 is required on [-1, s]

  static LPCertificate from_monomial(int d, const std::vector<double>& monomial, double s);
  double operator()(double t) const;
  double f0() const { return coeffs.empty() ? 0.0 : coeffs[0]; }
  double bound() const { return (*this)(1.0) / f0(); }
};

struct SignReport {
  bool coefficients_ok = false;  // f_0 > 0, f_i >= 0
  bool nonpositive_ok = false;   // f <= 0 on [-1, s]
  double max_value = 0.0;        // max of f on [-1, s]
  double argmax = 0.0;
  double violating_t = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> roots;     // sign changes located on [-1, s]
  bool ok() const { return coefficients_ok && nonpositive_ok; }
};

/// Grid (1e4 points) plus bisection/golden-section refinement, tolerance 1e-12.
SignReport check_certificate(const LPCertificate& cert);

/// |X| <= f(1)/f_0. Throws CertificateError (carrying the violating t) when the
/// sign conditions fail.
double lp_bound(const LPCertificate& cert);

struct LPSlackReport {
  double lhs = 0.0;  // |X| f(1) + sum_{x != y} f(<x,y>)
  double rhs = 0.0;  // |X|^2 f_0
  bool holds = false;
  Mat pair_values;               // f(<x_a, x_b>), zero diagonal
  double pair_lower_bound = 0.0; // |X|^2 f_0 - |X| f(1)
  double min_pair_value = 0.0;
  double min_pair_slack = 0.0;   // min_{a != b} f(<x_a,x_b>) - pair_lower_bound
};

LPSlackReport lp_inequality_check(const PointSet& points, const LPCertificate& cert);

enum class PairLabel { Self, NearAntipodal, NearOrthogonal };

struct PairClassification {
  double s = 0.0;    // sin 2 eps
  double eta = 0.0;  // 8 d (d - 1) s
  std::vector<std::vector<PairLabel>> labels;
  std::vector<int> partner;                     // the unique near-antipodal partner
  std::vector<std::pair<int, int>> antipodal_pairs;  // (a, b), a < b, ordered by a
  double max_orthogonal_abs = 0.0;              // max |<x,y>| over near-orthogonal pairs
  double max_antipodal_inner = -1.0;            // max <x,y> over near-antipodal pairs
};

double crosspolytope_eta(int d, double eps);

/// Splits the pairs of a 2d-point near-crosspolytope into the two bands
/// <x,y> <= -3/4 and |<x,y>| <= eta. Throws StructuralViolation when a pair
/// fits neither band or a point lacks a unique antipodal partner, and
/// HypothesisError when |X| != 2d or eps >= 1/(64 d^4) (the latter only with
/// `enforce_eps_range`).
PairClassification classify_crosspolytope_pairs(const PointSet& points, double eps,
                                                bool enforce_eps_range = true);

}  // namespace sphstab
