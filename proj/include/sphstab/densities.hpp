#pragma once

// Orthoschemes Theta(t_1, ..., t_{d-1}), the cap density Delta of an
// orthoscheme about its apex z_0, and the simplex bound built from it.

#include <vector>

#include "sphstab/sphgeo.hpp"

namespace sphstab {

struct Orthoscheme {
  std::vector<double> t;  // t_1 < ... < t_{d-1}
  std::vector<Vec> z;     // z_0, ..., z_{d-1}; delta(z_0, z_i) = t_i

  int dim() const { return static_cast<int>(t.size()) + 1; }
  double diameter() const { return t.back(); }
  /// Vertices as columns.
  Mat matrix() const;
};

/// Canonical realization: z_0 = e_1 and z_i moves off the great sphere through
/// z_0..z_{i-1} along e_{i+1}. d = t.size() + 1 must lie in [2, 5]; throws
/// DomainError unless 0 < t_1 < ... < t_{d-1} < pi/2.
Orthoscheme build_orthoscheme(const std::vector<double>& t);

/// Volume for d in [2, 4] (arc, Girard, quadrature).
double orthoscheme_volume(const Orthoscheme& o);
double orthoscheme_volume(const std::vector<double>& t);

/// H^{d-2}(Psi cap S^{d-1}) / H^{d-2}(S^{d-2}) for the tangent cone Psi at z_0.
double apex_cone_fraction(const Orthoscheme& o);

/// Delta from the cap ratio |Theta cap B(z_0, probe)| / (|Theta| |B(z_0, probe)|),
/// probe in (0, t_1].
double delta_cap_ratio(const std::vector<double>& t, double probe);

/// Delta from the tangent-cone solid angle. Also evaluates the cap ratio at
/// t_1 / 2 and throws Error if the two differ by more than 1e-7.
double delta(const std::vector<double>& t);

/// Delta(r_1(sigma), ..., r_{d-1}(sigma)) |S^{d-1}|, d in [2, 4].
double simplex_bound(int d, double sigma);

/// Delta(t) >= Delta(s) - 1e-9; requires t_i <= s_i componentwise.
bool check_delta_monotone(const std::vector<double>& t, const std::vector<double>& s);

/// (r_1(phi), ..., r_{d-1}(phi)).
std::vector<double> regular_parameters(int d, double phi);

}  // namespace sphstab
