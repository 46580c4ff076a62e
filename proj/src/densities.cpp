#include "sphstab/densities.hpp"

#include <cmath>
#include <string>

#include "sphstab/errors.hpp"
#include "sphstab/quadrature.hpp"

namespace sphstab {

namespace {

constexpr double kAgreementTolerance = 1e-7;

void check_parameters(const std::vector<double>& t) {
  const int d = static_cast<int>(t.size()) + 1;
  if (d < kMinDim || d > kMaxDim)
    throw DimensionError("orthoscheme needs 1..4 parameters, got " + std::to_string(t.size()));
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] > 0.0 && t[i] < kPi / 2))
      throw DomainError("orthoscheme parameters must lie in (0, pi/2)");
    if (i > 0 && !(t[i] > t[i - 1]))
      throw DomainError("orthoscheme parameters must be strictly increasing");
  }
}

// Unit tangent at z_0 of the arc towards z_i.
Vec apex_tangent(const Orthoscheme& o, int i) {
  Vec w = o.z[i] - o.z[i].dot(o.z[0]) * o.z[0];
  return w.normalized();
}

// L'Huilier area of a spherical triangle with sides a, b, c.
double lhuilier_area(double a, double b, double c) {
  const double s = 0.5 * (a + b + c);
  const double p = std::tan(0.5 * s) * std::tan(0.5 * (s - a)) * std::tan(0.5 * (s - b)) *
                   std::tan(0.5 * (s - c));
  return 4.0 * std::atan(std::sqrt(std::max(p, 0.0)));
}

// Angle at z_0 between the arcs to p and q, both at distance rho from z_0.
double apex_angle(const Vec& p, const Vec& q, double rho) {
  const double s2 = std::sin(rho) * std::sin(rho);
  const double c2 = std::cos(rho) * std::cos(rho);
  return std::acos(clamp_unit((p.dot(q) - c2) / s2));
}

}  // namespace

Mat Orthoscheme::matrix() const {
  const int d = dim();
  Mat m(d, d);
  for (int i = 0; i < d; ++i) m.col(i) = z[i];
  return m;
}

Orthoscheme build_orthoscheme(const std::vector<double>& t) {
  check_parameters(t);
  const int d = static_cast<int>(t.size()) + 1;
  Orthoscheme o;
  o.t = t;
  Vec y = Vec::Zero(d);
  Vec e1 = Vec::Zero(d);
  e1[0] = 1.0;
  o.z.push_back(e1);
  double prev = 0.0;
  for (int i = 1; i < d; ++i) {
    const double tan_i = std::tan(t[i - 1]);
    y[i] = std::sqrt(tan_i * tan_i - prev * prev);
    prev = tan_i;
    o.z.push_back((e1 + y).normalized());
  }
  return o;
}

double orthoscheme_volume(const Orthoscheme& o) {
  const int d = o.dim();
  if (d == 2) return o.t[0];
  if (d > 4) throw DimensionError("orthoscheme volumes are available for d <= 4");
  return simplex_volume_unchecked(o.matrix());
}

double orthoscheme_volume(const std::vector<double>& t) {
  return orthoscheme_volume(build_orthoscheme(t));
}

namespace {

double cap_ratio(const Orthoscheme& o, double volume, double probe) {
  const int d = o.dim();
  if (!(probe > 0.0 && probe <= o.t[0])) throw DomainError("probe radius must lie in (0, t_1]");
  // Points on the edges z_0 z_i at distance `probe`: the cap cuts Theta in the
  // cone over the spherical simplex they span on the sphere S(z_0, probe).
  std::vector<Vec> p;
  for (int i = 1; i < d; ++i) {
    const Vec w = apex_tangent(o, i);
    p.push_back(std::cos(probe) * o.z[0] + std::sin(probe) * w);
  }
  double section = 0.0;  // measure on the unit (d-2)-sphere
  if (d == 2) section = 1.0;
  else if (d == 3) section = apex_angle(p[0], p[1], probe);
  else if (d == 4)
    section = lhuilier_area(apex_angle(p[1], p[2], probe),
                            apex_angle(p[0], p[2], probe),
                            apex_angle(p[0], p[1], probe));
  else throw DimensionError("cap ratios are available for d <= 4");
  const double radial = quad::integrate_interval(
      [d](double r) { return std::pow(std::sin(r), d - 2); }, 0.0, probe, 1e-14);
  const double inside = section * radial;
  return inside / (volume * cap_volume(d, probe));
}

}  // namespace

double apex_cone_fraction(const Orthoscheme& o) {
  const int d = o.dim();
  if (d == 2) return 0.5;
  if (d == 3) {
    const Vec a = apex_tangent(o, 1), b = apex_tangent(o, 2);
    return angle_between(a, b) / (2.0 * kPi);
  }
  if (d == 4) {
    Mat w(3, 3);
    for (int i = 0; i < 3; ++i) w.col(i) = apex_tangent(o, i + 1).tail(3);
    double excess = -kPi;
    for (int i = 0; i < 3; ++i) {
      const Eigen::Vector3d a = w.col(i), b = w.col((i + 1) % 3), c = w.col((i + 2) % 3);
      const Eigen::Vector3d tb = b - a.dot(b) * a, tc = c - a.dot(c) * a;
      excess += std::atan2(tb.cross(tc).norm(), tb.dot(tc));
    }
    return excess / (4.0 * kPi);
  }
  throw DimensionError("apex cone fractions are available for d <= 4");
}

double delta_cap_ratio(const std::vector<double>& t, double probe) {
  const Orthoscheme o = build_orthoscheme(t);
  return cap_ratio(o, orthoscheme_volume(o), probe);
}

double delta(const std::vector<double>& t) {
  const Orthoscheme o = build_orthoscheme(t);
  if (o.dim() > 4) throw DimensionError("Delta is available for d <= 4");
  const double volume = orthoscheme_volume(o);
  const double solid = apex_cone_fraction(o) / volume;
  const double cap = cap_ratio(o, volume, 0.5 * t[0]);
  if (std::abs(solid - cap) > kAgreementTolerance * std::max(1.0, std::abs(solid)))
    throw Error("Delta: cap-ratio and solid-angle forms disagree (" + std::to_string(cap) +
                " vs " + std::to_string(solid) + ")");
  return solid;
}

std::vector<double> regular_parameters(int d, double phi) {
  if (d < 2) throw DimensionError("regular_parameters: d must be >= 2");
  std::vector<double> t;
  for (int j = 1; j < d; ++j) t.push_back(circumradius_rj(j, phi));
  return t;
}

double simplex_bound(int d, double sigma) {
  if (d < 2 || d > 4) throw DimensionError("simplex_bound is available for d in [2, 4]");
  if (!(sigma > 0.0 && sigma < kPi / 2)) throw DomainError("simplex_bound: sigma must lie in (0, pi/2)");
  return delta(regular_parameters(d, sigma)) * sphere_measure(d);
}

bool check_delta_monotone(const std::vector<double>& t, const std::vector<double>& s) {
  if (t.size() != s.size()) throw DimensionError("check_delta_monotone: parameter count mismatch");
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] > s[i]) throw DomainError("check_delta_monotone: requires t_i <= s_i");
  return delta(t) >= delta(s) - 1e-9;
}

}  // namespace sphstab
