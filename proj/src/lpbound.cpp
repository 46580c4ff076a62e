#include "sphstab/lpbound.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sphstab/errors.hpp"

namespace sphstab {

namespace {

constexpr int kGridPoints = 10000;
constexpr double kSignTolerance = 1e-12;

void check_gegenbauer_args(int d, int i) {
  if (d < 2) throw DimensionError("Gegenbauer polynomials need d >= 2");
  if (i < 0) throw DomainError("Gegenbauer degree must be nonnegative");
}

double golden_max(const LPCertificate& f, double a, double b, double& arg) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - r * (b - a), x2 = a + r * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > kSignTolerance) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + r * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - r * (b - a);
      f1 = f(x1);
    }
  }
  arg = 0.5 * (a + b);
  return f(arg);
}

double bisect_root(const LPCertificate& f, double a, double b) {
  double fa = f(a);
  while (b - a > kSignTolerance) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

double gegenbauer_eval(int d, int i, double t) {
  check_gegenbauer_args(d, i);
  return gegenbauer_values(d, i, t)[i];
}

std::vector<double> gegenbauer_values(int d, int k, double t) {
  check_gegenbauer_args(d, k);
  std::vector<double> q(k + 1);
  q[0] = 1.0;
  if (k >= 1) q[1] = t;
  for (int i = 1; i < k; ++i) q[i + 1] = ((2.0 * i + d - 2) * t * q[i] - i * q[i - 1]) / (i + d - 2.0);
  return q;
}

GegenbauerBasis gegenbauer_basis(int d, int k) {
  check_gegenbauer_args(d, k);
  GegenbauerBasis b{d, k, Mat::Zero(k + 1, k + 1)};
  b.table(0, 0) = 1.0;
  if (k >= 1) b.table(1, 1) = 1.0;
  for (int i = 1; i < k; ++i) {
    for (int j = 0; j <= i; ++j) b.table(i + 1, j + 1) += (2.0 * i + d - 2) * b.table(i, j);
    for (int j = 0; j < i; ++j) b.table(i + 1, j) -= i * b.table(i - 1, j);
    b.table.row(i + 1) /= (i + d - 2.0);
  }
  return b;
}

std::vector<double> expand_in_gegenbauer(int d, const std::vector<double>& monomial) {
  if (monomial.empty()) return {0.0};
  const int k = static_cast<int>(monomial.size()) - 1;
  const GegenbauerBasis b = gegenbauer_basis(d, k);
  std::vector<double> rest = monomial;
  std::vector<double> f(k + 1, 0.0);
  for (int i = k; i >= 0; --i) {
    f[i] = rest[i] / b.table(i, i);
    for (int j = 0; j <= i; ++j) rest[j] -= f[i] * b.table(i, j);
  }
  return f;
}

double eval_monomial(const std::vector<double>& monomial, double t) {
  double acc = 0.0;
  for (auto it = monomial.rbegin(); it != monomial.rend(); ++it) acc = acc * t + *it;
  return acc;
}

LPCertificate LPCertificate::from_monomial(int d, const std::vector<double>& monomial, double s) {
  return {d, expand_in_gegenbauer(d, monomial), s};
}

double LPCertificate::operator()(double t) const {
  if (coeffs.empty()) return 0.0;
  const auto q = gegenbauer_values(dim, static_cast<int>(coeffs.size()) - 1, t);
  double acc = 0.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) acc += coeffs[i] * q[i];
  return acc;
}

SignReport check_certificate(const LPCertificate& cert) {
  if (cert.dim < 2) throw DimensionError("certificate needs d >= 2");
  if (!(cert.s > -1.0 && cert.s < 1.0)) throw DomainError("certificate endpoint s must lie in (-1, 1)");
  SignReport r;
  double scale = 0.0;
  for (double c : cert.coeffs) scale = std::max(scale, std::abs(c));
  r.coefficients_ok = cert.f0() > 0.0;
  for (std::size_t i = 1; i < cert.coeffs.size(); ++i)
    if (cert.coeffs[i] < -1e-14 * scale) r.coefficients_ok = false;

  std::vector<double> t(kGridPoints + 1), v(kGridPoints + 1);
  for (int k = 0; k <= kGridPoints; ++k) {
    t[k] = -1.0 + (cert.s + 1.0) * k / kGridPoints;
    v[k] = cert(t[k]);
  }
  const auto top = std::max_element(v.begin(), v.end());
  r.max_value = *top;
  r.argmax = t[top - v.begin()];
  for (int k = 1; k < kGridPoints; ++k) {
    if (v[k] >= v[k - 1] && v[k] >= v[k + 1]) {
      double arg = 0.0;
      const double m = golden_max(cert, t[k - 1], t[k + 1], arg);
      if (m > r.max_value) {
        r.max_value = m;
        r.argmax = arg;
      }
    }
  }
  for (int k = 0; k < kGridPoints; ++k)
    if ((v[k] < 0.0 && v[k + 1] > 0.0) || (v[k] > 0.0 && v[k + 1] < 0.0))
      r.roots.push_back(bisect_root(cert, t[k], t[k + 1]));

  r.nonpositive_ok = r.max_value <= kSignTolerance;
  if (!r.nonpositive_ok) r.violating_t = r.argmax;
  return r;
}

double lp_bound(const LPCertificate& cert) {
  const SignReport r = check_certificate(cert);
  if (!r.coefficients_ok)
    throw CertificateError("LP certificate: need f_0 > 0 and f_i >= 0 for i >= 1", r.violating_t);
  if (!r.nonpositive_ok)
    throw CertificateError("LP certificate: f(" + std::to_string(r.violating_t) + ") = " +
                               std::to_string(r.max_value) + " > 0 on [-1, s]",
                           r.violating_t);
  return cert.bound();
}

LPSlackReport lp_inequality_check(const PointSet& points, const LPCertificate& cert) {
  const int n = static_cast<int>(points.size());
  LPSlackReport r;
  r.pair_values = Mat::Zero(n, n);
  const double f1 = cert(1.0);
  r.lhs = n * f1;
  r.rhs = static_cast<double>(n) * n * cert.f0();
  r.pair_lower_bound = r.rhs - n * f1;
  r.min_pair_value = std::numeric_limits<double>::infinity();
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      if (points[a].dim() != cert.dim || points[b].dim() != cert.dim)
        throw DimensionError("lp_inequality_check: point dimension differs from the certificate's");
      const double f = cert(clamp_unit(points[a].vec().dot(points[b].vec())));
      r.pair_values(a, b) = r.pair_values(b, a) = f;
      r.lhs += 2.0 * f;
      r.min_pair_value = std::min(r.min_pair_value, f);
    }
  if (n < 2) r.min_pair_value = 0.0;
  r.min_pair_slack = r.min_pair_value - r.pair_lower_bound;
  r.holds = r.lhs - r.rhs >= -1e-9;
  return r;
}

double crosspolytope_eta(int d, double eps) { return 8.0 * d * (d - 1) * std::sin(2.0 * eps); }

PairClassification classify_crosspolytope_pairs(const PointSet& points, double eps, bool enforce_eps_range) {
  const int n = static_cast<int>(points.size());
  if (n == 0) throw HypothesisError("classify_crosspolytope_pairs: empty input");
  const int d = points.front().dim();
  if (n != 2 * d)
    throw HypothesisError("classify_crosspolytope_pairs: need exactly 2d = " + std::to_string(2 * d) +
                          " points, got " + std::to_string(n));
  if (!(eps >= 0.0) || (enforce_eps_range && !(eps < 1.0 / (64.0 * std::pow(d, 4)))))
    throw HypothesisError("classify_crosspolytope_pairs: eps must lie in [0, 1/(64 d^4))");

  PairClassification c;
  c.s = std::sin(2.0 * eps);
  c.eta = crosspolytope_eta(d, eps);
  c.labels.assign(n, std::vector<PairLabel>(n, PairLabel::Self));
  c.partner.assign(n, -1);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      if (points[b].dim() != d) throw DimensionError("classify_crosspolytope_pairs: dimension mismatch");
      const double ip = points[a].vec().dot(points[b].vec());
      PairLabel label;
      if (ip <= -0.75) {
        label = PairLabel::NearAntipodal;
        c.max_antipodal_inner = std::max(c.max_antipodal_inner, ip);
        if (c.partner[a] >= 0 || c.partner[b] >= 0)
          throw StructuralViolation("point " + std::to_string(c.partner[a] >= 0 ? a : b) +
                                    " has two near-antipodal partners");
        c.partner[a] = b;
        c.partner[b] = a;
        c.antipodal_pairs.emplace_back(a, b);
      } else if (std::abs(ip) <= c.eta) {
        label = PairLabel::NearOrthogonal;
        c.max_orthogonal_abs = std::max(c.max_orthogonal_abs, std::abs(ip));
      } else {
        throw StructuralViolation("pair (" + std::to_string(a) + ", " + std::to_string(b) +
                                  ") has inner product " + std::to_string(ip) +
                                  ", outside both bands (eta = " + std::to_string(c.eta) + ")");
      }
      c.labels[a][b] = c.labels[b][a] = label;
    }
  for (int a = 0; a < n; ++a)
    if (c.partner[a] < 0) throw StructuralViolation("point " + std::to_string(a) + " has no near-antipodal partner");
  std::sort(c.antipodal_pairs.begin(), c.antipodal_pairs.end());
  return c;
}

}  // namespace sphstab
