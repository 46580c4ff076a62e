#include "sphstab/lemmas.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "sphstab/densities.hpp"
#include "sphstab/errors.hpp"
#include "sphstab/quadrature.hpp"
#include "sphstab/recovery.hpp"
#include "sphstab/sphgeo.hpp"

namespace sphstab {

namespace {

const double kPhiIco = 0.5 * std::acos(1.0 / std::sqrt(5.0));
const double kPhi600 = kPi / 10.0;

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string params(int d, double phi) {
  return "d=" + std::to_string(d) + " phi=" + fmt("%.6g", phi);
}

// lhs <= rhs (or < when strict).
LemmaRow upper(std::string lemma, std::string p, double lhs, double rhs, bool strict, bool gate = true) {
  const double slack = rhs - lhs;
  return {std::move(lemma), std::move(p), lhs, rhs, slack, strict ? slack > 0.0 : slack >= 0.0, gate};
}

// lhs >= rhs (or > when strict).
LemmaRow lower(std::string lemma, std::string p, double lhs, double rhs, bool strict, bool gate = true) {
  const double slack = lhs - rhs;
  return {std::move(lemma), std::move(p), lhs, rhs, slack, strict ? slack > 0.0 : slack >= 0.0, gate};
}

bool near(double a, double b) { return std::abs(a - b) < 1e-12; }

// Parameters of Theta(r_1(phi), ..., r_{d-2}(phi), t).
std::vector<double> long_parameters(int d, double phi, double t) {
  std::vector<double> p = regular_parameters(d, phi);
  p.back() = t;
  return p;
}

// eps values of the grid inside (0, ceiling), plus two values one and two
// decades below the ceiling so that narrow ranges are still exercised.
std::vector<double> eps_in_range(const std::vector<double>& grid, double ceiling) {
  std::vector<double> out;
  for (double e : grid)
    if (e > 0.0 && e < ceiling) out.push_back(e);
  for (double e : {0.1 * ceiling, 0.01 * ceiling})
    if (std::none_of(out.begin(), out.end(), [&](double x) { return std::abs(x - e) <= 1e-3 * e; }))
      out.push_back(e);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<double> default_eps_grid() { return {1e-8, 1e-7, 1e-6, 1e-5}; }
std::vector<double> default_gammas() { return {1e4, 1e5, 1e6, 1e7, 1e12}; }

double aleph(int d, double phi) {
  return d * std::pow(2.0, 0.5 * (d + 3)) / std::sin(circumradius_rj(d - 1, phi));
}

std::vector<LemmaRow> verify_volume_lemmas(double phi, int d, const std::vector<double>& eps_grid,
                                           const std::vector<double>& gammas) {
  if (d != 3 && d != 4) throw HypothesisError("volume lemmas are checked for d in {3, 4}");
  const double phi_max = std::asin(std::sqrt(d / (4.0 * (d - 1.0))));
  if (!(phi > 0.0 && phi < phi_max))
    throw HypothesisError("phi must lie in (0, " + fmt("%.6g", phi_max) + ")");
  std::vector<LemmaRow> rows;
  const std::string base = params(d, phi);
  const double a = aleph(d, phi);
  const std::vector<double> reg = regular_parameters(d, phi);
  const double vol = orthoscheme_volume(reg);
  const double dens = delta(reg);

  for (double eps : eps_grid) {
    if (!(eps > 0.0 && eps < phi)) continue;
    const std::vector<double> shrunk = regular_parameters(d, phi - eps);
    const std::string p = base + " eps=" + fmt("%.3g", eps);
    rows.push_back(lower("volume-shrink", p, orthoscheme_volume(shrunk), vol * (1.0 - a * eps), true));
    if (eps < 1.0 / (2.0 * a))
      rows.push_back(upper("density-shrink", p, delta(shrunk), dens * (1.0 + 2.0 * a * eps), false));
  }

  // Lengthening the last edge of the regular orthoscheme.
  const double r = reg.back();
  std::vector<double> offsets = eps_grid;
  for (double o : {0.01, 0.05, 0.1}) offsets.push_back(o);
  for (double o : offsets) {
    const double t = r + o;
    if (!(o > 0.0 && t > phi && t < kPi / 3)) continue;
    const double excess = orthoscheme_volume(long_parameters(d, phi, t)) - vol;
    rows.push_back(lower("long-excess", base + " t=r+" + fmt("%.3g", o), excess,
                         o / std::pow(2.0, d) * vol, false));
  }

  if (d == 3 && near(phi, kPhiIco)) {
    for (double eps : eps_in_range(eps_grid, 0.01)) {
      const std::string p = base + " eps=" + fmt("%.3g", eps);
      rows.push_back(upper("icosahedron-density-eps", p, delta(regular_parameters(3, phi - eps)),
                           3.0 / kPi + 80.0 * eps, true));
    }
    for (double g : gammas) {
      if (g < 1e4) continue;
      for (double eps : eps_in_range(eps_grid, 1.0 / (100.0 * g))) {
        const std::string p = base + " gamma=" + fmt("%.3g", g) + " eps=" + fmt("%.3g", eps);
        rows.push_back(upper("icosahedron-density-long", p, delta({phi - eps, r + g * eps}),
                             dens - g * eps / 200.0, false));
      }
    }
  }
  if (d == 4 && near(phi, kPhi600)) {
    const double c = 60.0 / (kPi * kPi);
    for (double eps : eps_in_range(eps_grid, 0.004)) {
      const std::string p = base + " eps=" + fmt("%.3g", eps);
      const double value = delta(regular_parameters(4, phi - eps));
      rows.push_back(upper("600-cell-density-eps", p, value, c * (1.0 + 240.0 * eps), true));
      rows.push_back(upper("600-cell-density-eps-linear", p, value, c + 1500.0 * eps, true));
    }
    for (double g : gammas) {
      if (g < 1e6) continue;
      for (double eps : eps_in_range(eps_grid, 1.0 / (100.0 * g))) {
        const std::string p = base + " gamma=" + fmt("%.3g", g) + " eps=" + fmt("%.3g", eps);
        const double r2 = circumradius_rj(2, phi - eps);
        rows.push_back(upper("600-cell-density-long", p, delta({phi - eps, r2, r + g * eps}),
                             dens - g * eps / 100.0, false));
      }
    }
  }
  return rows;
}

double icosahedron_delta0(double eps0) {
  return 1.0 / cap_volume(3, circumradius_rj(2, kPhiIco - eps0));
}

double cell600_delta0(double eps0) {
  const double phi = kPhi600 - eps0;
  const double r3 = circumradius_rj(3, phi);
  const double xi = std::acos(std::cos(r3) / std::cos(phi));
  const double rho = std::tan(xi), h = std::tan(phi);
  // Radial projection to the tangent space at z_1: the inner integral over the
  // disc of radius rho (1 - t/h) is done in closed form.
  const double cone = quad::integrate_interval(
      [&](double t) {
        const double rr = rho * (1.0 - t / h);
        return kPi * (1.0 / (1.0 + t * t) - 1.0 / (1.0 + t * t + rr * rr));
      },
      0.0, h, 1e-14);
  const double cos_alpha = std::tan(phi) / std::tan(r3);
  return (1.0 - cos_alpha) / (2.0 * cone);
}

std::vector<LemmaRow> verify_stability_constants() {
  std::vector<LemmaRow> rows;
  const double pi2 = kPi * kPi;

  // Icosahedron.
  {
    const double phi = kPhiIco;
    const std::string p = params(3, phi);
    const double a = aleph(3, phi);
    const double r2 = circumradius_rj(2, phi), rinf = circumradius_rinf(phi);
    rows.push_back(upper("icosahedron-aleph", p, a, 40.0, true));
    rows.push_back(upper("icosahedron-eps-range", p, 0.01, 1.0 / (2.0 * a), false));
    rows.push_back(upper("icosahedron-density-eps-constant", p, 3.0 / kPi * 2.0 * a, 80.0, false));
    const double d0 = icosahedron_delta0();
    rows.push_back(upper("icosahedron-delta0", p + " eps0=1e-06", d0, 3.0 / kPi - 0.175, true));
    rows.push_back(upper("icosahedron-delta0-value", p, std::abs(d0 - 0.7751), 5e-5, false));
    rows.push_back(upper("icosahedron-density-long-budget", p + " gamma=1e4",
                         80.0 / 1e4 - (3.0 / kPi - d0) / 10.0, -1.0 / 200.0, false));
    const double eta = 0.11, eps0 = 1e-9, gamma = 1e7;
    rows.push_back(upper("icosahedron-radius-gap", p + " eta=0.11 eps0=1e-9", r2 + gamma * eps0,
                         rinf - eta, true));
    rows.push_back(upper("icosahedron-radius-chain", p + " eta=0.11 eps0=1e-9", r2 + gamma * eps0,
                         r2 + eta, true));
    rows.push_back(upper("icosahedron-radius-chain-wide", p + " eta=0.11", r2 + eta, rinf - eta, true,
                         false));
    rows.push_back(lower("icosahedron-cap-floor", p + " eta=0.11", 2.0 * kPi * (1.0 - std::cos(eta)), 0.03,
                         true));
    const double side = 2.0 * std::sin(phi - eps0);
    rows.push_back(lower("icosahedron-triangle-floor", p, std::sqrt(3.0) / 4.0 * side * side, 0.4, true));
    for (double eps : {1e-10, 5e-10, 9.9e-10}) {
      const double lhs = 12.0 + 3.0 / kPi * (4.0 * kPi * 80.0 * eps - 0.03 * (gamma / 200.0) * eps);
      rows.push_back(upper("icosahedron-count-budget", p + " eps=" + fmt("%.3g", eps), lhs, 12.0, true));
    }
    rows.push_back(upper("icosahedron-cos-slope", p, 4.0 / std::pow(std::sin(r2), 2), 12.0, false));
    rows.push_back(upper("icosahedron-cos-base", p, 1.0 - 2.0 * std::pow(std::sin(phi) / std::sin(r2), 2),
                         -0.5 + 1e-12, false));
    for (double ge : {1e-4, 1e-3, 1e-2}) {
      rows.push_back(lower("icosahedron-angle-floor", p + " gamma*eps=" + fmt("%.3g", ge),
                           std::acos(-0.5 + 12.0 * ge), 2.0 * kPi / 3.0 - 16.0 * ge, false));
    }
    rows.push_back(upper("icosahedron-chain-constant", p, 16.0 * std::sqrt(2.0) / std::sin(phi), 44.0, true));
  }

  // 600-cell.
  {
    const double phi = kPhi600;
    const std::string p = params(4, phi);
    const double a = aleph(4, phi);
    const double r3 = circumradius_rj(3, phi), rinf = circumradius_rinf(phi);
    const double c = 60.0 / pi2;
    rows.push_back(upper("600-cell-aleph", p, a, 120.0, true));
    rows.push_back(upper("600-cell-eps-range", p, 0.004, 1.0 / (2.0 * a), false));
    rows.push_back(upper("600-cell-density-eps-constant", p, c * 240.0, 1500.0, true));
    const double d0 = cell600_delta0();
    rows.push_back(upper("600-cell-delta0", p + " eps0=1e-14", d0, c - 0.3, true));
    rows.push_back(upper("600-cell-density-long-budget", p + " gamma=1e6", 2e-3 - (c - d0) / 20.0,
                         -1.0 / 100.0, false));
    const double eta = 0.02, eps0 = 1e-14, gamma = 1e12;
    rows.push_back(upper("600-cell-radius-chain", p + " eta=0.02 eps0=1e-14", r3 + gamma * eps0, r3 + eta,
                         true));
    rows.push_back(upper("600-cell-radius-gap", p + " eta=0.02", r3 + eta, rinf - 2.0 * eta, true));
    const double s = std::sin(phi - eps0) / std::sin(r3 + 2.0 * eta);
    rows.push_back(upper("600-cell-cos-floor", p + " eta=0.02", 1.0 - 2.0 * s * s, -0.1, true));
    rows.push_back(lower("600-cell-tetrahedron-floor", p, std::sqrt(0.1) / 4.0, 0.07, true));
    rows.push_back(lower("600-cell-cap-floor", p + " eta=0.02", 4.0 * kPi / 3.0 * std::pow(std::sin(eta), 3),
                         1e-5, true));
    for (double eps : {1e-16, 5e-15, 9.9e-15}) {
      const double lhs = 120.0 + 2.0 * pi2 * 1500.0 * eps - 1e-5 * (gamma / 100.0) * eps;
      rows.push_back(upper("600-cell-count-budget", p + " eps=" + fmt("%.3g", eps), lhs, 120.0, true));
    }
    rows.push_back(upper("600-cell-cos-slope", p, 4.0 / std::pow(std::sin(r3), 2), 30.0, false));
    rows.push_back(upper("600-cell-cos-base", p, 1.0 - 2.0 * std::pow(std::sin(phi) / std::sin(r3), 2),
                         -1.0 / 3.0 + 1e-12, false));
    for (double ge : {1e-4, 1e-3, 1e-2}) {
      rows.push_back(lower("600-cell-angle-floor", p + " gamma*eps=" + fmt("%.3g", ge),
                           std::acos(-1.0 / 3.0 + 30.0 * ge), std::acos(-1.0 / 3.0) - 40.0 * ge, false));
    }
    rows.push_back(upper("600-cell-chain-constant", p, 16.0 * std::sqrt(3.0) / std::sin(phi), 90.0, true));
  }
  return rows;
}

std::vector<LemmaRow> default_lemma_suite() {
  std::vector<LemmaRow> rows;
  const auto grid = default_eps_grid();
  const auto gammas = default_gammas();
  for (auto [phi, d] : {std::pair{kPhiIco, 3}, std::pair{0.3, 3}, std::pair{kPhi600, 4}, std::pair{0.3, 4}}) {
    auto part = verify_volume_lemmas(phi, d, grid, gammas);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  auto constants = verify_stability_constants();
  rows.insert(rows.end(), constants.begin(), constants.end());
  return rows;
}

namespace {

using Rng = std::mt19937_64;

Vec gaussian(Rng& rng, int d) {
  std::normal_distribution<double> n;
  Vec v(d);
  for (int i = 0; i < d; ++i) v[i] = n(rng);
  return v;
}

Vec random_unit(Rng& rng, int d) { return gaussian(rng, d).normalized(); }

Mat random_orthogonal(Rng& rng, int d) {
  Mat a(d, d);
  for (int j = 0; j < d; ++j) a.col(j) = gaussian(rng, d);
  Eigen::HouseholderQR<Mat> qr(a);
  return qr.householderQ();
}

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

double log_uniform(Rng& rng, double lo, double hi) { return std::exp(uniform(rng, std::log(lo), std::log(hi))); }

struct Tally {
  InequalityReport rep;
  explicit Tally(std::string name) {
    rep.lemma = std::move(name);
    rep.min_slack = 1e300;
  }
  void add(double slack) {
    ++rep.instances;
    rep.min_slack = std::min(rep.min_slack, slack);
    if (slack < 0.0) ++rep.violations;
  }
};

double max_pair_inner(const std::vector<Vec>& u) {
  double m = -2.0;
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = i + 1; j < u.size(); ++j) m = std::max(m, u[i].dot(u[j]));
  return m;
}

// Regular simplex with `count` vertices spanning the first count - 1 coordinates of R^d.
std::vector<Vec> regular_simplex_in(int count, int d) {
  const int m = count - 1;
  std::vector<Vec> out;
  Mat gram = Mat::Constant(m, m, -1.0 / m);
  gram.diagonal().setOnes();
  const Mat l = gram.llt().matrixL();
  Vec sum = Vec::Zero(d);
  for (int i = 0; i < m; ++i) {
    Vec v = Vec::Zero(d);
    v.head(m) = l.row(i).transpose();
    sum += v;
    out.push_back(v);
  }
  out.push_back(-sum);
  return out;
}

InequalityReport check_basis(int samples, Rng& rng) {
  Tally t("almost-orthogonal-basis");
  for (int n = 2; n <= 6; ++n) {
    for (int s = 0; s < samples;) {
      const Mat q = random_orthogonal(rng, n);
      const double noise = log_uniform(rng, 1e-7, 0.5 / n);
      std::vector<Vec> u;
      for (int i = 0; i < n; ++i) u.push_back((q.col(i) + noise * gaussian(rng, n)).normalized());
      double eta = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) eta = std::max(eta, std::abs(u[i].dot(u[j])));
      if (!(eta < 1.0 / (n - 1))) continue;
      ++s;
      const std::vector<Vec> v = almost_orthogonal_basis(u, eta);
      double slack = 1e300;
      const double cross = eta / (1.0 - (n - 2) * eta);
      for (int i = 0; i < n; ++i) {
        slack = std::min(slack, u[i].dot(v[i]));
        for (int j = 0; j < n; ++j)
          if (i != j) slack = std::min(slack, cross + 1e-12 - std::abs(u[i].dot(v[j])));
        if (eta < 1.0 / (2 * n)) slack = std::min(slack, 2.0 * n * eta - angle_between(u[i], v[i]));
        // lin{v_i..v_n} = lin{u_i..u_n}.
        Mat span(n, n - i);
        for (int j = i; j < n; ++j) span.col(j - i) = u[j];
        const Mat qq = Eigen::HouseholderQR<Mat>(span).householderQ();
        const Mat basis = qq.leftCols(n - i);
        for (int j = i; j < n; ++j) {
          const double residual = (v[j] - basis * (basis.transpose() * v[j])).norm();
          slack = std::min(slack, 1e-10 - residual);
        }
      }
      t.add(slack);
    }
  }
  return t.rep;
}

InequalityReport check_hemisphere(int samples, Rng& rng) {
  Tally t("hemisphere-pair");
  for (int s = 0; s < samples; ++s) {
    const int d = 2 + s % 4;
    const Vec pole = random_unit(rng, d);
    std::vector<Vec> u;
    if (s % 2 == 0) {
      // A regular simplex on the boundary great sphere plus one more point.
      const Mat rot = random_orthogonal(rng, d);
      Vec ez = Vec::Zero(d);
      ez[d - 1] = 1.0;
      for (const Vec& w : regular_simplex_in(d, d)) u.push_back(rot * w);
      const Vec axis = rot * ez;
      Vec extra = random_unit(rng, d);
      if (extra.dot(axis) < 0) extra = -extra;
      u.push_back(extra);
    } else {
      for (int i = 0; i <= d; ++i) {
        Vec x = random_unit(rng, d);
        if (x.dot(pole) < 0) x = -x;
        u.push_back(x);
      }
    }
    t.add(max_pair_inner(u) + 1e-12);
  }
  return t.rep;
}

InequalityReport check_pigeonhole(int samples, Rng& rng) {
  Tally t("pigeonhole-pair");
  for (int s = 0; s < samples; ++s) {
    const int d = 2 + s % 4;
    std::vector<Vec> u;
    if (s % 2 == 0) {
      const Mat rot = random_orthogonal(rng, d);
      for (const Vec& w : regular_simplex_in(d + 1, d)) u.push_back((rot * w + 0.05 * gaussian(rng, d)).normalized());
      u.push_back(random_unit(rng, d));
    } else {
      for (int i = 0; i < d + 2; ++i) u.push_back(random_unit(rng, d));
    }
    t.add(max_pair_inner(u) + 1e-12);
  }
  return t.rep;
}

InequalityReport check_triangle(int samples, Rng& rng) {
  Tally t("triangle-area");
  for (int s = 0; s < samples;) {
    Eigen::Vector2d p[3];
    if (s % 2 == 0) {
      const double r = uniform(rng, 0.1, 2.0);
      for (int k = 0; k < 3; ++k) {
        const double a = 2.0 * kPi * k / 3.0 + uniform(rng, -0.2, 0.2);
        p[k] = r * Eigen::Vector2d(std::cos(a), std::sin(a));
      }
    } else {
      for (auto& x : p) x = Eigen::Vector2d(uniform(rng, -1, 1), uniform(rng, -1, 1));
    }
    double side[3];
    for (int k = 0; k < 3; ++k) side[k] = (p[(k + 1) % 3] - p[(k + 2) % 3]).norm();
    // Circumcenter inside the closed triangle: no obtuse angle.
    bool ok = true;
    for (int k = 0; k < 3; ++k)
      ok = ok && (p[(k + 1) % 3] - p[k]).dot(p[(k + 2) % 3] - p[k]) >= 0.0;
    const double a = std::min({side[0], side[1], side[2]});
    if (!ok || a < 1e-6) continue;
    ++s;
    const Eigen::Vector2d e1 = p[1] - p[0], e2 = p[2] - p[0];
    const double area = 0.5 * std::abs(e1.x() * e2.y() - e1.y() * e2.x());
    t.add((area - std::sqrt(3.0) / 4.0 * a * a) / (a * a));
  }
  return t.rep;
}

// x, y at distance R from v = e_3 with angle omega between the arcs.
std::pair<Eigen::Vector3d, Eigen::Vector3d> spoke_pair(double r, double omega) {
  const Eigen::Vector3d x(std::sin(r), 0.0, std::cos(r));
  const Eigen::Vector3d y(std::sin(r) * std::cos(omega), std::sin(r) * std::sin(omega), std::cos(r));
  return {x, y};
}

InequalityReport check_angle(int samples, Rng& rng) {
  Tally t("angle-bound");
  for (int s = 0; s < samples;) {
    const double r = uniform(rng, 1e-3, kPi / 2 - 1e-6);
    const double omega = uniform(rng, 1e-6, kPi);
    const auto [x, y] = spoke_pair(r, omega);
    const double dxy = angle_between(x, y);
    const double psi_max = std::min(r, 0.5 * dxy);
    if (psi_max <= 0.0) continue;
    const double psi = s % 2 == 0 ? psi_max * (1.0 - 1e-12) : uniform(rng, 0.0, psi_max);
    if (!(psi > 0.0 && psi < r)) continue;
    ++s;
    const double bound = 1.0 - 2.0 * std::pow(std::sin(psi) / std::sin(r), 2);
    t.add(bound - std::cos(omega) + 1e-12);
  }
  return t.rep;
}

InequalityReport check_angle_perturbed(int samples, Rng& rng) {
  Tally t("angle-bound-perturbed");
  for (int s = 0; s < samples;) {
    const double phi = uniform(rng, 0.05, 1.2);
    const double r = uniform(rng, phi + 1e-6, kPi / 2 - 1e-3);
    const double gamma = log_uniform(rng, 1.01, 1e4);
    const double eps_max = std::min(phi, (kPi / 2 - r) / gamma);
    if (eps_max <= 1e-10) continue;
    const double eps = log_uniform(rng, 1e-10, eps_max);
    const double psi = phi - eps;
    if (!(psi > 0.0 && r < kPi / 2 - gamma * eps)) continue;
    const double big_r = uniform(rng, psi, std::min(r + gamma * eps, kPi / 2 - 1e-9));
    if (!(big_r > psi)) continue;
    // delta(x, y) >= 2 psi  <=>  cos omega <= (cos 2psi - cos^2 R) / sin^2 R.
    const double c = (std::cos(2.0 * psi) - std::pow(std::cos(big_r), 2)) / std::pow(std::sin(big_r), 2);
    if (c < -1.0) continue;
    const double omega_min = std::acos(clamp_unit(c));
    const double omega = s % 2 == 0 ? omega_min : uniform(rng, omega_min, kPi);
    ++s;
    const double bound = 1.0 - 2.0 * std::pow(std::sin(phi) / std::sin(r), 2) +
                         4.0 * gamma * eps / std::pow(std::sin(r), 2);
    t.add(bound - std::cos(omega) + 1e-12);
  }
  return t.rep;
}

InequalityReport check_tetrahedron(int samples, Rng& rng) {
  Tally t("tetrahedron-volume");
  const std::vector<Vec> regular = regular_simplex_in(4, 3);
  for (int s = 0; s < samples;) {
    std::vector<Vec> u;
    if (s % 2 == 0) {
      const Mat rot = random_orthogonal(rng, 3);
      const double spread = log_uniform(rng, 1e-4, 0.6);
      for (const Vec& w : regular) u.push_back((rot * w + spread * gaussian(rng, 3)).normalized());
    } else {
      for (int i = 0; i < 4; ++i) u.push_back(random_unit(rng, 3));
    }
    const double theta = -max_pair_inner(u);
    if (!(theta > 0.0 && theta < 1.0 / 3.0)) continue;
    ++s;
    Mat m(3, 3);
    for (int k = 0; k < 3; ++k) m.col(k) = u[k + 1] - u[0];
    const double volume = std::abs(m.determinant()) / 6.0;
    t.add(volume - std::sqrt(theta) / 4.0);
  }
  return t.rep;
}

}  // namespace

std::vector<InequalityReport> check_geometric_inequalities(int samples, std::uint64_t seed) {
  if (samples <= 0) throw DomainError("check_geometric_inequalities: samples must be positive");
  Rng rng(seed);
  return {check_basis(samples, rng),    check_hemisphere(samples, rng), check_pigeonhole(samples, rng),
          check_triangle(samples, rng), check_angle(samples, rng),      check_angle_perturbed(samples, rng),
          check_tetrahedron(samples, rng)};
}

std::string lemma_csv(const std::vector<LemmaRow>& rows) {
  std::ostringstream out;
  out << "lemma,params,lhs,rhs,slack,pass,gate\n";
  for (const auto& r : rows)
    out << r.lemma << ",\"" << r.params << "\"," << fmt("%.17g", r.lhs) << ',' << fmt("%.17g", r.rhs) << ','
        << fmt("%.17g", r.slack) << ',' << (r.pass ? "true" : "false") << ',' << (r.gate ? "true" : "false")
        << '\n';
  return out.str();
}

}  // namespace sphstab
