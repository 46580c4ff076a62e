#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sphstab/cells.hpp"
#include "sphstab/errors.hpp"
#include "sphstab/experiment.hpp"
#include "sphstab/lpbound.hpp"
#include "sphstab/polytopes.hpp"
#include "sphstab/recovery.hpp"

using namespace sphstab;

namespace {

PointSet rotate(const Mat& r, const PointSet& pts) {
  PointSet out;
  for (const auto& p : pts) out.emplace_back(Vec(r * p.vec()));
  return out;
}

bool orthogonal(const Mat& m, double tol = 1e-12) {
  const Mat g = m.transpose() * m - Mat::Identity(m.rows(), m.cols());
  return g.cwiseAbs().maxCoeff() <= tol && std::abs(std::abs(m.determinant()) - 1.0) <= 1e-10;
}

double max_offdiag(const std::vector<Vec>& u) {
  double m = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = i + 1; j < u.size(); ++j) m = std::max(m, std::abs(u[i].dot(u[j])));
  return m;
}

// Residual of v_k after projection onto lin{u_k, ..., u_{n-1}}.
double span_residual(const std::vector<Vec>& u, const std::vector<Vec>& v, int k) {
  const int n = static_cast<int>(u.size());
  Mat a(n, n - k);
  for (int j = k; j < n; ++j) a.col(j - k) = u[j];
  double worst = 0.0;
  for (int j = k; j < n; ++j) {
    const Vec coef = a.colPivHouseholderQr().solve(v[j]);
    worst = std::max(worst, (a * coef - v[j]).norm());
  }
  return worst;
}

std::vector<Vec> perturbed_basis(std::mt19937_64& rng, int n, double angle) {
  std::vector<Vec> u;
  for (int i = 0; i < n; ++i) {
    Vec t = oracle::random_unit(rng, n);
    const Vec e = Vec::Unit(n, i);
    t -= t.dot(e) * e;
    u.push_back(std::cos(angle) * e + std::sin(angle) * t.normalized());
  }
  return u;
}

std::vector<double> sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("almost orthogonal basis: fixed point and closed form") {
  std::vector<Vec> e;
  for (int i = 0; i < 4; ++i) e.push_back(Vec::Unit(4, i));
  const auto v = almost_orthogonal_basis(e, 0.0);
  for (int i = 0; i < 4; ++i) CHECK((v[i] - e[i]).norm() == 0.0);

  const double alpha = 0.01;
  Vec u1(2), u2(2);
  u1 << 1.0, 0.0;
  u2 << std::sin(alpha), std::cos(alpha);
  const double eta = std::sin(alpha);
  const auto w = almost_orthogonal_basis({u1, u2}, eta);
  CHECK((w[1] - u2).norm() <= 1e-15);  // v_n = u_n
  CHECK(std::abs(w[0][0] - std::cos(alpha)) <= 1e-15);
  CHECK(std::abs(w[0][1] + std::sin(alpha)) <= 1e-15);
  CHECK(u1.dot(w[0]) > 0.0);
  CHECK(angle_between(u1, w[0]) == doctest::Approx(alpha).epsilon(1e-12));
  CHECK(angle_between(u1, w[0]) <= 4.0 * eta);
}

TEST_CASE("almost orthogonal basis: postconditions on random inputs") {
  std::mt19937_64 rng(5);
  for (int n = 2; n <= 6; ++n) {
    int checked = 0;
    for (int s = 0; s < 1000; ++s) {
      const double angle = std::exp(std::uniform_real_distribution<double>(std::log(1e-8), std::log(0.05 / n))(rng));
      const auto u = perturbed_basis(rng, n, angle);
      const double eta = max_offdiag(u);
      if (!(eta < 1.0 / (n - 1))) continue;
      const auto v = almost_orthogonal_basis(u, eta);
      for (int i = 0; i < n; ++i) {
        CHECK(u[i].dot(v[i]) > 0.0);
        for (int j = 0; j < n; ++j) {
          CHECK(std::abs(v[i].dot(v[j]) - (i == j ? 1.0 : 0.0)) <= 1e-12);
          if (i != j) CHECK(std::abs(u[i].dot(v[j])) <= eta / (1.0 - (n - 2) * eta) + 1e-15);
        }
        CHECK(span_residual(u, v, i) <= 1e-10);
        if (eta < 1.0 / (2 * n)) CHECK(angle_between(u[i], v[i]) <= 2.0 * n * eta + 1e-15);
      }
      ++checked;
    }
    CHECK(checked == 1000);
  }
  std::vector<Vec> bad{Vec::Unit(3, 0), Vec::Unit(3, 1), (Vec::Unit(3, 0) + Vec::Unit(3, 2)).normalized()};
  CHECK_THROWS_AS(almost_orthogonal_basis(bad, 0.1), HypothesisError);
  CHECK_THROWS_AS(almost_orthogonal_basis(bad, 0.6), DomainError);
  CHECK_THROWS_AS(almost_orthogonal_basis({Vec::Unit(3, 0)}, 0.0), DimensionError);
}

TEST_CASE("simplex recovery: exact input") {
  for (int d = 2; d <= 5; ++d) {
    const PolytopeSpec spec = generate(PolytopeType::simplex(d));
    const RecoveryResult r = recover_simplex(spec.vertices, 0.0);
    CHECK(r.max_deviation <= 1e-10);
    CHECK(r.pass);
    CHECK(orthogonal(r.rotation));
  }
}

TEST_CASE("simplex recovery: perturbed input and exact regular output") {
  std::mt19937_64 rng(11);
  for (int d = 3; d <= 5; ++d) {
    const PolytopeSpec spec = generate(PolytopeType::simplex(d));
    for (double eps : {1e-7, 1e-6, 1e-5}) {
      const Mat q = oracle::random_orthogonal(rng, d);
      const PointSet u = oracle::jitter(rotate(q, spec.vertices), eps, rng);
      const RecoveryResult r = recover_simplex(u, eps);
      CHECK(r.pass);
      CHECK(r.max_deviation <= 9.0 * std::pow(d, 3.5) * eps);
      CHECK(orthogonal(r.rotation));
      for (int i = 0; i <= d; ++i)
        for (int j = i + 1; j <= d; ++j) CHECK(std::abs(r.fitted[i].dot(r.fitted[j]) + 1.0 / d) <= 1e-12);
    }
  }
  const PolytopeSpec s3 = generate(PolytopeType::simplex(3));
  const RecoveryResult r = recover_simplex(oracle::jitter(s3.vertices, 1e-5, rng), 1e-5);
  CHECK(r.max_deviation <= 4.21e-3);
}

TEST_CASE("simplex recovery: triangle path") {
  const double eps = 1e-4;
  auto at = [](double a) { return UnitVector{std::cos(a), std::sin(a)}; };
  const PointSet u{at(0.0), at(2 * kPi / 3 - 2 * eps), at(4 * kPi / 3 - eps)};
  const RecoveryResult r = recover_simplex(u, eps);
  CHECK(r.pass);
  CHECK(r.max_deviation <= 3.0 * eps);
  CHECK(r.minimax_deviation <= r.max_deviation + 1e-15);
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) CHECK(std::abs(r.fitted[i].dot(r.fitted[j]) + 0.5) <= 1e-12);
}

TEST_CASE("simplex recovery: hypothesis errors") {
  const PolytopeSpec spec = generate(PolytopeType::simplex(3));
  PointSet u = spec.vertices;
  u[1] = UnitVector(Vec((u[1].vec() + 0.2 * u[0].vec()).normalized()));
  CHECK_THROWS_AS(recover_simplex(u, 1e-6), HypothesisError);
  CHECK_THROWS_AS(recover_simplex(spec.vertices, 1.0), HypothesisError);
  PointSet three(spec.vertices.begin(), spec.vertices.begin() + 3);
  CHECK_THROWS_AS(recover_simplex(three, 0.0), HypothesisError);
}

TEST_CASE("simplex recovery: equivariance") {
  std::mt19937_64 rng(23);
  for (int d = 3; d <= 5; ++d) {
    const PolytopeSpec spec = generate(PolytopeType::simplex(d));
    for (int s = 0; s < 10; ++s) {
      const PointSet u = oracle::jitter(spec.vertices, 1e-5, rng);
      const Mat q = oracle::random_orthogonal(rng, d);
      const auto a = sorted(recover_simplex(u, 1e-5).deviations);
      const auto b = sorted(recover_simplex(rotate(q, u), 1e-5).deviations);
      for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-10);
    }
  }
}

TEST_CASE("simplex recovery: monotone in the perturbation scale") {
  std::mt19937_64 rng(29);
  for (int d = 3; d <= 5; ++d) {
    const PolytopeSpec spec = generate(PolytopeType::simplex(d));
    std::vector<Vec> dir;
    for (const auto& v : spec.vertices) {
      Vec t = oracle::random_unit(rng, d);
      t -= t.dot(v.vec()) * v.vec();
      dir.push_back(t.normalized());
    }
    double prev = 0.0;
    for (double eps : {1e-8, 1e-7, 1e-6, 1e-5}) {
      PointSet u;
      for (int i = 0; i <= d; ++i)
        u.emplace_back(Vec(std::cos(eps) * spec.vertices[i].vec() + std::sin(eps) * dir[i]));
      const double dev = recover_simplex(u, eps).max_deviation;
      CHECK(prev <= dev + 1e-10);
      prev = dev;
    }
  }
}

TEST_CASE("crosspolytope recovery") {
  std::mt19937_64 rng(31);
  for (int d = 3; d <= 5; ++d) {
    const PolytopeSpec spec = generate(PolytopeType::crosspolytope(d));
    const RecoveryResult exact = recover_crosspolytope(spec.vertices, 0.0);
    CHECK(exact.max_deviation <= 1e-10);
    // A signed permutation.
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        const double x = std::abs(exact.rotation(i, j));
        CHECK((x <= 1e-12 || std::abs(x - 1.0) <= 1e-12));
      }
    for (double eps : {1e-7, 1e-6, 1e-5}) {
      const PointSet x = oracle::jitter(rotate(oracle::random_orthogonal(rng, d), spec.vertices), eps, rng);
      const RecoveryResult r = recover_crosspolytope(x, eps);
      CHECK(r.pass);
      CHECK(r.max_deviation <= 96.0 * d * d * d * eps);
      CHECK(orthogonal(r.rotation));
      std::vector<int> m = r.matching;
      std::sort(m.begin(), m.end());
      for (int i = 0; i < 2 * d; ++i) CHECK(m[i] == i);
    }
  }
  const PointSet x3 = oracle::jitter(generate(PolytopeType::crosspolytope(3)).vertices, 1e-6, rng);
  CHECK(recover_crosspolytope(x3, 1e-6).max_deviation <= 2.592e-3);
}

TEST_CASE("crosspolytope recovery: structural violation and count") {
  // Replace -e_1 by a point with <x, e_1> = -0.5 that keeps the separation.
  const double eps = 1e-6;
  PointSet x = generate(PolytopeType::crosspolytope(3)).vertices;
  int minus = -1;
  for (int i = 0; i < 6; ++i)
    if (x[i][0] < -0.5) minus = i;
  REQUIRE(minus >= 0);
  x[minus] = UnitVector{-0.5, std::sqrt(0.75), 0.0};
  // The bands <= -3/4 and |.| <= eta both exclude -0.5. Such a point cannot keep
  // the separation in S^2, so the full recovery stops at its hypothesis check.
  CHECK_THROWS_AS(classify_crosspolytope_pairs(x, eps), StructuralViolation);
  CHECK_THROWS_AS(recover_crosspolytope(x, eps), HypothesisError);
  PointSet five(x.begin(), x.begin() + 5);
  CHECK_THROWS_AS(recover_crosspolytope(five, eps), HypothesisError);
}

TEST_CASE("reflect_vertex") {
  const PointSet eq{UnitVector{1.0, 0.0, 0.0}, UnitVector{0.0, 1.0, 0.0}};
  const UnitVector mirrored = reflect_vertex(eq, UnitVector{0.0, 0.0, 1.0});
  CHECK(geodesic_distance(mirrored, UnitVector{0.0, 0.0, -1.0}) <= 1e-10);

  for (auto type : {PolytopeType::icosahedron(), PolytopeType::cell600()}) {
    const PolytopeSpec spec = generate(type);
    const int d = type.dim;
    const DeloneComplex dc = delone_complex(spec.vertices, false);
    int checked = 0;
    for (std::size_t c = 0; c < dc.cells.size() && checked < 40; ++c)
      for (int nb : dc.cells[c].adjacent) {
        const auto& cv = dc.cells[c].vertices;
        const auto& nv = dc.cells[nb].vertices;
        PointSet facet;
        int apex = -1, other = -1;
        for (int i : cv)
          if (std::find(nv.begin(), nv.end(), i) != nv.end()) facet.push_back(spec.vertices[i]);
          else apex = i;
        for (int i : nv)
          if (std::find(cv.begin(), cv.end(), i) == cv.end()) other = i;
        REQUIRE(static_cast<int>(facet.size()) == d - 1);
        const UnitVector v = reflect_vertex(facet, spec.vertices[apex]);
        CHECK(geodesic_distance(v, spec.vertices[other]) <= 1e-9);
        ++checked;
      }
  }
  PointSet skew{UnitVector{1.0, 0.0, 0.0}, UnitVector{0.0, 1.0, 0.0}};
  CHECK_THROWS_AS(reflect_vertex(skew, UnitVector(Vec(Vec::Ones(3).normalized()))), DomainError);
  CHECK_THROWS_AS(reflect_vertex({skew[0]}, UnitVector{0.0, 0.0, 1.0}), DimensionError);
}

TEST_CASE("global recovery: exact polytopes") {
  std::mt19937_64 rng(37);
  for (auto type : {PolytopeType::icosahedron(), PolytopeType::cell600()}) {
    const PolytopeSpec spec = generate(type);
    const RecoveryResult r = recover_global(spec.vertices, type.kind, 0.0);
    CHECK(r.max_deviation <= 1e-9);
    CHECK(r.pass);
    CHECK(orthogonal(r.rotation, 1e-12));
    const PointSet rotated = rotate(oracle::random_orthogonal(rng, type.dim), spec.vertices);
    const RecoveryResult q = recover_global(rotated, type.kind, 0.0);
    CHECK(q.max_deviation <= 1e-9);
    CHECK(q.step1_max_circumradius <= q.step1_bound + kCertificationFloor);
  }
}

TEST_CASE("global recovery: perturbed polytopes") {
  const PolytopeSpec ico = generate(PolytopeType::icosahedron());
  for (int s = 0; s < 5; ++s) {
    const Packing p = perturb(ico, 1e-7, 100 + s);
    const RecoveryResult r = recover_global(p.points, PolytopeKind::Icosahedron, 1e-7);
    CHECK(r.pass);
    CHECK(std::isfinite(r.max_deviation / 1e-7));
    CHECK(r.max_deviation <= 100 * 1e-7);
    CHECK(r.duplicate_spread <= 10 * r.chain_constant * 1e-7);
    std::vector<int> m = r.matching;
    std::sort(m.begin(), m.end());
    for (int i = 0; i < 12; ++i) CHECK(m[i] == i);
  }
  const PolytopeSpec cell = generate(PolytopeType::cell600());
  const Packing p = perturb(cell, 1e-9, 7);
  const RecoveryResult r = recover_global(p.points, PolytopeKind::Cell600, 1e-9);
  CHECK(r.pass);
  CHECK(r.max_deviation <= 100 * 1e-9);
  CHECK(r.max_deviation <= r.certified_bound);
}

TEST_CASE("global recovery: hypothesis errors") {
  const PolytopeSpec ico = generate(PolytopeType::icosahedron());
  PointSet eleven(ico.vertices.begin(), ico.vertices.begin() + 11);
  CHECK_THROWS_AS(recover_global(eleven, PolytopeKind::Icosahedron, 1e-7), HypothesisError);
  CHECK_THROWS_AS(recover_global(ico.vertices, PolytopeKind::Simplex, 0.0), HypothesisError);
  CHECK_THROWS_AS(recover_global(ico.vertices, PolytopeKind::Cell600, 0.0), DimensionError);
}

TEST_CASE("Procrustes alignment") {
  std::mt19937_64 rng(41);
  for (auto type : {PolytopeType::simplex(4), PolytopeType::crosspolytope(3), PolytopeType::icosahedron(),
                    PolytopeType::cell600()}) {
    const PolytopeSpec spec = generate(type);
    const Mat q = oracle::random_orthogonal(rng, type.dim);
    const ProcrustesResult pr = procrustes_align(rotate(q, spec.vertices), spec.vertices);
    CHECK(pr.max_deviation <= 1e-10);
    CHECK(orthogonal(pr.rotation));
    CHECK(!pr.rank_deficient);
    // Points are images of the reference under Phi with the identity matching
    // only up to the polytope's symmetry; check the recovered map instead.
    for (std::size_t i = 0; i < spec.vertices.size(); ++i)
      CHECK((pr.rotation * spec.vertices[pr.matching[i]].vec() - q * spec.vertices[i].vec()).norm() <= 1e-10);
  }
  // Identity matching for the tetrahedron under a known rotation close to I.
  const PolytopeSpec s3 = generate(PolytopeType::simplex(3));
  Mat small = Mat::Identity(3, 3);
  small(0, 1) = -0.01;
  small(1, 0) = 0.01;
  small = fit_orthogonal({Vec::Unit(3, 0), Vec::Unit(3, 1), Vec::Unit(3, 2)},
                         {small.col(0), small.col(1), small.col(2)});
  const ProcrustesResult id = procrustes_align(rotate(small, s3.vertices), s3.vertices);
  for (int i = 0; i < 4; ++i) CHECK(id.matching[i] == i);
  CHECK((id.rotation - small).cwiseAbs().maxCoeff() <= 1e-10);
  // Mirror image: det -1 is allowed.
  Mat mirror = Mat::Identity(3, 3);
  mirror(2, 2) = -1.0;
  const PolytopeSpec cr = generate(PolytopeType::crosspolytope(3));
  PointSet tilted = rotate(oracle::random_orthogonal(rng, 3), s3.vertices);
  const ProcrustesResult m = procrustes_align(rotate(mirror, tilted), tilted);
  CHECK(m.max_deviation <= 1e-10);
  CHECK(std::abs(std::abs(m.rotation.determinant()) - 1.0) <= 1e-10);
  CHECK_THROWS_AS(procrustes_align(cr.vertices, s3.vertices), DimensionError);
}

TEST_CASE("constructive and Procrustes deviations agree within a factor of 2") {
  for (auto type : {PolytopeType::simplex(3), PolytopeType::crosspolytope(4), PolytopeType::icosahedron()}) {
    const PolytopeSpec spec = generate(type);
    for (int s = 0; s < 10; ++s) {
      const Packing p = perturb(spec, 1e-6, 500 + s);
      const double a = recover(p.points, type, 1e-6).max_deviation;
      const double b = procrustes_align(p.points, spec.vertices).max_deviation;
      CHECK(std::max(a, b) <= 2.0 * std::min(a, b));
    }
  }
}
