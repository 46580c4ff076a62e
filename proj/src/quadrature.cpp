#include "sphstab/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "sphstab/errors.hpp"

namespace sphstab::quad {

namespace {

constexpr unsigned kPoints = 8;

struct Piece {
  std::vector<Vec> vertices;
};

// Tensor rule on [0,1]^n pulled back to the standard simplex through the
// collapsed (Duffy) map; the Jacobian prod_k (1 - u_k)^(n - k) is folded into
// the weights, which therefore sum to 1/n!.
struct SimplexRule {
  std::vector<std::vector<double>> barycentric;  // n + 1 weights per node
  std::vector<double> weights;
};

SimplexRule make_simplex_rule(int n) {
  const Rule1D& g = gauss_legendre_unit();
  const int m = static_cast<int>(g.nodes.size());
  SimplexRule rule;
  std::vector<int> idx(n, 0);
  while (true) {
    std::vector<double> bary(n + 1, 0.0);
    double rest = 1.0;
    double w = 1.0;
    for (int k = 0; k < n; ++k) {
      const double u = g.nodes[idx[k]];
      bary[k] = rest * u;
      w *= g.weights[idx[k]] * std::pow(1.0 - u, n - 1 - k);
      rest *= (1.0 - u);
    }
    bary[n] = rest;
    rule.barycentric.push_back(std::move(bary));
    rule.weights.push_back(w);
    int k = 0;
    while (k < n && ++idx[k] == m) idx[k++] = 0;
    if (k == n) break;
  }
  return rule;
}

const SimplexRule& simplex_rule(int n) {
  static const SimplexRule rules[3] = {make_simplex_rule(1), make_simplex_rule(2),
                                       make_simplex_rule(3)};
  return rules[n - 1];
}

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

double simplex_measure(const std::vector<Vec>& v) {
  const int n = static_cast<int>(v.size()) - 1;
  Mat e(v[0].size(), n);
  for (int k = 0; k < n; ++k) e.col(k) = v[k + 1] - v[0];
  const double gram = (e.transpose() * e).determinant();
  return std::sqrt(std::max(gram, 0.0)) / factorial(n);
}

double apply_rule(const std::vector<Vec>& v, const std::function<double(const Vec&)>& f) {
  const int n = static_cast<int>(v.size()) - 1;
  const SimplexRule& rule = simplex_rule(n);
  double acc = 0.0;
  Vec x(v[0].size());
  for (std::size_t q = 0; q < rule.weights.size(); ++q) {
    x.setZero();
    for (int k = 0; k <= n; ++k) x += rule.barycentric[q][k] * v[k];
    acc += rule.weights[q] * f(x);
  }
  return acc * factorial(n) * simplex_measure(v);
}

std::vector<std::vector<Vec>> subdivide(const std::vector<Vec>& v) {
  const int n = static_cast<int>(v.size()) - 1;
  auto mid = [&](int a, int b) -> Vec { return 0.5 * (v[a] + v[b]); };
  if (n == 1) {
    Vec m = mid(0, 1);
    return {{v[0], m}, {m, v[1]}};
  }
  if (n == 2) {
    Vec m01 = mid(0, 1), m02 = mid(0, 2), m12 = mid(1, 2);
    return {{v[0], m01, m02}, {m01, v[1], m12}, {m02, m12, v[2]}, {m01, m12, m02}};
  }
  // Bey's red refinement of a tetrahedron.
  Vec x01 = mid(0, 1), x02 = mid(0, 2), x03 = mid(0, 3);
  Vec x12 = mid(1, 2), x13 = mid(1, 3), x23 = mid(2, 3);
  return {{v[0], x01, x02, x03}, {x01, v[1], x12, x13}, {x02, x12, v[2], x23},
          {x03, x13, x23, v[3]},  {x01, x02, x03, x13}, {x01, x02, x12, x13},
          {x02, x03, x13, x23},   {x02, x12, x13, x23}};
}

double refine(const std::vector<Vec>& v, const std::function<double(const Vec&)>& f,
              double coarse, double budget, int depth) {
  const auto children = subdivide(v);
  std::vector<double> parts;
  parts.reserve(children.size());
  double fine = 0.0;
  for (const auto& c : children) {
    parts.push_back(apply_rule(c, f));
    fine += parts.back();
  }
  if (std::abs(fine - coarse) <= budget || depth <= 0) return fine;
  const double share = budget / static_cast<double>(children.size());
  double total = 0.0;
  for (std::size_t k = 0; k < children.size(); ++k)
    total += refine(children[k], f, parts[k], share, depth - 1);
  return total;
}

}  // namespace

const Rule1D& gauss_legendre_unit() {
  static const Rule1D rule = [] {
    using G = boost::math::quadrature::gauss<double, kPoints>;
    Rule1D r;
    const auto& x = G::abscissa();
    const auto& w = G::weights();
    for (std::size_t k = 0; k < x.size(); ++k) {
      // Boost stores the non-negative half of a symmetric rule.
      r.nodes.push_back(0.5 * (1.0 + x[k]));
      r.weights.push_back(0.5 * w[k]);
      if (x[k] != 0.0) {
        r.nodes.push_back(0.5 * (1.0 - x[k]));
        r.weights.push_back(0.5 * w[k]);
      }
    }
    return r;
  }();
  return rule;
}

double integrate_simplex(const std::vector<Vec>& vertices,
                         const std::function<double(const Vec&)>& f, double rel_tol,
                         int max_depth) {
  const int n = static_cast<int>(vertices.size()) - 1;
  if (n < 1 || n > 3) throw DimensionError("integrate_simplex: simplex dimension must be 1..3");
  for (const auto& v : vertices)
    if (v.size() < n) throw DimensionError("integrate_simplex: ambient dimension too small");
  const double coarse = apply_rule(vertices, f);
  const double budget = rel_tol * std::max(std::abs(coarse), 1e-300);
  return refine(vertices, f, coarse, budget, max_depth);
}

double integrate_interval(const std::function<double(double)>& f, double a, double b,
                          double rel_tol) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  return GK::integrate(f, a, b, 15, rel_tol);
}

}  // namespace sphstab::quad
