#pragma once

#include <functional>
#include <vector>

#include "sphstab/sphgeo.hpp"

namespace sphstab::quad {

/// Integrate f over the n-simplex with the given n + 1 vertices (n in [1, 3],
/// vertices may live in a higher-dimensional space).
///
/// Collapsed-coordinate Gauss-Legendre rule with adaptive midpoint refinement
/// (2, 4 or 8 children). A piece is accepted once its children agree with it to
/// the share of the absolute budget rel_tol * |I| it was given.
double integrate_simplex(const std::vector<Vec>& vertices,
                         const std::function<double(const Vec&)>& f,
                         double rel_tol = 1e-12, int max_depth = 8);

/// Gauss-Legendre nodes and weights on [0, 1].
struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const Rule1D& gauss_legendre_unit();

/// Integrate a smooth function on [a, b] with composite Gauss-Legendre refinement.
double integrate_interval(const std::function<double(double)>& f, double a, double b,
                          double rel_tol = 1e-13);

}  // namespace sphstab::quad
