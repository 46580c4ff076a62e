#pragma once

// Independent reference computations used only by the tests.

#include <cmath>
#include <random>
#include <vector>

#include "sphstab/sphgeo.hpp"

namespace oracle {

using sphstab::Mat;
using sphstab::Vec;

inline Vec random_unit(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> n;
  Vec v(d);
  for (int i = 0; i < d; ++i) v[i] = n(rng);
  return v.normalized();
}

/// Uniform random orthogonal matrix (QR of a Gaussian matrix with sign fix).
inline Mat random_orthogonal(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> n;
  Mat a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = n(rng);
  Eigen::HouseholderQR<Mat> qr(a);
  Mat q = qr.householderQ();
  const Mat r = qr.matrixQR();
  for (int i = 0; i < d; ++i)
    if (r(i, i) < 0) q.col(i) = -q.col(i);
  return q;
}

/// Solid angle of the triangle a, b, c (Van Oosterom-Strackee).
inline double triangle_solid_angle(const Vec& a, const Vec& b, const Vec& c) {
  const Eigen::Vector3d x = a, y = b, z = c;
  const double num = std::abs(x.dot(y.cross(z)));
  const double den = 1.0 + x.dot(y) + y.dot(z) + z.dot(x);
  return 2.0 * std::atan2(num, den);
}

struct MonteCarlo {
  double estimate;
  double std_error;
};

/// Fraction of uniform points of S^{d-1} in the cone over the columns of v, times |S^{d-1}|.
inline MonteCarlo cone_volume_mc(const Mat& v, long samples, std::uint64_t seed) {
  const int d = static_cast<int>(v.rows());
  const Mat inv = v.inverse();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  long hits = 0;
  Vec x(d);
  for (long s = 0; s < samples; ++s) {
    for (int i = 0; i < d; ++i) x[i] = n(rng);
    if ((inv * x).minCoeff() >= 0.0) ++hits;
  }
  const double p = static_cast<double>(hits) / samples;
  const double total = sphstab::sphere_measure(d);
  return {p * total, std::sqrt(p * (1 - p) / samples) * total};
}

}  // namespace oracle

namespace oracle {

/// Moves every point along a random geodesic by an angle drawn uniformly from [0, eps].
inline sphstab::PointSet jitter(const sphstab::PointSet& pts, double eps, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  sphstab::PointSet out;
  for (const auto& p : pts) {
    Vec t = random_unit(rng, p.dim());
    t -= t.dot(p.vec()) * p.vec();
    t.normalize();
    const double a = eps * u(rng);
    out.emplace_back(Vec(std::cos(a) * p.vec() + std::sin(a) * t));
  }
  return out;
}

}  // namespace oracle
