#include "sphstab/sphgeo.hpp"

#include <cmath>
#include <string>

#include "sphstab/errors.hpp"
#include "sphstab/quadrature.hpp"

namespace sphstab {

namespace {

constexpr double kNormTolerance = 1e-12;
constexpr double kRenormalizeTolerance = 1e-9;

void check_dim(int d) {
  if (d < kMinDim || d > kMaxDim)
    throw DimensionError("unsupported dimension " + std::to_string(d) + " (expected 2..5)");
}

// H^{d-1}(S^{d-1}) for any d >= 1 (S^0 has two points).
double sphere_measure_any(int d) {
  return 2.0 * std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d);
}

// int_0^theta sin^n t dt via the reduction formula.
double sin_power_integral(int n, double theta) {
  if (n == 0) return theta;
  if (n == 1) return 1.0 - std::cos(theta);
  const double s = std::sin(theta);
  return -std::pow(s, n - 1) * std::cos(theta) / n +
         (n - 1.0) / n * sin_power_integral(n - 2, theta);
}

// Tangent point maximizing the smallest inner product with the vertices, chosen
// among the normalized centroid and the circumcenter direction.
Vec tangent_center(const Mat& v) {
  Vec centroid = v.rowwise().sum().normalized();
  Vec ones = Vec::Ones(v.cols());
  Vec circ = v.transpose().fullPivLu().solve(ones).normalized();
  const double a = (v.transpose() * centroid).minCoeff();
  const double b = (v.transpose() * circ).minCoeff();
  return a >= b ? centroid : circ;
}

double tangent_quadrature(const Mat& v, double rel_tol) {
  const int d = static_cast<int>(v.rows());
  const Vec c = tangent_center(v);
  std::vector<Vec> projected;
  projected.reserve(v.cols());
  for (int i = 0; i < v.cols(); ++i) {
    const double h = v.col(i).dot(c);
    if (h <= 0.0) throw DomainError("spherical simplex is not contained in an open hemisphere");
    projected.push_back(v.col(i) / h);
  }
  // On the tangent plane at c, 1 + |y - c|^2 = |y|^2.
  auto density = [d](const Vec& y) { return std::pow(y.squaredNorm(), -0.5 * d); };
  return quad::integrate_simplex(projected, density, rel_tol);
}

// Angle excess of the triangle spanned by the unit columns of v.
double girard_excess(const Mat& v) {
  double excess = -kPi;
  for (int i = 0; i < 3; ++i) {
    const Eigen::Vector3d a = v.col(i);
    const Eigen::Vector3d b = v.col((i + 1) % 3);
    const Eigen::Vector3d c = v.col((i + 2) % 3);
    const Eigen::Vector3d tb = b - a.dot(b) * a;
    const Eigen::Vector3d tc = c - a.dot(c) * a;
    excess += std::atan2(tb.cross(tc).norm(), tb.dot(tc));
  }
  return excess;
}

}  // namespace

UnitVector::UnitVector(Vec coords) : v_(std::move(coords)) {
  check_dim(dim());
  const double n = v_.norm();
  if (!std::isfinite(n) || std::abs(n - 1.0) > kRenormalizeTolerance)
    throw DomainError("vector of norm " + std::to_string(n) + " is not on the unit sphere");
  if (std::abs(n - 1.0) > kNormTolerance) v_ /= n;
}

UnitVector::UnitVector(std::initializer_list<double> coords)
    : UnitVector(Vec(Eigen::Map<const Vec>(coords.begin(), static_cast<Eigen::Index>(coords.size())))) {}

UnitVector UnitVector::operator-() const { return UnitVector(Vec(-v_)); }

UnitVector UnitVector::basis(int d, int i) {
  Vec e = Vec::Zero(d);
  e[i] = 1.0;
  return UnitVector(e);
}

double angle_between(const Vec& u, const Vec& v) {
  // atan2 form keeps accuracy near 0 and pi where acos loses digits.
  const double s = (u - v).norm();
  const double t = (u + v).norm();
  return 2.0 * std::atan2(s, t);
}

double geodesic_distance(const UnitVector& u, const UnitVector& v) {
  if (u.dim() != v.dim()) throw DimensionError("geodesic_distance: dimension mismatch");
  return angle_between(u.vec(), v.vec());
}

double law_of_cosines_side(double a, double b, double gamma) {
  if (!(a > 0.0 && a <= kPi / 2) || !(b > 0.0 && b <= kPi / 2))
    throw DomainError("law_of_cosines_side: sides must lie in (0, pi/2]");
  // gamma = pi (the collinear case) is allowed: r_1 closes the j = 1 chain.
  if (!(gamma > 0.0 && gamma <= kPi))
    throw DomainError("law_of_cosines_side: angle must lie in (0, pi]");
  const double c = std::cos(a) * std::cos(b) + std::sin(a) * std::sin(b) * std::cos(gamma);
  return std::acos(clamp_unit(c));
}

double circumradius_rj(int j, double phi) {
  if (j < 1) throw DomainError("circumradius_rj: j must be >= 1");
  if (!(phi > 0.0 && phi < kPi / 2)) throw DomainError("circumradius_rj: phi must lie in (0, pi/2)");
  const double s = std::sqrt(2.0 * j / (j + 1.0)) * std::sin(phi);
  if (s >= 1.0) throw DomainError("circumradius_rj: asin argument out of range");
  return std::asin(s);
}

double circumradius_rinf(double phi) {
  if (!(phi > 0.0 && phi < kPi / 2)) throw DomainError("circumradius_rinf: phi must lie in (0, pi/2)");
  const double s = std::sqrt(2.0) * std::sin(phi);
  if (s >= 1.0) throw DomainError("circumradius_rinf: asin argument out of range");
  return std::asin(s);
}

double cap_volume(int d, double theta) {
  if (d < 2) throw DimensionError("cap_volume: d must be >= 2");
  if (!(theta > 0.0 && theta <= kPi)) throw DomainError("cap_volume: theta must lie in (0, pi]");
  if (d == 3) return 2.0 * kPi * (1.0 - std::cos(theta));
  return sphere_measure_any(d - 1) * sin_power_integral(d - 2, theta);
}

double sphere_measure(int d) {
  check_dim(d);
  switch (d) {
    case 2: return 2.0 * kPi;
    case 3: return 4.0 * kPi;
    case 4: return 2.0 * kPi * kPi;
    default: return 8.0 * kPi * kPi / 3.0;
  }
}

SphericalSimplex::SphericalSimplex(PointSet vertices) : vertices_(std::move(vertices)) {
  if (vertices_.empty()) throw DimensionError("SphericalSimplex: no vertices");
  const int d = vertices_.front().dim();
  if (static_cast<int>(vertices_.size()) != d)
    throw DimensionError("SphericalSimplex: need exactly d vertices in S^{d-1}");
  for (const auto& v : vertices_)
    if (v.dim() != d) throw DimensionError("SphericalSimplex: dimension mismatch");
  const Mat m = matrix();
  if ((m.transpose() * m).determinant() <= 1e-12)
    throw DomainError("SphericalSimplex: vertices are (nearly) linearly dependent");
}

Mat SphericalSimplex::matrix() const {
  const int d = dim();
  Mat m(d, d);
  for (int i = 0; i < d; ++i) m.col(i) = vertices_[i].vec();
  return m;
}

double spherical_triangle_area(const SphericalSimplex& t) {
  if (t.dim() != 3) throw DimensionError("spherical_triangle_area: triangle must lie in S^2");
  return girard_excess(t.matrix());
}

double spherical_simplex_volume(const SphericalSimplex& t) {
  if (t.dim() == 2) return geodesic_distance(t.vertices()[0], t.vertices()[1]);
  if (t.dim() == 3) return spherical_triangle_area(t);
  return spherical_simplex_volume_quadrature(t);
}

double spherical_simplex_volume_quadrature(const SphericalSimplex& t, double rel_tol) {
  if (t.dim() > 4) throw DimensionError("simplex volumes are available for d <= 4");
  return tangent_quadrature(t.matrix(), rel_tol);
}

double simplex_volume_unchecked(const Mat& vertices, double rel_tol) {
  const int d = static_cast<int>(vertices.rows());
  if (vertices.cols() != d) throw DimensionError("simplex_volume_unchecked: need d columns");
  if (d < 3 || d > 4) throw DimensionError("simplex volumes are available for d = 3, 4");
  if (std::abs(vertices.determinant()) < 1e-14) return 0.0;
  if (d == 3) {
    Mat unit = vertices;
    unit.colwise().normalize();
    return std::max(girard_excess(unit), 0.0);
  }
  return tangent_quadrature(vertices, rel_tol);
}

bool in_simplex_cone(const Mat& vertices, const Vec& x, double tol) {
  const Vec b = vertices.fullPivLu().solve(x);
  return b.minCoeff() >= -tol;
}

}  // namespace sphstab
