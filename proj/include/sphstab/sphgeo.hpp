#pragma once

// Core spherical geometry on S^{d-1}: points, geodesic distance, the
// circumradius functions r_j / r_inf, cap measures and spherical simplex volumes.

#include <Eigen/Dense>
#include <numbers>
#include <vector>

namespace sphstab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kPi = std::numbers::pi;

/// Supported ambient dimensions for points on S^{d-1}.
inline constexpr int kMinDim = 2;
inline constexpr int kMaxDim = 5;

/// Clamp to [-1, 1] before acos/asin.
inline double clamp_unit(double x) { return x < -1.0 ? -1.0 : (x > 1.0 ? 1.0 : x); }

/// A point of S^{d-1}, d in [2, 5].
///
/// Inputs whose norm is within 1e-9 of one are renormalized; anything further
/// off the sphere is rejected with DomainError.
class UnitVector {
 public:
  explicit UnitVector(Vec coords);
  UnitVector(std::initializer_list<double> coords);

  int dim() const { return static_cast<int>(v_.size()); }
  const Vec& vec() const { return v_; }
  double operator[](int i) const { return v_[i]; }
  UnitVector operator-() const;

  /// Orthonormal basis vector e_i of R^d.
  static UnitVector basis(int d, int i);

 private:
  Vec v_;
};

using PointSet = std::vector<UnitVector>;

/// Angle between u and v, in [0, pi].
double geodesic_distance(const UnitVector& u, const UnitVector& v);

/// Raw-vector variant of geodesic_distance (inputs assumed unit).
double angle_between(const Vec& u, const Vec& v);

/// Third side c of a spherical triangle with sides a, b enclosing the angle gamma.
double law_of_cosines_side(double a, double b, double gamma);

/// Circumradius of the regular j-dimensional spherical simplex of edge 2*phi.
double circumradius_rj(int j, double phi);

/// Limit of circumradius_rj as j grows: sin r = sqrt(2) sin phi.
double circumradius_rinf(double phi);

/// (d-1)-measure of the cap of angular radius theta in S^{d-1}, theta in (0, pi].
double cap_volume(int d, double theta);

/// (d-1)-measure of S^{d-1}, d in [2, 5].
double sphere_measure(int d);

/// d points of S^{d-1} spanning a nondegenerate (d-1)-dimensional spherical simplex.
class SphericalSimplex {
 public:
  explicit SphericalSimplex(PointSet vertices);

  int dim() const { return static_cast<int>(vertices_.size()); }
  const PointSet& vertices() const { return vertices_; }
  /// Vertices as columns.
  Mat matrix() const;

 private:
  PointSet vertices_;
};

/// Girard area (angle excess) of a triangle in S^2.
double spherical_triangle_area(const SphericalSimplex& t);

/// Volume of a spherical simplex: arc length for d = 2, Girard for d = 3, tangent-plane
/// quadrature for d = 4. Throws DimensionError for d = 5.
double spherical_simplex_volume(const SphericalSimplex& t);

/// Tangent-plane quadrature volume, d in [3, 4] (d = 3 is the cross-check path).
double spherical_simplex_volume_quadrature(const SphericalSimplex& t, double rel_tol = 1e-10);

/// Volume of the spherical simplex spanned by the columns of `vertices`
/// without the nondegeneracy gate; returns 0 for (numerically) flat input.
double simplex_volume_unchecked(const Mat& vertices, double rel_tol = 1e-10);

/// Whether x lies in the closed cone spanned by the columns of `vertices`.
bool in_simplex_cone(const Mat& vertices, const Vec& x, double tol = 0.0);

}  // namespace sphstab
