#include "sphstab/polytopes.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "sphstab/errors.hpp"
#include "sphstab/hull.hpp"

namespace sphstab {

namespace {

const double kGolden = (1.0 + std::sqrt(5.0)) / 2.0;

void check_family_dim(int d) {
  if (d < kMinDim || d > kMaxDim)
    throw DimensionError("polytope dimension must lie in 2..5, got " + std::to_string(d));
}

PointSet simplex_vertices(int d) {
  Mat gram = Mat::Constant(d, d, -1.0 / d);
  gram.diagonal().setOnes();
  const Mat l = gram.llt().matrixL();
  PointSet out;
  Vec sum = Vec::Zero(d);
  for (int i = 0; i < d; ++i) {
    const Vec row = l.row(i).transpose();
    sum += row;
    out.emplace_back(row);
  }
  out.emplace_back(Vec(-sum));
  return out;
}

PointSet crosspolytope_vertices(int d) {
  PointSet out;
  for (int i = 0; i < d; ++i) out.push_back(UnitVector::basis(d, i));
  for (int i = 0; i < d; ++i) out.push_back(-UnitVector::basis(d, i));
  return out;
}

PointSet icosahedron_vertices() {
  const double n = std::sqrt(1.0 + kGolden * kGolden);
  PointSet out;
  for (int shift = 0; shift < 3; ++shift)
    for (double a : {1.0, -1.0})
      for (double b : {kGolden, -kGolden}) {
        Vec v = Vec::Zero(3);
        v[(shift + 1) % 3] = a / n;
        v[(shift + 2) % 3] = b / n;
        out.emplace_back(v);
      }
  return out;
}

bool is_even_permutation(const std::array<int, 4>& p) {
  int inversions = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (p[i] > p[j]) ++inversions;
  return inversions % 2 == 0;
}

PointSet cell600_vertices() {
  std::vector<Vec> raw;
  for (int i = 0; i < 4; ++i)
    for (double s : {1.0, -1.0}) {
      Vec v = Vec::Zero(4);
      v[i] = s;
      raw.push_back(v);
    }
  for (int mask = 0; mask < 16; ++mask) {
    Vec v(4);
    for (int i = 0; i < 4; ++i) v[i] = (mask >> i & 1) ? -0.5 : 0.5;
    raw.push_back(v);
  }
  const std::array<double, 4> base{kGolden, 1.0, 1.0 / kGolden, 0.0};
  std::array<int, 4> perm{0, 1, 2, 3};
  do {
    if (!is_even_permutation(perm)) continue;
    for (int mask = 0; mask < 8; ++mask) {
      Vec v(4);
      for (int k = 0; k < 4; ++k) {
        double x = base[perm[k]] / 2.0;
        if (perm[k] < 3 && (mask >> perm[k] & 1)) x = -x;
        v[k] = x;
      }
      raw.push_back(v);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  std::sort(raw.begin(), raw.end(), [](const Vec& a, const Vec& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  });
  PointSet out;
  for (auto& v : raw) out.emplace_back(Vec(v.normalized()));
  return out;
}

}  // namespace

std::string to_string(PolytopeKind kind) {
  switch (kind) {
    case PolytopeKind::Simplex: return "simplex";
    case PolytopeKind::Crosspolytope: return "crosspolytope";
    case PolytopeKind::Icosahedron: return "icosahedron";
    case PolytopeKind::Cell600: return "600-cell";
  }
  return "unknown";
}

std::string to_string(const PolytopeType& type) {
  switch (type.kind) {
    case PolytopeKind::Simplex:
    case PolytopeKind::Crosspolytope: return to_string(type.kind) + "(" + std::to_string(type.dim) + ")";
    default: return to_string(type.kind);
  }
}

PolytopeKind parse_polytope_kind(const std::string& name) {
  if (name == "simplex") return PolytopeKind::Simplex;
  if (name == "crosspolytope" || name == "cross") return PolytopeKind::Crosspolytope;
  if (name == "icosahedron" || name == "ico") return PolytopeKind::Icosahedron;
  if (name == "600-cell" || name == "cell600") return PolytopeKind::Cell600;
  throw InputError("unknown polytope kind '" + name + "'");
}

PolytopeType make_polytope_type(PolytopeKind kind, int dim) {
  switch (kind) {
    case PolytopeKind::Simplex:
    case PolytopeKind::Crosspolytope:
      check_family_dim(dim);
      return {kind, dim};
    case PolytopeKind::Icosahedron:
      if (dim != 0 && dim != 3) throw DimensionError("the icosahedron lives in dimension 3");
      return PolytopeType::icosahedron();
    case PolytopeKind::Cell600:
      if (dim != 0 && dim != 4) throw DimensionError("the 600-cell lives in dimension 4");
      return PolytopeType::cell600();
  }
  throw InputError("unsupported polytope kind");
}

double polytope_phi(const PolytopeType& type) {
  switch (type.kind) {
    case PolytopeKind::Simplex: return 0.5 * std::acos(-1.0 / type.dim);
    case PolytopeKind::Crosspolytope: return kPi / 4.0;
    case PolytopeKind::Icosahedron: return 0.5 * std::acos(1.0 / std::sqrt(5.0));
    case PolytopeKind::Cell600: return kPi / 10.0;
  }
  throw InputError("unsupported polytope kind");
}

int polytope_f0(const PolytopeType& type) {
  switch (type.kind) {
    case PolytopeKind::Simplex: return type.dim + 1;
    case PolytopeKind::Crosspolytope: return 2 * type.dim;
    case PolytopeKind::Icosahedron: return 12;
    case PolytopeKind::Cell600: return 120;
  }
  throw InputError("unsupported polytope kind");
}

StabilityConstants stability_constants(const PolytopeType& type) {
  const double d = type.dim;
  switch (type.kind) {
    case PolytopeKind::Simplex:
      if (type.dim == 2) return {3.0, kPi / 12.0};
      return {9.0 * std::pow(d, 3.5), 1.0 / (9.0 * std::pow(d, 3.5))};
    case PolytopeKind::Crosspolytope: return {96.0 * d * d * d, crosspolytope_eps_ceiling(type.dim)};
    case PolytopeKind::Icosahedron: return {std::pow(44.0, 9) * 25.0 * 1e7, 1e-9};
    case PolytopeKind::Cell600: return {std::pow(90.0, 116) * 1e4 * 1e12, 1e-14};
  }
  throw InputError("unsupported polytope kind");
}

double crosspolytope_eps_ceiling(int d) { return 1.0 / (64.0 * std::pow(d, 4)); }

PolytopeSpec generate(const PolytopeType& type) {
  PolytopeSpec spec{type, polytope_phi(type), polytope_f0(type), {}, stability_constants(type)};
  switch (type.kind) {
    case PolytopeKind::Simplex:
      check_family_dim(type.dim);
      spec.vertices = simplex_vertices(type.dim);
      break;
    case PolytopeKind::Crosspolytope:
      check_family_dim(type.dim);
      spec.vertices = crosspolytope_vertices(type.dim);
      break;
    case PolytopeKind::Icosahedron: spec.vertices = icosahedron_vertices(); break;
    case PolytopeKind::Cell600: spec.vertices = cell600_vertices(); break;
  }
  return spec;
}

double min_pairwise_distance(const PointSet& points) {
  double best = kPi;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      best = std::min(best, geodesic_distance(points[i], points[j]));
  return best;
}

PackingReport validate_packing(const PointSet& points, double phi, double eps, std::uint64_t seed,
                               int samples) {
  if (points.size() < 2) throw InputError("validate_packing: need at least two points");
  const int d = points.front().dim();
  for (const auto& p : points)
    if (p.dim() != d) throw DimensionError("validate_packing: dimension mismatch");

  PackingReport r;
  r.count = static_cast<int>(points.size());
  r.min_distance = min_pairwise_distance(points);
  const double threshold = 2.0 * (phi - eps);
  // Distances come out of atan2 with ~1e-16 error; do not reject exact polytopes on that.
  r.separated = r.min_distance >= threshold - 1e-12;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  double sampled = 0.0;
  for (int s = 0; s < samples; ++s) {
    Vec x(d);
    for (int k = 0; k < d; ++k) x[k] = normal(rng);
    x.normalize();
    double nearest = kPi;
    for (const auto& p : points) nearest = std::min(nearest, angle_between(x, p.vec()));
    sampled = std::max(sampled, nearest);
  }
  r.sampled_covering_radius = sampled;

  double exact = -1.0;
  if (d == 2) {
    std::vector<double> angles;
    for (const auto& p : points) angles.push_back(std::atan2(p[1], p[0]));
    std::sort(angles.begin(), angles.end());
    double gap = angles.front() + 2.0 * kPi - angles.back();
    for (std::size_t i = 1; i < angles.size(); ++i) gap = std::max(gap, angles[i] - angles[i - 1]);
    exact = gap / 2.0;
    r.origin_interior = gap < kPi;
  } else {
    try {
      const HullComplex hull = convex_hull(points);
      r.origin_interior = hull.contains_origin_strictly();
      if (r.origin_interior) {
        // Deep holes sit at the circumcenters of the Delone cells.
        const double rho = *std::min_element(hull.offsets.begin(), hull.offsets.end());
        exact = std::acos(clamp_unit(rho));
      }
    } catch (const DimensionError&) {
      r.origin_interior = false;
    }
  }
  if (exact >= 0.0) {
    r.covering_radius = std::max(exact, sampled);
  } else {
    // Some open hemisphere is empty, so its pole is at least pi/2 from every point.
    r.covering_radius = std::max(kPi / 2.0, sampled);
  }
  r.covering = r.covering_radius < threshold;
  return r;
}

}  // namespace sphstab
