#include "sphstab/recovery.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <queue>
#include <string>

#include "sphstab/cells.hpp"
#include "sphstab/errors.hpp"
#include "sphstab/lpbound.hpp"

namespace sphstab {

namespace {

constexpr double kSeparationSlack = 1e-12;
constexpr double kRegularityTolerance = 1e-9;
constexpr double kCliqueTolerance = 0.1;
constexpr int kMaxCliques = 64;
constexpr int kMaxIterations = 50;

double max_abs_offdiag_inner(const std::vector<Vec>& u) {
  double m = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = i + 1; j < u.size(); ++j) m = std::max(m, std::abs(u[i].dot(u[j])));
  return m;
}

std::vector<Vec> as_vecs(const PointSet& p) {
  std::vector<Vec> out;
  out.reserve(p.size());
  for (const auto& x : p) out.push_back(x.vec());
  return out;
}

void finish(RecoveryResult& r, const PointSet& points, const std::vector<Vec>& reference) {
  if (r.fitted.empty())
    for (std::size_t i = 0; i < points.size(); ++i) r.fitted.push_back(r.rotation * reference[r.matching[i]]);
  r.deviations.clear();
  for (std::size_t i = 0; i < points.size(); ++i) {
    r.deviations.push_back(angle_between(points[i].vec(), r.fitted[i]));
  }
  r.max_deviation = *std::max_element(r.deviations.begin(), r.deviations.end());
  r.certified_bound = r.constant * r.eps;
  r.pass = r.max_deviation <= r.certified_bound + kCertificationFloor;
}

void check_common_dim(const PointSet& p, int d, const char* who) {
  for (const auto& x : p)
    if (x.dim() != d) throw DimensionError(std::string(who) + ": dimension mismatch");
}

// Columns spanning the orthogonal complement of the unit vector v.
Mat complement_basis(const Vec& v) {
  const Mat col = v;
  Eigen::HouseholderQR<Mat> qr(col);
  const Mat q = qr.householderQ();
  return q.rightCols(v.size() - 1);
}

double oriented_angle(const Vec& a) { return std::atan2(a[1], a[0]); }

double wrap(double a) {
  a = std::fmod(a + kPi, 2.0 * kPi);
  if (a < 0) a += 2.0 * kPi;
  return a - kPi;
}

Vec unit_at(double angle) {
  Vec v(2);
  v << std::cos(angle), std::sin(angle);
  return v;
}

// The triangle anchored so that the closest pair is matched symmetrically.
RecoveryResult recover_triangle(const PointSet& u, double eps) {
  double dist[3][3];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) dist[i][j] = geodesic_distance(u[i], u[j]);
  // Labels a, b, c with delta(a, b) <= delta(a, c) <= delta(b, c).
  int a = 0, b = 1, c = 2;
  double best = dist[0][1];
  for (auto [i, j, k] : {std::array<int, 3>{0, 2, 1}, std::array<int, 3>{1, 2, 0}})
    if (dist[i][j] < best) best = dist[i][j], a = i, b = j, c = k;
  if (dist[a][c] > dist[b][c]) std::swap(a, b);

  const double ta = oriented_angle(u[a].vec());
  const double step = wrap(oriented_angle(u[b].vec()) - ta);
  const double sigma = step >= 0 ? 1.0 : -1.0;
  const double mid = ta + 0.5 * step;
  std::vector<double> target(3);
  target[a] = mid - sigma * kPi / 3.0;
  target[b] = mid + sigma * kPi / 3.0;
  target[c] = mid + kPi;

  RecoveryResult r;
  r.type = PolytopeType::simplex(2);
  r.eps = eps;
  r.constant = stability_constants(r.type).c;
  for (int i = 0; i < 3; ++i) r.fitted.push_back(unit_at(target[i]));

  // Diagnostic: rotate the fitted triangle to minimize the largest deviation.
  auto worst = [&](double alpha) {
    double m = 0.0;
    for (int i = 0; i < 3; ++i) m = std::max(m, std::abs(wrap(oriented_angle(u[i].vec()) - target[i] - alpha)));
    return m;
  };
  double lo = -kPi / 3.0, hi = kPi / 3.0;
  for (int it = 0; it < 200; ++it) {
    const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
    if (worst(m1) < worst(m2)) hi = m2;
    else lo = m1;
  }
  r.minimax_deviation = worst(0.5 * (lo + hi));
  return r;
}

// Plane rotation in lin{q, e} taking q to e, as a product of two reflections.
Mat rotation_to(const Vec& q, const Vec& e) {
  const int n = static_cast<int>(q.size());
  Mat id = Mat::Identity(n, n);
  const Vec diff = q - e;
  if (diff.norm() < 1e-300) return id;
  const Vec h1 = diff.normalized();
  Mat r1 = id - 2.0 * h1 * h1.transpose();  // swaps q and e
  Vec h2 = q - q.dot(e) * e;
  if (h2.norm() < 1e-300) return r1 * r1;   // q = -e is excluded by the hypotheses
  h2.normalize();
  Mat r2 = id - 2.0 * h2 * h2.transpose();  // fixes e and lin{e, q}^perp
  return r2 * r1;
}

struct ReferenceCells {
  std::vector<Vec> vertices;
  DeloneComplex complex;
};

const ReferenceCells& reference_cells(PolytopeKind kind) {
  static std::mutex mu;
  static std::map<PolytopeKind, ReferenceCells> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(kind);
  if (it == cache.end()) {
    const PolytopeSpec spec = generate(make_polytope_type(kind, 0));
    it = cache.emplace(kind, ReferenceCells{as_vecs(spec.vertices), delone_complex(spec.vertices, false)}).first;
  }
  return it->second;
}

// Exact regular simplex of circumradius `radius` fitted to the vertices of a
// Delone cell: the directions of the vertices seen from the circumcenter are
// straightened by a simplex recovery one dimension lower.
std::vector<Vec> fit_cell(const PointSet& points, const DeloneCell& cell, double radius) {
  const Vec& v = cell.circumcenter;
  const int d = static_cast<int>(v.size());
  const Mat basis = complement_basis(v);
  PointSet dirs;
  for (int idx : cell.vertices) dirs.emplace_back(Vec((basis.transpose() * points[idx].vec()).normalized()));
  double min_angle = kPi;
  for (std::size_t i = 0; i < dirs.size(); ++i)
    for (std::size_t j = i + 1; j < dirs.size(); ++j)
      min_angle = std::min(min_angle, geodesic_distance(dirs[i], dirs[j]));
  const double sub_eps = std::max(0.0, 0.5 * (std::acos(-1.0 / (d - 1)) - min_angle));
  const RecoveryResult sub = recover_simplex(dirs, sub_eps);
  std::vector<Vec> out;
  for (const Vec& w : sub.fitted) out.push_back(std::cos(radius) * v + std::sin(radius) * (basis * w));
  return out;
}

double gamma_for(PolytopeKind kind) { return kind == PolytopeKind::Icosahedron ? 1e7 : 1e12; }

int nearest(const std::vector<Vec>& set, const Vec& x, double* dist) {
  int best = -1;
  double bd = 1e300;
  for (std::size_t j = 0; j < set.size(); ++j) {
    const double dd = (set[j] - x).squaredNorm();
    if (dd < bd) bd = dd, best = static_cast<int>(j);
  }
  if (dist) *dist = std::sqrt(bd);
  return best;
}

// Greedy one-to-one matching by increasing chord distance.
std::vector<int> greedy_matching(const std::vector<Vec>& points, const std::vector<Vec>& targets) {
  struct Pair {
    double d;
    int i, j;
  };
  std::vector<Pair> pairs;
  pairs.reserve(points.size() * targets.size());
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = 0; j < targets.size(); ++j)
      pairs.push_back({(points[i] - targets[j]).squaredNorm(), static_cast<int>(i), static_cast<int>(j)});
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    return a.d != b.d ? a.d < b.d : (a.i != b.i ? a.i < b.i : a.j < b.j);
  });
  std::vector<int> match(points.size(), -1);
  std::vector<char> used(targets.size(), 0);
  std::size_t left = points.size();
  for (const auto& p : pairs) {
    if (match[p.i] >= 0 || used[p.j]) continue;
    match[p.i] = p.j;
    used[p.j] = 1;
    if (--left == 0) break;
  }
  return match;
}

// Ordered d-cliques of the edge graph (pairs at distance edge +- tolerance)
// containing vertex `root`, in lexicographic order.
std::vector<std::vector<int>> edge_cliques(const std::vector<Vec>& pts, int root, int size, double edge,
                                           int limit) {
  const int n = static_cast<int>(pts.size());
  auto adjacent = [&](int i, int j) {
    return std::abs(angle_between(pts[i], pts[j]) - edge) <= kCliqueTolerance;
  };
  std::vector<std::vector<int>> out;
  std::vector<int> cur{root};
  std::function<void(int)> grow = [&](int from) {
    if (static_cast<int>(out.size()) >= limit) return;
    if (static_cast<int>(cur.size()) == size) {
      out.push_back(cur);
      return;
    }
    for (int j = from; j < n; ++j) {
      if (j == root) continue;
      bool ok = true;
      for (int c : cur) ok = ok && adjacent(c, j);
      if (!ok) continue;
      cur.push_back(j);
      grow(j + 1);
      cur.pop_back();
    }
  };
  grow(0);
  return out;
}

// Keeps the candidate with the smallest largest deviation. Candidates whose
// largest deviations agree up to rounding are ordered by the sum of squares,
// so that the choice does not depend on the input frame.
struct BestChoice {
  double worst = std::numeric_limits<double>::infinity();
  double sumsq = std::numeric_limits<double>::infinity();

  bool improves(const std::vector<double>& dev) {
    double w = 0.0, s = 0.0;
    for (double x : dev) {
      w = std::max(w, x);
      s += x * x;
    }
    const double tie = 1e-9 * w + 1e-15;
    if (w < worst - tie || (w <= worst + tie && s < sumsq)) {
      worst = std::min(w, worst);
      sumsq = s;
      return true;
    }
    return false;
  }
};

}  // namespace

std::vector<Vec> almost_orthogonal_basis(const std::vector<Vec>& u, double eta) {
  const int n = static_cast<int>(u.size());
  if (n == 0) throw DimensionError("almost_orthogonal_basis: no vectors");
  for (const auto& x : u)
    if (x.size() != n) throw DimensionError("almost_orthogonal_basis: need n vectors in R^n");
  if (n >= 2 && !(eta >= 0.0 && eta < 1.0 / (n - 1)))
    throw DomainError("almost_orthogonal_basis: eta must lie in [0, 1/(n-1))");
  if (max_abs_offdiag_inner(u) > eta + 1e-12)
    throw HypothesisError("almost_orthogonal_basis: inner products exceed eta");
  std::vector<Vec> cur = u;
  std::vector<Vec> v(n);
  for (int k = n - 1; k >= 0; --k) {
    v[k] = cur[k].normalized();
    for (int i = 0; i < k; ++i) cur[i] = (cur[i] - cur[i].dot(v[k]) * v[k]).normalized();
  }
  return v;
}

Mat fit_orthogonal(const std::vector<Vec>& from, const std::vector<Vec>& to) {
  if (from.empty() || from.size() != to.size()) throw DimensionError("fit_orthogonal: size mismatch");
  const int d = static_cast<int>(from[0].size());
  Mat h = Mat::Zero(d, d);
  for (std::size_t k = 0; k < from.size(); ++k) h += to[k] * from[k].transpose();
  Eigen::JacobiSVD<Mat> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

RecoveryResult recover_simplex(const PointSet& u, double eps, Hypotheses h) {
  if (u.empty()) throw DimensionError("recover_simplex: no points");
  const int d = u.front().dim();
  check_common_dim(u, d, "recover_simplex");
  if (static_cast<int>(u.size()) != d + 1)
    throw HypothesisError("recover_simplex: need d + 1 points in S^{d-1}");
  const PolytopeType type = PolytopeType::simplex(d);
  const StabilityConstants sc = stability_constants(type);
  if (!(eps >= 0.0) || (h == Hypotheses::Enforce && !(eps < sc.eps)))
    throw HypothesisError("recover_simplex: eps must lie in [0, " + std::to_string(sc.eps) + ")");
  const double needed = std::acos(-1.0 / d) - 2.0 * eps;
  for (int i = 0; i <= d; ++i)
    for (int j = i + 1; j <= d; ++j)
      if (geodesic_distance(u[i], u[j]) < needed - kSeparationSlack)
        throw HypothesisError("recover_simplex: separation hypothesis violated by points " +
                              std::to_string(i) + ", " + std::to_string(j));

  const std::vector<Vec> reference = as_vecs(generate(type).vertices);
  RecoveryResult r;
  if (d == 2) {
    r = recover_triangle(u, eps);
  } else {
    r.type = type;
    r.eps = eps;
    r.constant = sc.c;
    // Lift to S^d with e = e_{d+1}, straighten, rotate q back to e, project.
    const int n = d + 1;
    Vec e = Vec::Zero(n);
    e[d] = 1.0;
    const double a = std::sqrt(1.0 / n), b = std::sqrt(static_cast<double>(d) / n);
    std::vector<Vec> w;
    for (const auto& x : u) {
      Vec lifted = a * e;
      lifted.head(d) += b * x.vec();
      w.push_back(lifted);
    }
    const double eta = max_abs_offdiag_inner(w);
    if (!(eta < 1.0 / d)) throw HypothesisError("recover_simplex: lifted points are not almost orthogonal");
    const double scale = std::sqrt(static_cast<double>(n) / d);
    // Every ordering of the lifted points is admissible for the basis
    // construction; keep the one with the smallest largest deviation.
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    BestChoice choice;
    do {
      std::vector<Vec> wo;
      for (int i : order) wo.push_back(w[i]);
      const std::vector<Vec> q = almost_orthogonal_basis(wo, eta);
      Vec qsum = Vec::Zero(n);
      for (const auto& qi : q) qsum += qi;
      qsum *= a;
      const Mat rot = rotation_to(qsum.normalized(), e);
      std::vector<Vec> fitted(n);
      std::vector<double> dev(n);
      const Vec qhat = qsum.normalized();
      for (int k = 0; k < n; ++k) {
        // A (q_k - q/sqrt(d+1)) = A q_k - e/sqrt(d+1); centering before the
        // rotation keeps the output regular to rounding even when q is near e.
        const Vec bar = rot * (q[k] - a * qhat);
        fitted[order[k]] = (scale * bar).head(d).normalized();
        dev[k] = angle_between(u[order[k]].vec(), fitted[order[k]]);
      }
      if (choice.improves(dev)) r.fitted = fitted;
    } while (std::next_permutation(order.begin(), order.end()));
  }
  r.matching.resize(d + 1);
  for (int i = 0; i <= d; ++i) r.matching[i] = i;
  r.rotation = fit_orthogonal(reference, r.fitted);
  finish(r, u, reference);
  return r;
}

RecoveryResult recover_crosspolytope(const PointSet& x, double eps, Hypotheses h) {
  if (x.empty()) throw DimensionError("recover_crosspolytope: no points");
  const int d = x.front().dim();
  check_common_dim(x, d, "recover_crosspolytope");
  if (static_cast<int>(x.size()) != 2 * d)
    throw HypothesisError("recover_crosspolytope: need exactly 2d points");
  if (!(eps >= 0.0)) throw HypothesisError("recover_crosspolytope: eps must be non-negative");
  const double needed = kPi / 2 - 2.0 * eps;
  if (min_pairwise_distance(x) < needed - kSeparationSlack)
    throw HypothesisError("recover_crosspolytope: separation hypothesis violated");
  const PairClassification pc = classify_crosspolytope_pairs(x, eps, h == Hypotheses::Enforce);

  RecoveryResult r;
  r.type = PolytopeType::crosspolytope(d);
  r.eps = eps;
  r.constant = stability_constants(r.type).c;
  // Any representative of each pair, taken in any order, is admissible for
  // the basis construction; keep the choice with the smallest largest deviation.
  std::vector<int> order(d);
  for (int i = 0; i < d; ++i) order[i] = i;
  BestChoice choice;
  do {
    for (int mask = 0; mask < (1 << d); ++mask) {
      std::vector<int> rep(d), opp(d);
      std::vector<Vec> reps;
      for (int k = 0; k < d; ++k) {
        const auto [a, b] = pc.antipodal_pairs[order[k]];
        const bool flip = (mask >> k) & 1;
        rep[k] = flip ? b : a;
        opp[k] = flip ? a : b;
        reps.push_back(x[rep[k]].vec());
      }
      const double eta = std::max(pc.eta, max_abs_offdiag_inner(reps));
      const std::vector<Vec> w = almost_orthogonal_basis(reps, eta);
      std::vector<double> dev;
      for (int k = 0; k < d; ++k) {
        dev.push_back(angle_between(x[rep[k]].vec(), w[k]));
        dev.push_back(angle_between(x[opp[k]].vec(), -w[k]));
      }
      if (choice.improves(dev)) {
        r.rotation = Mat(d, d);
        r.matching.assign(2 * d, -1);
        for (int k = 0; k < d; ++k) {
          r.rotation.col(k) = w[k];
          r.matching[rep[k]] = k;
          r.matching[opp[k]] = d + k;
        }
      }
    }
  } while (std::next_permutation(order.begin(), order.end()));
  finish(r, x, as_vecs(generate(r.type).vertices));
  return r;
}

UnitVector reflect_vertex(const PointSet& facet, const UnitVector& v0) {
  const int d = v0.dim();
  if (static_cast<int>(facet.size()) != d - 1)
    throw DimensionError("reflect_vertex: facet needs d - 1 points");
  check_common_dim(facet, d, "reflect_vertex");
  std::vector<Vec> all = as_vecs(facet);
  all.push_back(v0.vec());
  const double ref = all[0].dot(all[1]);
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j)
      if (std::abs(all[i].dot(all[j]) - ref) > kRegularityTolerance)
        throw DomainError("reflect_vertex: facet and v0 do not form a regular simplex");
  Mat f(d, d - 1);
  for (int k = 0; k < d - 1; ++k) f.col(k) = facet[k].vec();
  Eigen::JacobiSVD<Mat> svd(f, Eigen::ComputeFullU);
  const Vec nrm = svd.matrixU().col(d - 1);
  return UnitVector(Vec(v0.vec() - 2.0 * v0.vec().dot(nrm) * nrm));
}

RecoveryResult recover_global(const PointSet& points, PolytopeKind kind, double eps) {
  if (kind != PolytopeKind::Icosahedron && kind != PolytopeKind::Cell600)
    throw HypothesisError("recover_global handles the icosahedron and the 600-cell");
  const PolytopeType type = make_polytope_type(kind, 0);
  const int d = type.dim;
  if (points.empty()) throw DimensionError("recover_global: no points");
  check_common_dim(points, d, "recover_global");
  const double phi = polytope_phi(type);
  const int f0 = polytope_f0(type);
  const int k = static_cast<int>(points.size());
  if (!(eps >= 0.0)) throw HypothesisError("recover_global: eps must be non-negative");
  if (k < f0) throw HypothesisError("recover_global: fewer than f0 points");
  if (min_pairwise_distance(points) < 2.0 * (phi - eps) - kSeparationSlack)
    throw HypothesisError("recover_global: separation hypothesis violated");

  RecoveryResult r;
  r.type = type;
  r.eps = eps;
  r.constant = stability_constants(type).c;
  r.chain_constant = 16.0 * std::sqrt(d - 1.0) / std::sin(phi);

  // Step 1: every Delone cell has circumradius at most r_{d-1}(phi) + gamma eps.
  const DeloneComplex complex = delone_complex(points, false);
  const double radius = circumradius_rj(d - 1, phi);
  r.step1_bound = radius + gamma_for(kind) * eps;
  r.step1_max_circumradius = complex.max_circumradius;
  if (complex.max_circumradius > r.step1_bound + kCertificationFloor)
    throw StructuralViolation("Step 1 violated: Delone cell " + std::to_string(complex.max_cell) +
                              " has circumradius " + std::to_string(complex.max_circumradius) +
                              " > " + std::to_string(r.step1_bound));
  if (k != f0)
    throw HypothesisError("recover_global: expected " + std::to_string(f0) + " points, got " +
                          std::to_string(k));
  for (std::size_t c = 0; c < complex.cells.size(); ++c)
    if (static_cast<int>(complex.cells[c].vertices.size()) != d)
      throw StructuralViolation("Delone cell " + std::to_string(c) + " is not a simplex");

  // Per-cell regular fits.
  std::vector<std::vector<Vec>> fits;
  fits.reserve(complex.cells.size());
  for (const auto& cell : complex.cells) fits.push_back(fit_cell(points, cell, radius));

  int seed = 0;
  for (std::size_t c = 1; c < complex.cells.size(); ++c)
    if (std::abs(complex.cells[c].circumradius - radius) < std::abs(complex.cells[seed].circumradius - radius))
      seed = static_cast<int>(c);
  r.seed_cell = seed;

  // Anchor the seed fit on a reference cell, then chain by reflections.
  const ReferenceCells& ref = reference_cells(kind);
  const DeloneCell& f_ref = ref.complex.cells.front();
  std::vector<Vec> from, to;
  for (int j = 0; j < d; ++j) {
    from.push_back(ref.vertices[f_ref.vertices[j]]);
    to.push_back(fits[seed][j]);
  }
  const Mat anchor = fit_orthogonal(from, to);
  std::vector<Vec> anchored;
  for (const auto& v : ref.vertices) anchored.push_back(anchor * v);

  std::vector<int> label(k, -1);
  std::vector<Vec> chained(k);
  for (int j = 0; j < d; ++j) {
    const int idx = complex.cells[seed].vertices[j];
    label[idx] = f_ref.vertices[j];
    chained[idx] = anchored[label[idx]];
  }
  std::vector<char> visited(complex.cells.size(), 0);
  std::queue<int> queue;
  queue.push(seed);
  visited[seed] = 1;
  while (!queue.empty()) {
    const int c = queue.front();
    queue.pop();
    const auto& cv = complex.cells[c].vertices;
    for (int nb : complex.cells[c].adjacent) {
      if (visited[nb]) continue;
      const auto& nv = complex.cells[nb].vertices;
      PointSet facet;
      int opposite = -1, fresh = -1;
      for (int idx : cv)
        if (std::find(nv.begin(), nv.end(), idx) != nv.end()) facet.emplace_back(chained[idx]);
        else opposite = idx;
      for (int idx : nv)
        if (std::find(cv.begin(), cv.end(), idx) == cv.end()) fresh = idx;
      if (opposite < 0 || fresh < 0 || static_cast<int>(facet.size()) != d - 1)
        throw StructuralViolation("Delone cells " + std::to_string(c) + " and " + std::to_string(nb) +
                                  " do not share a facet");
      const Vec predicted = reflect_vertex(facet, UnitVector(chained[opposite])).vec();
      double gap = 0.0;
      const int lab = nearest(anchored, predicted, &gap);
      if (gap > 1e-6) throw StructuralViolation("reflection chain left the reference configuration");
      if (label[fresh] < 0) {
        label[fresh] = lab;
        chained[fresh] = anchored[lab];
      } else if (label[fresh] != lab) {
        throw StructuralViolation("reflection chain assigns two labels to point " + std::to_string(fresh));
      }
      visited[nb] = 1;
      queue.push(nb);
    }
  }
  std::vector<char> taken(f0, 0);
  for (int i = 0; i < k; ++i) {
    if (label[i] < 0 || taken[label[i]])
      throw StructuralViolation("reflection chain does not match the points one-to-one");
    taken[label[i]] = 1;
  }

  // Average the per-cell estimates of each vertex and fit the final Phi.
  std::vector<std::vector<Vec>> estimates(k);
  for (std::size_t c = 0; c < complex.cells.size(); ++c)
    for (int j = 0; j < d; ++j) estimates[complex.cells[c].vertices[j]].push_back(fits[c][j]);
  double spread = 0.0;
  std::vector<Vec> mean(k), refs(k);
  for (int i = 0; i < k; ++i) {
    Vec s = Vec::Zero(d);
    for (std::size_t a = 0; a < estimates[i].size(); ++a) {
      s += estimates[i][a];
      for (std::size_t b = a + 1; b < estimates[i].size(); ++b)
        spread = std::max(spread, angle_between(estimates[i][a], estimates[i][b]));
    }
    mean[i] = s.normalized();
    refs[i] = ref.vertices[label[i]];
  }
  r.duplicate_spread = spread;
  if (spread > 10.0 * r.chain_constant * eps + kCertificationFloor)
    throw StructuralViolation("per-cell estimates disagree by " + std::to_string(spread));
  r.rotation = fit_orthogonal(refs, mean);
  r.matching = label;
  finish(r, points, ref.vertices);
  return r;
}

RecoveryResult recover(const PointSet& points, const PolytopeType& type, double eps, Hypotheses h) {
  switch (type.kind) {
    case PolytopeKind::Simplex: return recover_simplex(points, eps, h);
    case PolytopeKind::Crosspolytope: return recover_crosspolytope(points, eps, h);
    default: return recover_global(points, type.kind, eps);
  }
}

ProcrustesResult procrustes_align(const PointSet& points, const PointSet& reference) {
  if (points.empty() || points.size() != reference.size())
    throw DimensionError("procrustes_align: point and reference counts differ");
  const int d = points.front().dim();
  check_common_dim(points, d, "procrustes_align");
  check_common_dim(reference, d, "procrustes_align");
  const std::vector<Vec> x = as_vecs(points), v = as_vecs(reference);
  const int n = static_cast<int>(x.size());

  double edge = kPi;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edge = std::min(edge, angle_between(v[i], v[j]));
  const int size = std::min(d, n);
  const auto ref_cliques = edge_cliques(v, 0, size, edge, 1);
  auto data_cliques = edge_cliques(x, 0, size, edge, kMaxCliques);
  std::vector<Mat> starts;
  if (!ref_cliques.empty()) {
    for (const auto& cl : data_cliques) {
      std::vector<Vec> from, to;
      for (int j = 0; j < size; ++j) {
        from.push_back(v[ref_cliques[0][j]]);
        to.push_back(x[cl[j]]);
      }
      starts.push_back(fit_orthogonal(from, to));
    }
  }
  if (starts.empty()) starts.push_back(Mat::Identity(d, d));

  ProcrustesResult best;
  best.cost = 1e300;
  for (const Mat& start : starts) {
    Mat phi = start;
    std::vector<int> match;
    for (int it = 0; it < kMaxIterations; ++it) {
      std::vector<Vec> moved;
      for (const auto& r : v) moved.push_back(phi * r);
      std::vector<int> next = greedy_matching(x, moved);
      std::vector<Vec> from;
      for (int i = 0; i < n; ++i) from.push_back(v[next[i]]);
      phi = fit_orthogonal(from, x);
      const bool stable = next == match;
      match = std::move(next);
      if (stable) break;
    }
    double cost = 0.0;
    for (int i = 0; i < n; ++i) cost += (phi * v[match[i]] - x[i]).squaredNorm();
    if (cost < best.cost) {
      best.cost = cost;
      best.rotation = phi;
      best.matching = match;
    }
  }
  Mat h = Mat::Zero(d, d);
  for (int i = 0; i < n; ++i) h += x[i] * v[best.matching[i]].transpose();
  const Vec sv = Eigen::JacobiSVD<Mat>(h).singularValues();
  best.rank_deficient = sv[d - 1] < 1e-10 * sv[0];
  for (int i = 0; i < n; ++i)
    best.deviations.push_back(angle_between(x[i], best.rotation * v[best.matching[i]]));
  best.max_deviation = *std::max_element(best.deviations.begin(), best.deviations.end());
  return best;
}

}  // namespace sphstab
