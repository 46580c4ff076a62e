#include "sphstab/hull.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "sphstab/errors.hpp"

namespace sphstab {

namespace {

int exact_orientation(const std::vector<const Vec*>& simplex, const Vec& q) {
  const int d = static_cast<int>(q.size());
  std::vector<std::vector<mpq_class>> m(d, std::vector<mpq_class>(d));
  const Vec& p0 = *simplex[0];
  for (int r = 0; r < d; ++r) {
    const Vec& row = r + 1 < d ? *simplex[r + 1] : q;
    for (int c = 0; c < d; ++c) m[r][c] = mpq_class(row[c]) - mpq_class(p0[c]);
  }
  int sign = 1;
  for (int c = 0; c < d; ++c) {
    int pivot = -1;
    for (int r = c; r < d; ++r)
      if (sgn(m[r][c]) != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) return 0;
    if (pivot != c) {
      std::swap(m[pivot], m[c]);
      sign = -sign;
    }
    if (sgn(m[c][c]) < 0) sign = -sign;
    for (int r = c + 1; r < d; ++r) {
      if (sgn(m[r][c]) == 0) continue;
      const mpq_class f = m[r][c] / m[c][c];
      for (int k = c; k < d; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return sign;
}

class Builder {
 public:
  explicit Builder(const std::vector<Vec>& pts) : pts_(pts), d_(static_cast<int>(pts.front().size())) {}

  HullComplex run() {
    const std::vector<int> initial = initial_simplex();
    interior_ = Vec::Zero(d_);
    for (int i : initial) interior_ += pts_[i];
    interior_ /= static_cast<double>(d_ + 1);

    for (int omit = 0; omit <= d_; ++omit) {
      std::vector<int> verts;
      for (int k = 0; k <= d_; ++k)
        if (k != omit) verts.push_back(initial[k]);
      add_facet(std::move(verts));
    }
    // Facet `omit` and facet `k` share everything but initial[omit], initial[k].
    for (int f = 0; f <= d_; ++f) {
      auto& nb = facets_[f].neighbors;
      nb.assign(d_, -1);
      for (int pos = 0; pos < d_; ++pos) {
        const int v = facets_[f].verts[pos];
        const int other = static_cast<int>(std::find(initial.begin(), initial.end(), v) - initial.begin());
        nb[pos] = other;
      }
    }

    std::vector<bool> used(pts_.size(), false);
    for (int i : initial) used[i] = true;
    for (int p = 0; p < static_cast<int>(pts_.size()); ++p)
      if (!used[p]) insert(p);
    return finish();
  }

 private:
  struct Facet {
    std::vector<int> verts;
    std::vector<int> neighbors;
    int inside_sign = 0;
    bool alive = true;
  };

  int orient(const Facet& f, const Vec& q) const {
    std::vector<const Vec*> s;
    s.reserve(d_);
    for (int v : f.verts) s.push_back(&pts_[v]);
    return orientation_sign(s, q);
  }

  int add_facet(std::vector<int> verts) {
    Facet f;
    f.verts = std::move(verts);
    f.inside_sign = orient(f, interior_);
    if (f.inside_sign == 0) throw Error("convex_hull: interior reference point lies on a facet");
    facets_.push_back(std::move(f));
    return static_cast<int>(facets_.size()) - 1;
  }

  bool visible(int f, int p) const {
    // A zero sign means p sits on the facet plane; the perturbation toward the
    // interior puts it beneath.
    const int s = orient(facets_[f], pts_[p]);
    return s != 0 && s != facets_[f].inside_sign;
  }

  void insert(int p) {
    std::vector<int> vis;
    std::vector<char> is_visible(facets_.size(), 0);
    for (int f = 0; f < static_cast<int>(facets_.size()); ++f)
      if (facets_[f].alive && visible(f, p)) {
        vis.push_back(f);
        is_visible[f] = 1;
      }
    if (vis.empty()) return;  // inside the current hull

    std::map<std::vector<int>, std::pair<int, int>> open_ridges;  // key -> (facet, position)
    for (int f : vis) {
      for (int k = 0; k < d_; ++k) {
        const int nb = facets_[f].neighbors[k];
        if (is_visible[nb]) continue;
        std::vector<int> verts;
        for (int j = 0; j < d_; ++j)
          if (j != k) verts.push_back(facets_[f].verts[j]);
        verts.push_back(p);
        const int g = add_facet(verts);
        is_visible.push_back(0);
        facets_[g].neighbors.assign(d_, -1);
        facets_[g].neighbors[d_ - 1] = nb;
        auto& back = facets_[nb].neighbors;
        *std::find(back.begin(), back.end(), f) = g;
        // Remaining ridges of g all contain p; pair them up with the other new facets.
        for (int j = 0; j + 1 < d_; ++j) {
          std::vector<int> key;
          for (int l = 0; l + 1 < d_; ++l)
            if (l != j) key.push_back(facets_[g].verts[l]);
          std::sort(key.begin(), key.end());
          auto it = open_ridges.find(key);
          if (it == open_ridges.end()) {
            open_ridges.emplace(std::move(key), std::make_pair(g, j));
          } else {
            const auto [h, pos] = it->second;
            facets_[g].neighbors[j] = h;
            facets_[h].neighbors[pos] = g;
            open_ridges.erase(it);
          }
        }
      }
    }
    for (int f : vis) facets_[f].alive = false;
  }

  std::vector<int> initial_simplex() const {
    const int n = static_cast<int>(pts_.size());
    std::vector<int> chosen{0};
    double scale = 0.0;
    for (const auto& p : pts_) scale = std::max(scale, p.norm());
    const double tol = 1e-9 * std::max(scale, 1.0);
    while (static_cast<int>(chosen.size()) <= d_) {
      Mat basis(d_, chosen.size() - 1);
      for (std::size_t k = 1; k < chosen.size(); ++k) basis.col(k - 1) = pts_[chosen[k]] - pts_[chosen[0]];
      Eigen::HouseholderQR<Mat> qr(basis);
      const Mat q = qr.householderQ() * Mat::Identity(d_, basis.cols());
      int best = -1;
      double best_dist = tol;
      for (int i = 0; i < n; ++i) {
        Vec r = pts_[i] - pts_[chosen[0]];
        if (basis.cols() > 0) r -= q * (q.transpose() * r);
        if (r.norm() > best_dist) {
          best_dist = r.norm();
          best = i;
        }
      }
      if (best < 0) throw DimensionError("convex_hull: input is not full-dimensional");
      chosen.push_back(best);
    }
    return chosen;
  }

  HullComplex finish() const {
    HullComplex h;
    h.dim = d_;
    h.points = pts_;
    std::vector<int> remap(facets_.size(), -1);
    for (std::size_t f = 0; f < facets_.size(); ++f)
      if (facets_[f].alive) {
        remap[f] = static_cast<int>(h.facets.size());
        h.facets.push_back(facets_[f].verts);
      }
    for (std::size_t f = 0; f < facets_.size(); ++f) {
      if (!facets_[f].alive) continue;
      std::vector<int> nb;
      for (int g : facets_[f].neighbors) nb.push_back(remap[g]);
      h.neighbors.push_back(std::move(nb));

      const auto& v = facets_[f].verts;
      Mat span(d_, d_ - 1);
      for (int k = 1; k < d_; ++k) span.col(k - 1) = pts_[v[k]] - pts_[v[0]];
      Eigen::HouseholderQR<Mat> qr(span);
      Vec n = qr.householderQ() * Vec::Unit(d_, d_ - 1);
      if (n.dot(pts_[v[0]] - interior_) < 0.0) n = -n;
      double offset = 0.0;
      for (int k : v) offset += n.dot(pts_[k]);
      h.normals.push_back(n);
      h.offsets.push_back(offset / d_);
    }
    return h;
  }

  const std::vector<Vec>& pts_;
  int d_;
  Vec interior_;
  std::vector<Facet> facets_;
};

}  // namespace

int orientation_sign(const std::vector<const Vec*>& simplex, const Vec& q) {
  const int d = static_cast<int>(q.size());
  Mat m(d, d);
  double scale = 1.0;
  for (int r = 0; r + 1 < d; ++r) {
    m.row(r) = (*simplex[r + 1] - *simplex[0]).transpose();
    scale *= m.row(r).norm();
  }
  m.row(d - 1) = (q - *simplex[0]).transpose();
  scale *= m.row(d - 1).norm();
  const double det = m.partialPivLu().determinant();
  if (std::abs(det) > 1e-10 * scale) return det > 0 ? 1 : -1;
  return exact_orientation(simplex, q);
}

std::vector<int> HullComplex::vertices() const {
  std::vector<int> v;
  for (const auto& f : facets) v.insert(v.end(), f.begin(), f.end());
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<std::vector<int>> HullComplex::ridges() const {
  std::vector<std::vector<int>> out;
  for (int f = 0; f < facet_count(); ++f)
    for (int k = 0; k < dim; ++k) {
      if (neighbors[f][k] < f) continue;
      std::vector<int> r;
      for (int j = 0; j < dim; ++j)
        if (j != k) r.push_back(facets[f][j]);
      std::sort(r.begin(), r.end());
      out.push_back(std::move(r));
    }
  return out;
}

bool HullComplex::contains_origin_strictly(double tol) const {
  return std::all_of(offsets.begin(), offsets.end(), [tol](double o) { return o > tol; });
}

HullComplex convex_hull(const std::vector<Vec>& points) {
  if (points.empty()) throw DimensionError("convex_hull: no points");
  const int d = static_cast<int>(points.front().size());
  if (d < 3 || d > 5) throw DimensionError("convex_hull: dimension must be 3..5");
  for (const auto& p : points)
    if (p.size() != d) throw DimensionError("convex_hull: dimension mismatch");
  if (static_cast<int>(points.size()) < d + 1) throw DimensionError("convex_hull: need at least d + 1 points");
  return Builder(points).run();
}

HullComplex convex_hull(const PointSet& points) {
  std::vector<Vec> raw;
  raw.reserve(points.size());
  for (const auto& p : points) raw.push_back(p.vec());
  return convex_hull(raw);
}

}  // namespace sphstab
