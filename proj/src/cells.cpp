#include "sphstab/cells.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include "sphstab/errors.hpp"

namespace sphstab {

namespace {

constexpr double kMergeTolerance = 1e-11;
constexpr double kRankTolerance = 1e-9;

int find_root(std::vector<int>& parent, int x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

int numeric_rank(const std::vector<Vec>& cols) {
  if (cols.empty()) return 0;
  Mat m(cols.front().size(), cols.size());
  for (std::size_t k = 0; k < cols.size(); ++k) m.col(k) = cols[k];
  const Vec s = Eigen::JacobiSVD<Mat>(m).singularValues();
  if (s[0] == 0.0) return 0;
  int r = 0;
  for (int k = 0; k < s.size(); ++k)
    if (s[k] > kRankTolerance * s[0]) ++r;
  return r;
}

// Orthonormal basis of the span of `cols`, assumed to have rank `rank`.
Mat span_basis(const std::vector<Vec>& cols, int rank) {
  Mat m(cols.front().size(), cols.size());
  for (std::size_t k = 0; k < cols.size(); ++k) m.col(k) = cols[k];
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU);
  return svd.matrixU().leftCols(rank);
}

std::vector<Vec> face_vectors(const DVCell& cell, const DVFace& f) {
  std::vector<Vec> out;
  for (int v : f.vertices) out.push_back(cell.vertices[v]);
  return out;
}

}  // namespace

double DeloneComplex::total_volume() const {
  double total = 0.0;
  for (const auto& c : cells) total += c.volume;
  return total;
}

std::vector<int> DeloneComplex::cells_of(int i) const {
  std::vector<int> out;
  for (int c = 0; c < static_cast<int>(cells.size()); ++c)
    if (std::binary_search(cells[c].vertices.begin(), cells[c].vertices.end(), i)) out.push_back(c);
  return out;
}

DeloneComplex delone_complex(const PointSet& points, bool volumes) {
  if (points.empty()) throw DimensionError("delone_complex: no points");
  const int d = points.front().dim();
  if (d < 3 || d > 5) throw DimensionError("delone_complex: dimension must be 3..5");
  const HullComplex hull = convex_hull(points);
  if (!hull.contains_origin_strictly(1e-12))
    throw HypothesisError("delone_complex: o is not an interior point of the hull (some open hemisphere is empty)");

  const int nf = hull.facet_count();
  std::vector<int> parent(nf);
  std::iota(parent.begin(), parent.end(), 0);
  for (int f = 0; f < nf; ++f)
    for (int g : hull.neighbors[f])
      if ((hull.normals[f] - hull.normals[g]).norm() <= kMergeTolerance &&
          std::abs(hull.offsets[f] - hull.offsets[g]) <= kMergeTolerance)
        parent[find_root(parent, f)] = find_root(parent, g);

  DeloneComplex out;
  out.dim = d;
  out.points = points;
  std::map<int, int> group_of_root;
  std::vector<int> group(nf);
  for (int f = 0; f < nf; ++f) {
    const int root = find_root(parent, f);
    auto [it, fresh] = group_of_root.emplace(root, static_cast<int>(out.cells.size()));
    if (fresh) out.cells.emplace_back();
    group[f] = it->second;
  }

  std::vector<Vec> normal_sum(out.cells.size(), Vec::Zero(d));
  std::vector<double> offset_sum(out.cells.size(), 0.0);
  for (int f = 0; f < nf; ++f) {
    DeloneCell& cell = out.cells[group[f]];
    std::vector<int> piece = hull.facets[f];
    std::sort(piece.begin(), piece.end());
    cell.simplices.push_back(piece);
    cell.vertices.insert(cell.vertices.end(), piece.begin(), piece.end());
    normal_sum[group[f]] += hull.normals[f];
    offset_sum[group[f]] += hull.offsets[f];
    for (int g : hull.neighbors[f])
      if (group[g] != group[f]) cell.adjacent.push_back(group[g]);
  }

  for (std::size_t c = 0; c < out.cells.size(); ++c) {
    DeloneCell& cell = out.cells[c];
    std::sort(cell.vertices.begin(), cell.vertices.end());
    cell.vertices.erase(std::unique(cell.vertices.begin(), cell.vertices.end()), cell.vertices.end());
    std::sort(cell.adjacent.begin(), cell.adjacent.end());
    cell.adjacent.erase(std::unique(cell.adjacent.begin(), cell.adjacent.end()), cell.adjacent.end());
    cell.circumcenter = normal_sum[c].normalized();
    const double rho = offset_sum[c] / static_cast<double>(cell.simplices.size());
    cell.circumradius = std::acos(clamp_unit(rho));
    if (d <= 4 && volumes) {
      cell.volume = 0.0;
      for (const auto& s : cell.simplices) {
        Mat m(d, d);
        for (int k = 0; k < d; ++k) m.col(k) = points[s[k]].vec();
        cell.volume += simplex_volume_unchecked(m);
      }
    } else {
      cell.volume = std::numeric_limits<double>::quiet_NaN();
    }
    if (cell.circumradius > out.max_circumradius) {
      out.max_circumradius = cell.circumradius;
      out.max_cell = static_cast<int>(c);
    }
  }
  return out;
}

bool DVCell::contains(const Vec& u, double tol) const {
  return std::all_of(constraints.begin(), constraints.end(), [&](const Vec& c) { return u.dot(c) >= -tol; });
}

std::vector<int> DVCell::faces_of_dim(int m) const {
  std::vector<int> out;
  for (int f = 0; f < static_cast<int>(faces.size()); ++f)
    if (faces[f].dim == m) out.push_back(f);
  return out;
}

DVCell dv_cell(const PointSet& points, int i) {
  if (i < 0 || i >= static_cast<int>(points.size())) throw DomainError("dv_cell: index out of range");
  const int d = points.front().dim();
  if (d >= 3 && d <= 5) {
    try {
      return dv_cell(delone_complex(points), i);
    } catch (const HypothesisError&) {
    } catch (const DimensionError&) {
      // Flat or too few points: still an intersection of hemispheres.
    }
  }
  DVCell cell;
  cell.owner = i;
  cell.dim = points.front().dim();
  cell.bounded = false;
  cell.center = points[i].vec();
  for (int j = 0; j < static_cast<int>(points.size()); ++j)
    if (j != i) {
      cell.constraints.push_back(points[i].vec() - points[j].vec());
      cell.facet_neighbors.push_back(j);
    }
  return cell;
}

DVCell dv_cell(const DeloneComplex& complex, int i) {
  const int n = static_cast<int>(complex.points.size());
  if (i < 0 || i >= n) throw DomainError("dv_cell: index out of range");
  const int d = complex.dim;
  DVCell cell;
  cell.owner = i;
  cell.dim = d;
  cell.center = complex.points[i].vec();
  for (int j = 0; j < n; ++j)
    if (j != i) cell.constraints.push_back(cell.center - complex.points[j].vec());

  for (int c : complex.cells_of(i)) {
    cell.vertices.push_back(complex.cells[c].circumcenter);
    cell.vertex_cell.push_back(c);
    cell.vertex_distance.push_back(angle_between(cell.center, complex.cells[c].circumcenter));
  }
  const int nv = static_cast<int>(cell.vertices.size());

  // Facets: bisectors of (i, j) whose dual vertices span a hyperplane.
  std::map<int, std::vector<int>> by_neighbor;
  for (int v = 0; v < nv; ++v)
    for (int j : complex.cells[cell.vertex_cell[v]].vertices)
      if (j != i) by_neighbor[j].push_back(v);

  std::map<std::vector<int>, int> index;
  std::vector<std::vector<int>> sets;
  auto add = [&](std::vector<int> s) {
    if (s.empty() || index.count(s)) return false;
    index.emplace(s, static_cast<int>(sets.size()));
    sets.push_back(std::move(s));
    return true;
  };
  for (auto& [j, verts] : by_neighbor) {
    std::vector<Vec> cols;
    for (int v : verts) cols.push_back(cell.vertices[v]);
    if (numeric_rank(cols) == d - 1) {
      cell.facet_neighbors.push_back(j);
      add(verts);
    }
  }
  // Every face is an intersection of facets.
  for (std::size_t a = 0; a < sets.size(); ++a)
    for (std::size_t b = 0; b < a; ++b) {
      std::vector<int> meet;
      std::set_intersection(sets[a].begin(), sets[a].end(), sets[b].begin(), sets[b].end(),
                            std::back_inserter(meet));
      add(std::move(meet));
    }
  for (int v = 0; v < nv; ++v) add({v});

  for (const auto& s : sets) {
    std::vector<Vec> cols;
    for (int v : s) cols.push_back(cell.vertices[v]);
    cell.faces.push_back({numeric_rank(cols) - 1, s, {}});
  }
  std::sort(cell.faces.begin(), cell.faces.end(), [](const DVFace& a, const DVFace& b) {
    return a.dim != b.dim ? a.dim < b.dim : a.vertices < b.vertices;
  });
  for (auto& f : cell.faces)
    for (int g = 0; g < static_cast<int>(cell.faces.size()); ++g) {
      const DVFace& sub = cell.faces[g];
      if (sub.dim == f.dim - 1 &&
          std::includes(f.vertices.begin(), f.vertices.end(), sub.vertices.begin(), sub.vertices.end()))
        f.subfaces.push_back(g);
    }
  return cell;
}

ClosestPoint closest_point_on_face(const DVCell& cell, int face) {
  if (!cell.bounded) throw HypothesisError("closest_point_on_face: cell has no face lattice");
  if (face < 0 || face >= static_cast<int>(cell.faces.size())) throw DomainError("closest_point_on_face: bad face");
  const DVFace& f = cell.faces[face];
  const Vec& x = cell.center;
  if (f.dim == 0) {
    const Vec& q = cell.vertices[f.vertices.front()];
    return {q, angle_between(x, q), true};
  }
  const std::vector<Vec> cols = face_vectors(cell, f);
  const Mat basis = span_basis(cols, f.dim + 1);
  const Vec p = basis * (basis.transpose() * x);

  bool inside = p.norm() > 1e-14;
  for (int g : f.subfaces) {
    if (!inside) break;
    const DVFace& sub = cell.faces[g];
    const Mat sub_basis = span_basis(face_vectors(cell, sub), sub.dim + 1);
    Vec normal = Vec::Zero(x.size());
    for (int v : f.vertices) {
      if (std::binary_search(sub.vertices.begin(), sub.vertices.end(), v)) continue;
      const Vec& w = cell.vertices[v];
      normal = w - sub_basis * (sub_basis.transpose() * w);
      break;
    }
    inside = normal.dot(p) > 1e-12 * normal.norm();
  }
  if (inside) {
    const Vec q = p.normalized();
    return {q, angle_between(x, q), true};
  }
  ClosestPoint best;
  best.distance = std::numeric_limits<double>::infinity();
  for (int g : f.subfaces) {
    ClosestPoint c = closest_point_on_face(cell, g);
    if (c.distance < best.distance) best = c;
  }
  best.relint = false;
  return best;
}

std::vector<QuasiOrthoscheme> quasi_orthoschemes(const DVCell& cell) {
  if (!cell.bounded) throw HypothesisError("quasi_orthoschemes: cell has no face lattice");
  const int d = cell.dim;
  if (d < 3 || d > 4) throw DimensionError("quasi_orthoschemes: dimension must be 3 or 4");
  std::vector<ClosestPoint> q;
  for (int f = 0; f < static_cast<int>(cell.faces.size()); ++f) q.push_back(closest_point_on_face(cell, f));

  std::vector<QuasiOrthoscheme> out;
  std::vector<int> tower(d - 1);
  auto descend = [&](auto&& self, int face, int m) -> void {
    tower[m] = face;
    if (m > 0) {
      for (int g : cell.faces[face].subfaces) self(self, g, m - 1);
      return;
    }
    QuasiOrthoscheme s;
    s.tower = tower;
    s.vertices.push_back(cell.center);
    for (int k = d - 2; k >= 0; --k) s.vertices.push_back(q[tower[k]].q);
    for (std::size_t a = 0; a < s.vertices.size(); ++a)
      for (std::size_t b = 0; b < a; ++b)
        if ((s.vertices[a] - s.vertices[b]).norm() <= 1e-9) return;  // improper tower
    s.is_orthoscheme = true;
    for (int k = 1; k <= d - 2; ++k) s.is_orthoscheme = s.is_orthoscheme && q[tower[k]].relint;
    Mat vm(d, d);
    for (int k = 0; k < d; ++k) vm.col(k) = s.vertices[k];
    s.volume = simplex_volume_unchecked(vm);
    out.push_back(std::move(s));
  };
  for (int f : cell.faces_of_dim(d - 2)) descend(descend, f, d - 2);
  return out;
}

double orthoscheme_chain_defect(const std::vector<Vec>& z) {
  double worst = 0.0;
  const int n = static_cast<int>(z.size());
  for (int i = 1; i + 1 < n; ++i) {
    auto project = [&](int from, int to) {
      std::vector<Vec> cols;
      for (int k = from; k <= to; ++k)
        if (k != i) cols.push_back(z[k] - z[k].dot(z[i]) * z[i]);
      return span_basis(cols, static_cast<int>(cols.size()));
    };
    const Mat a = project(0, i);
    const Mat b = project(i, n - 1);
    worst = std::max(worst, (a.transpose() * b).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace sphstab
