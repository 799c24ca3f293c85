#include "hodgelab/mesh.hpp"

#include "hodgelab/errors.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <queue>
#include <sstream>

namespace hodgelab {

namespace {

// Parity of the permutation that sorts `t` (sign in {+1,-1}).
int sort_parity(std::vector<int>& t) {
  int sign = 1;
  for (std::size_t i = 0; i + 1 < t.size(); ++i)
    for (std::size_t j = i + 1; j < t.size(); ++j) {
      if (t[i] == t[j]) throw DomainError("degenerate simplex: repeated vertex");
      if (t[i] > t[j]) { std::swap(t[i], t[j]); sign = -sign; }
    }
  return sign;
}

std::vector<int> drop_vertex(const std::vector<int>& t, std::size_t pos) {
  std::vector<int> f;
  f.reserve(t.size() - 1);
  for (std::size_t i = 0; i < t.size(); ++i)
    if (i != pos) f.push_back(t[i]);
  return f;
}

int find_index(const std::vector<std::vector<int>>& sorted_list, const std::vector<int>& key) {
  auto it = std::lower_bound(sorted_list.begin(), sorted_list.end(), key);
  if (it == sorted_list.end() || *it != key) return -1;
  return static_cast<int>(it - sorted_list.begin());
}

// Apply the stored orientation sign to a sorted tuple: for a negative cell we
// swap the first two vertices, which realizes the opposite orientation class.
std::vector<int> oriented_tuple(const std::vector<int>& sorted, int sign) {
  std::vector<int> t = sorted;
  if (sign < 0 && t.size() >= 2) std::swap(t[0], t[1]);
  return t;
}

double cell_volume_sign(const Eigen::MatrixXd& coords) {
  const int k = static_cast<int>(coords.cols()) - 1;
  if (k <= 0 || coords.rows() != k) return 1.0;
  Eigen::MatrixXd E(k, k);
  for (int i = 0; i < k; ++i) E.col(i) = coords.col(i + 1) - coords.col(0);
  const double det = E.determinant();
  return det >= 0 ? 1.0 : -1.0;
}

// Exact rank of a sparse integer matrix by rational column echelon reduction.
int rational_rank(int rows, int cols, const std::vector<Eigen::Triplet<double>>& entries) {
  if (rows == 0 || cols == 0) return 0;
  std::vector<std::map<int, mpq_class>> col(cols);
  for (const auto& e : entries) {
    long v = std::lround(e.value());
    if (v != 0) col[e.col()][e.row()] += v;
  }
  std::map<int, std::map<int, mpq_class>> pivot;  // lowest row -> reduced column
  int rank = 0;
  for (auto& c : col) {
    for (auto it = c.begin(); it != c.end();)
      it = (it->second == 0) ? c.erase(it) : std::next(it);
    while (!c.empty()) {
      const int r = c.begin()->first;
      auto hit = pivot.find(r);
      if (hit == pivot.end()) {
        pivot.emplace(r, std::move(c));
        ++rank;
        break;
      }
      const auto& p = hit->second;
      mpq_class factor = c.begin()->second / p.begin()->second;
      for (const auto& [row, val] : p) {
        auto jt = c.find(row);
        if (jt == c.end()) {
          mpq_class nv = -factor * val;
          if (nv != 0) c.emplace(row, std::move(nv));
        } else {
          jt->second -= factor * val;
          if (jt->second == 0) c.erase(jt);
        }
      }
    }
  }
  return rank;
}

} // namespace

int SimplicialComplex::euler_characteristic() const {
  int chi = 0;
  for (int k = 0; k <= top_dim; ++k) chi += (k % 2 == 0 ? 1 : -1) * count(k);
  return chi;
}

Eigen::MatrixXd SimplicialComplex::simplex_coords(int k, int i) const {
  const auto& tup = simplices[k][i];
  Eigen::MatrixXd out(ambient_dim, k + 1);
  if (!periodic) {
    for (int a = 0; a <= k; ++a) out.col(a) = vertices.col(tup[a]);
    return out;
  }
  const int c = owner_[k][i];
  const auto& cell = simplices[top_dim][c];
  for (int a = 0; a <= k; ++a) {
    auto pos = std::find(cell.begin(), cell.end(), tup[a]);
    out.col(a) = cell_lift[c].col(pos - cell.begin());
  }
  return out;
}

SimplicialComplex build_complex(int ambient_dim, const Eigen::MatrixXd& vertices,
                                const std::vector<std::vector<int>>& top_cells) {
  if (top_cells.empty()) throw DomainError("build_complex: no top cells");
  const int top_dim = static_cast<int>(top_cells.front().size()) - 1;
  if (top_dim < 1 || top_dim > 3)
    throw UnsupportedDimension("build_complex: top dimension must be 1..3");
  const int V = static_cast<int>(vertices.cols());

  SimplicialComplex K;
  K.ambient_dim = ambient_dim;
  K.top_dim = top_dim;
  K.vertices = vertices;
  K.simplices.assign(top_dim + 1, {});
  K.owner_.assign(top_dim + 1, {});

  std::vector<int> input_parity(top_cells.size());
  auto& cells = K.simplices[top_dim];
  cells.reserve(top_cells.size());
  for (std::size_t c = 0; c < top_cells.size(); ++c) {
    if (static_cast<int>(top_cells[c].size()) != top_dim + 1)
      throw DomainError("build_complex: mixed cell sizes");
    std::vector<int> t = top_cells[c];
    for (int v : t)
      if (v < 0 || v >= V) throw DomainError("build_complex: vertex id out of range");
    input_parity[c] = sort_parity(t);
    cells.push_back(std::move(t));
  }

  // Enumerate faces of every dimension; lexicographic index order.
  for (int k = 0; k < top_dim; ++k) {
    std::map<std::vector<int>, int> seen;  // tuple -> first containing cell
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto& cell = cells[c];
      for (unsigned mask = 1; mask < (1u << (top_dim + 1)); ++mask) {
        if (__builtin_popcount(mask) != k + 1) continue;
        std::vector<int> f;
        for (int b = 0; b <= top_dim; ++b)
          if (mask & (1u << b)) f.push_back(cell[b]);
        seen.emplace(std::move(f), static_cast<int>(c));
      }
    }
    K.simplices[k].reserve(seen.size());
    K.owner_[k].reserve(seen.size());
    for (const auto& [tup, c] : seen) {
      K.simplices[k].push_back(tup);
      K.owner_[k].push_back(c);
    }
  }
  K.owner_[top_dim].resize(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) K.owner_[top_dim][c] = static_cast<int>(c);

  // Signed coboundary matrices on sorted tuples.
  K.coboundary.resize(top_dim);
  for (int k = 0; k < top_dim; ++k) {
    std::vector<Eigen::Triplet<double>> trip;
    const auto& hi = K.simplices[k + 1];
    for (std::size_t j = 0; j < hi.size(); ++j) {
      for (std::size_t pos = 0; pos < hi[j].size(); ++pos) {
        const int fi = find_index(K.simplices[k], drop_vertex(hi[j], pos));
        trip.emplace_back(static_cast<int>(j), fi, (pos % 2 == 0) ? 1.0 : -1.0);
      }
    }
    K.coboundary[k].resize(static_cast<int>(hi.size()), K.count(k));
    K.coboundary[k].setFromTriplets(trip.begin(), trip.end());
  }

  // Facet -> incident top cells; manifold check.
  const auto& facets = K.simplices[top_dim - 1];
  K.facet_cells_.assign(facets.size(), {});
  std::vector<std::vector<std::pair<int, int>>> facet_signs(facets.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    for (std::size_t pos = 0; pos <= static_cast<std::size_t>(top_dim); ++pos) {
      const int fi = find_index(facets, drop_vertex(cells[c], pos));
      K.facet_cells_[fi].push_back(static_cast<int>(c));
      facet_signs[fi].emplace_back(static_cast<int>(c), (pos % 2 == 0) ? 1 : -1);
      if (K.facet_cells_[fi].size() > 2)
        throw NonManifold("facet " + std::to_string(fi) + " has more than two cofaces");
    }
  }

  // Propagate orientation signs across shared facets.
  K.orientation.assign(cells.size(), 0);
  for (std::size_t seed = 0; seed < cells.size(); ++seed) {
    if (K.orientation[seed] != 0) continue;
    K.orientation[seed] = input_parity[seed];
    std::queue<int> bfs;
    bfs.push(static_cast<int>(seed));
    while (!bfs.empty()) {
      const int c = bfs.front();
      bfs.pop();
      for (std::size_t pos = 0; pos <= static_cast<std::size_t>(top_dim); ++pos) {
        const int fi = find_index(facets, drop_vertex(cells[c], pos));
        if (facet_signs[fi].size() != 2) continue;
        for (const auto& [other, osign] : facet_signs[fi]) {
          if (other == c) continue;
          const int csign = (facet_signs[fi][0].first == c) ? facet_signs[fi][0].second
                                                            : facet_signs[fi][1].second;
          const int want = -K.orientation[c] * csign * osign;
          if (K.orientation[other] == 0) {
            K.orientation[other] = want;
            bfs.push(other);
          } else if (K.orientation[other] != want) {
            throw NonOrientable("no consistent orientation across facet " + std::to_string(fi));
          }
        }
      }
    }
  }
  return K;
}

BoundaryMap boundary_complex(const SimplicialComplex& K) {
  BoundaryMap B;
  const int top = K.top_dim;
  std::vector<int> bfacets;
  for (int i = 0; i < K.count(top - 1); ++i)
    if (K.facet_cells_[i].size() == 1) bfacets.push_back(i);

  if (bfacets.empty()) {
    B.closed = true;
    B.boundary.ambient_dim = K.ambient_dim;
    B.boundary.top_dim = top - 1;
    B.boundary.simplices.assign(std::max(top, 1), {});
    B.inner_normals.resize(K.ambient_dim, 0);
    return B;
  }
  if (K.periodic) throw UnsupportedShape("periodic complexes must be closed");

  // Collect boundary vertices, renumber by parent index.
  std::map<int, int> vmap;
  for (int fi : bfacets)
    for (int v : K.simplices[top - 1][fi]) vmap.emplace(v, 0);
  int next = 0;
  for (auto& [pv, nv] : vmap) nv = next++;
  Eigen::MatrixXd bverts(K.ambient_dim, next);
  for (const auto& [pv, nv] : vmap) bverts.col(nv) = K.vertices.col(pv);

  // Boundary cells with the induced orientation written into the input order.
  std::vector<std::vector<int>> bcells;
  std::vector<int> induced_signs;
  bcells.reserve(bfacets.size());
  for (int fi : bfacets) {
    const int c = K.facet_cells_[fi][0];
    const auto& cell = K.simplices[top][c];
    const auto& tup = K.simplices[top - 1][fi];
    int pos = 0;
    while (std::find(tup.begin(), tup.end(), cell[pos]) != tup.end()) ++pos;
    const int induced = K.orientation[c] * ((pos % 2 == 0) ? 1 : -1);
    induced_signs.push_back(induced);
    std::vector<int> t(tup.size());
    for (std::size_t a = 0; a < tup.size(); ++a) t[a] = vmap.at(tup[a]);
    bcells.push_back(oriented_tuple(t, induced));
  }
  if (top == 1) {
    // 0-dimensional boundary: a signed point set, assembled by hand
    B.boundary.ambient_dim = K.ambient_dim;
    B.boundary.top_dim = 0;
    B.boundary.vertices = bverts;
    B.boundary.simplices.assign(1, {});
    B.boundary.owner_.assign(1, {});
    for (std::size_t i = 0; i < bcells.size(); ++i) {
      B.boundary.simplices[0].push_back(bcells[i]);
      B.boundary.owner_[0].push_back(static_cast<int>(i));
    }
    B.boundary.orientation = induced_signs;
  } else {
    B.boundary = build_complex(K.ambient_dim, bverts, bcells);
  }
  B.boundary.name = "boundary(" + (K.name.empty() ? "mesh" : K.name) + ")";

  // Inclusion maps back into the parent complex.
  B.inclusion.resize(top);
  std::vector<int> inv(next);
  for (const auto& [pv, nv] : vmap) inv[nv] = pv;
  for (int k = 0; k <= top - 1; ++k) {
    B.inclusion[k].resize(B.boundary.count(k));
    for (int i = 0; i < B.boundary.count(k); ++i) {
      std::vector<int> parent_tup;
      for (int v : B.boundary.simplices[k][i]) parent_tup.push_back(inv[v]);
      std::sort(parent_tup.begin(), parent_tup.end());
      const int pi = find_index(K.simplices[k], parent_tup);
      if (pi < 0) throw DomainError("boundary simplex missing from parent complex");
      B.inclusion[k][i] = pi;
    }
  }

  // Unit inner normals: orthogonal to the facet, toward the incident cell.
  B.inner_normals.resize(K.ambient_dim, B.boundary.count(top - 1));
  for (int i = 0; i < B.boundary.count(top - 1); ++i) {
    const int fi = B.inclusion[top - 1][i];
    const int c = K.facet_cells_[fi][0];
    const Eigen::MatrixXd F = K.simplex_coords(top - 1, fi);
    const Eigen::MatrixXd C = K.simplex_coords(top, c);
    Eigen::VectorXd w = C.rowwise().mean() - F.rowwise().mean();
    if (top >= 2) {
      Eigen::MatrixXd T(K.ambient_dim, top - 1);
      for (int a = 0; a < top - 1; ++a) T.col(a) = F.col(a + 1) - F.col(0);
      w -= T * (T.transpose() * T).ldlt().solve(T.transpose() * w);
    }
    const double nrm = w.norm();
    if (nrm < 1e-14) throw SingularCell("degenerate boundary facet");
    B.inner_normals.col(i) = w / nrm;
  }
  return B;
}

// --- generators -----------------------------------------------------------------

SimplicialComplex gen_interval(int nseg) {
  if (nseg < 1) throw UnsupportedShape("interval needs at least one segment");
  Eigen::MatrixXd verts(1, nseg + 1);
  for (int i = 0; i <= nseg; ++i) verts(0, i) = static_cast<double>(i) / nseg;
  std::vector<std::vector<int>> cells;
  for (int i = 0; i < nseg; ++i) cells.push_back({i, i + 1});
  SimplicialComplex K = build_complex(1, verts, cells);
  K.name = "interval(" + std::to_string(nseg) + ")";
  return K;
}

SimplicialComplex gen_circle(int nseg) {
  if (nseg < 3) throw UnsupportedShape("circle needs at least three segments");
  Eigen::MatrixXd verts(2, nseg);
  for (int i = 0; i < nseg; ++i) {
    const double a = 2.0 * M_PI * i / nseg;
    verts(0, i) = std::cos(a);
    verts(1, i) = std::sin(a);
  }
  std::vector<std::vector<int>> cells;
  for (int i = 0; i < nseg; ++i) cells.push_back({i, (i + 1) % nseg});
  SimplicialComplex K = build_complex(2, verts, cells);
  K.name = "circle(" + std::to_string(nseg) + ")";
  return K;
}

SimplicialComplex gen_disc(int level) {
  if (level < 0) throw UnsupportedShape("disc level must be nonnegative");
  Eigen::MatrixXd verts(2, 7);
  verts.col(0).setZero();
  for (int k = 0; k < 6; ++k) {
    const double a = M_PI * k / 3.0;
    verts(0, k + 1) = std::cos(a);
    verts(1, k + 1) = std::sin(a);
  }
  std::vector<std::vector<int>> cells;
  for (int k = 0; k < 6; ++k) cells.push_back({0, 1 + k, 1 + (k + 1) % 6});
  SimplicialComplex K = build_complex(2, verts, cells);
  auto project = [](const Eigen::VectorXd& x, bool on_boundary) {
    return on_boundary ? Eigen::VectorXd(x / x.norm()) : x;
  };
  for (int l = 0; l < level; ++l) K = refine(K, project);
  K.name = "disc(" + std::to_string(level) + ")";
  return K;
}

SimplicialComplex gen_icosphere(int level) {
  if (level < 0) throw UnsupportedShape("icosphere level must be nonnegative");
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  const double raw[12][3] = {{-1, t, 0}, {1, t, 0},  {-1, -t, 0}, {1, -t, 0},
                             {0, -1, t}, {0, 1, t},  {0, -1, -t}, {0, 1, -t},
                             {t, 0, -1}, {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
  const int face[20][3] = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                           {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                           {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                           {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  Eigen::MatrixXd verts(3, 12);
  for (int i = 0; i < 12; ++i) {
    Eigen::Vector3d v(raw[i][0], raw[i][1], raw[i][2]);
    verts.col(i) = v / v.norm();
  }
  std::vector<std::vector<int>> cells;
  for (const auto& f : face) {
    Eigen::Vector3d a = verts.col(f[0]), b = verts.col(f[1]), c = verts.col(f[2]);
    // make sure every input face is outward so the anchor is the outward class
    if (a.cross(b).dot(c) > 0)
      cells.push_back({f[0], f[1], f[2]});
    else
      cells.push_back({f[0], f[2], f[1]});
  }
  SimplicialComplex K = build_complex(3, verts, cells);
  auto project = [](const Eigen::VectorXd& x, bool) { return Eigen::VectorXd(x / x.norm()); };
  for (int l = 0; l < level; ++l) K = refine(K, project);
  K.name = "icosphere(" + std::to_string(level) + ")";
  return K;
}

namespace {

// Radially layered 3-ball / spherical shell over an icosphere template.
// Prisms between consecutive shells split into three tets; quad diagonals run
// from the smaller-indexed bottom vertex, which matches across neighbours.
SimplicialComplex radial_shell_mesh(int level, double r0, double r1, bool with_cone) {
  const SimplicialComplex S = gen_icosphere(level);
  const int VS = S.count(0);
  const int layers = std::max(1, 1 << std::max(level - 1, 0));
  const int shells = layers + 1;           // shell 0 = inner radius (or center cone base)
  const int base = with_cone ? 1 : 0;      // vertex 0 is the center for the ball

  const int nshell = with_cone ? layers : shells;
  Eigen::MatrixXd verts(3, base + nshell * VS);
  if (with_cone) verts.col(0).setZero();
  auto shell_vertex = [&](int shell, int v) {
    // ball: shells 1..layers at radii shell/layers; annulus: shells 0..layers
    return base + (shell - (with_cone ? 1 : 0)) * VS + v;
  };
  for (int j = with_cone ? 1 : 0; j <= layers; ++j) {
    const double r = with_cone ? r1 * j / layers : r0 + (r1 - r0) * j / layers;
    for (int v = 0; v < VS; ++v) verts.col(shell_vertex(j, v)) = r * S.vertices.col(v);
  }

  std::vector<std::vector<int>> cells;
  if (with_cone) {
    for (int fidx = 0; fidx < S.count(2); ++fidx) {
      const auto f = oriented_tuple(S.simplices[2][fidx], S.orientation[fidx]);
      cells.push_back({0, shell_vertex(1, f[0]), shell_vertex(1, f[1]), shell_vertex(1, f[2])});
    }
  }
  for (int j = (with_cone ? 1 : 0); j < layers; ++j) {
    for (int fidx = 0; fidx < S.count(2); ++fidx) {
      const auto& f = S.simplices[2][fidx];  // sorted: consistent quad diagonals
      const int a = shell_vertex(j, f[0]), b = shell_vertex(j, f[1]), c = shell_vertex(j, f[2]);
      const int a1 = shell_vertex(j + 1, f[0]), b1 = shell_vertex(j + 1, f[1]),
                c1 = shell_vertex(j + 1, f[2]);
      cells.push_back({a, b, c, c1});
      cells.push_back({a, b, c1, b1});
      cells.push_back({a, b1, c1, a1});
    }
  }
  // anchor the global orientation to positive volume
  {
    Eigen::MatrixXd C(3, 4);
    for (int i = 0; i < 4; ++i) C.col(i) = verts.col(cells[0][i]);
    if (cell_volume_sign(C) < 0) std::swap(cells[0][2], cells[0][3]);
  }
  return build_complex(3, verts, cells);
}

} // namespace

SimplicialComplex gen_ball3(int level) {
  if (level < 0) throw UnsupportedShape("ball3 level must be nonnegative");
  SimplicialComplex K = radial_shell_mesh(level, 0.0, 1.0, true);
  K.name = "ball3(" + std::to_string(level) + ")";
  return K;
}

SimplicialComplex gen_annulus3(int level, double r0, double r1) {
  if (level < 0) throw UnsupportedShape("annulus3 level must be nonnegative");
  if (!(r0 > 0.0) || !(r1 > r0)) throw UnsupportedShape("annulus3 needs 0 < r0 < r1");
  SimplicialComplex K = radial_shell_mesh(level, r0, r1, false);
  char buf[96];
  std::snprintf(buf, sizeof(buf), "annulus3(%d,%g,%g)", level, r0, r1);
  K.name = buf;
  return K;
}

SimplicialComplex gen_flat_torus(int nx, int ny, double wx, double wy) {
  if (nx < 3 || ny < 3) throw UnsupportedShape("flat_torus needs nx, ny >= 3");
  if (!(wx > 0.0) || !(wy > 0.0)) throw UnsupportedShape("flat_torus needs positive widths");
  const double sx = wx / nx, sy = wy / ny;
  Eigen::MatrixXd verts(2, nx * ny);
  auto id = [&](int i, int j) { return (i % nx) + nx * (j % ny); };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) verts.col(id(i, j)) = Eigen::Vector2d(i * sx, j * sy);

  std::vector<std::vector<int>> cells;
  std::vector<Eigen::MatrixXd> lifts;
  auto emit = [&](std::array<std::pair<int, int>, 3> corner) {
    std::array<std::pair<int, Eigen::Vector2d>, 3> vv;
    for (int a = 0; a < 3; ++a) {
      const auto [ci, cj] = corner[a];
      vv[a] = {id(ci, cj), Eigen::Vector2d(ci * sx, cj * sy)};
    }
    std::sort(vv.begin(), vv.end(),
              [](const auto& p, const auto& q) { return p.first < q.first; });
    cells.push_back({vv[0].first, vv[1].first, vv[2].first});
    Eigen::MatrixXd L(2, 3);
    for (int a = 0; a < 3; ++a) L.col(a) = vv[a].second;
    lifts.push_back(L);
  };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      emit({{{i, j}, {i + 1, j}, {i + 1, j + 1}}});
      emit({{{i, j}, {i + 1, j + 1}, {i, j + 1}}});
    }

  SimplicialComplex K = build_complex(2, verts, cells);
  char buf[96];
  std::snprintf(buf, sizeof(buf), "flat_torus(%d,%d,%g,%g)", nx, ny, wx, wy);
  K.name = buf;
  K.periodic = true;
  K.periods = Eigen::Vector2d(wx, wy);
  K.cell_lift = std::move(lifts);
  return K;
}

SimplicialComplex refine(const SimplicialComplex& K, const EdgeProjector& project) {
  if (K.periodic)
    throw UnsupportedShape("refine: periodic complexes are generated at final resolution");
  const int top = K.top_dim;
  const int V = K.count(0);
  const int E = K.count(1);

  // Boundary flags for edges (2D: edges are facets; 3D: edges of boundary facets).
  std::vector<char> edge_on_boundary(E, 0);
  if (top == 2) {
    for (int e = 0; e < E; ++e) edge_on_boundary[e] = K.facet_cells_[e].size() == 1;
  } else if (top == 3) {
    for (int f = 0; f < K.count(2); ++f) {
      if (K.facet_cells_[f].size() != 1) continue;
      const auto& tup = K.simplices[2][f];
      for (std::size_t pos = 0; pos < tup.size(); ++pos)
        edge_on_boundary[find_index(K.simplices[1], drop_vertex(tup, pos))] = 1;
    }
  }

  Eigen::MatrixXd verts(K.ambient_dim, V + E);
  verts.leftCols(V) = K.vertices;
  for (int e = 0; e < E; ++e) {
    const auto& t = K.simplices[1][e];
    Eigen::VectorXd mid = 0.5 * (K.vertices.col(t[0]) + K.vertices.col(t[1]));
    verts.col(V + e) = project ? project(mid, edge_on_boundary[e]) : mid;
  }

  auto mid_id = [&](int a, int b) {
    std::vector<int> key{std::min(a, b), std::max(a, b)};
    return V + find_index(K.simplices[1], key);
  };

  std::vector<std::vector<int>> cells;
  for (int c = 0; c < K.count(top); ++c) {
    const auto t = oriented_tuple(K.simplices[top][c], K.orientation[c]);
    if (top == 1) {
      const int m = mid_id(t[0], t[1]);
      cells.push_back({t[0], m});
      cells.push_back({m, t[1]});
    } else if (top == 2) {
      const int mab = mid_id(t[0], t[1]), mbc = mid_id(t[1], t[2]), mca = mid_id(t[2], t[0]);
      cells.push_back({t[0], mab, mca});
      cells.push_back({mab, t[1], mbc});
      cells.push_back({mca, mbc, t[2]});
      cells.push_back({mab, mbc, mca});
    } else {
      const int m01 = mid_id(t[0], t[1]), m02 = mid_id(t[0], t[2]), m03 = mid_id(t[0], t[3]);
      const int m12 = mid_id(t[1], t[2]), m13 = mid_id(t[1], t[3]), m23 = mid_id(t[2], t[3]);
      cells.push_back({t[0], m01, m02, m03});
      cells.push_back({m01, t[1], m12, m13});
      cells.push_back({m02, m12, t[2], m23});
      cells.push_back({m03, m13, m23, t[3]});
      cells.push_back({m01, m02, m03, m13});
      cells.push_back({m01, m02, m12, m13});
      cells.push_back({m02, m03, m13, m23});
      cells.push_back({m02, m12, m13, m23});
    }
  }
  SimplicialComplex R = build_complex(K.ambient_dim, verts, cells);
  R.name = K.name.empty() ? std::string("refined") : K.name + "+r";
  return R;
}

std::vector<int> betti(const SimplicialComplex& K) {
  std::vector<int> rank(K.top_dim, 0);
  for (int k = 0; k < K.top_dim; ++k) {
    std::vector<Eigen::Triplet<double>> trip;
    for (int col = 0; col < K.coboundary[k].outerSize(); ++col)
      for (Eigen::SparseMatrix<double>::InnerIterator it(K.coboundary[k], col); it; ++it)
        trip.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    rank[k] = rational_rank(K.count(k + 1), K.count(k), trip);
  }
  std::vector<int> b(K.top_dim + 1);
  for (int k = 0; k <= K.top_dim; ++k) {
    const int rk = (k < K.top_dim) ? rank[k] : 0;
    const int rkm = (k > 0) ? rank[k - 1] : 0;
    b[k] = K.count(k) - rk - rkm;
  }
  return b;
}

std::string dump_mesh(const SimplicialComplex& K) {
  std::ostringstream out;
  out << "dim " << K.ambient_dim << " " << K.top_dim << "\n";
  if (K.periodic) {
    char buf[64];
    out << "periodic";
    for (int a = 0; a < K.periods.size(); ++a) {
      std::snprintf(buf, sizeof(buf), " %.17g", K.periods[a]);
      out << buf;
    }
    out << "\n";
  }
  out << "vertices " << K.count(0) << "\n";
  char buf[64];
  for (int v = 0; v < K.count(0); ++v) {
    for (int a = 0; a < K.ambient_dim; ++a) {
      std::snprintf(buf, sizeof(buf), "%.17g", K.vertices(a, v));
      out << (a ? " " : "") << buf;
    }
    out << "\n";
  }
  out << "cells " << K.count(K.top_dim) << "\n";
  for (int c = 0; c < K.count(K.top_dim); ++c) {
    const auto& t = K.simplices[K.top_dim][c];
    for (std::size_t a = 0; a < t.size(); ++a) out << (a ? " " : "") << t[a];
    out << " " << K.orientation[c];
    if (K.periodic) {
      // per-vertex wrap offsets, encoded ox + 2*oy
      for (std::size_t a = 0; a < t.size(); ++a) {
        const Eigen::VectorXd base = K.vertices.col(t[a]);
        int code = 0;
        for (int d = 0; d < K.ambient_dim; ++d) {
          const int o = static_cast<int>(std::lround((K.cell_lift[c](d, a) - base[d]) / K.periods[d]));
          code += o << d;
        }
        out << " " << code;
      }
    }
    out << "\n";
  }
  return out.str();
}

SimplicialComplex load_mesh(const std::string& text) {
  std::istringstream in(text);
  std::string tok;
  auto expect = [&](const char* what) {
    if (!(in >> tok) || tok != what)
      throw ParseError(std::string("mesh: expected '") + what + "'", 1, 1);
  };
  expect("dim");
  int ambient = 0, top = 0;
  if (!(in >> ambient >> top)) throw ParseError("mesh: bad header", 1, 1);

  bool periodic = false;
  Eigen::VectorXd periods;
  if (!(in >> tok)) throw ParseError("mesh: truncated", 2, 1);
  if (tok == "periodic") {
    periodic = true;
    periods.resize(ambient);
    for (int a = 0; a < ambient; ++a)
      if (!(in >> periods[a])) throw ParseError("mesh: bad periods", 2, 1);
    if (!(in >> tok)) throw ParseError("mesh: truncated", 2, 1);
  }
  if (tok != "vertices") throw ParseError("mesh: expected 'vertices'", 2, 1);
  int nv = 0;
  if (!(in >> nv) || nv <= 0) throw ParseError("mesh: bad vertex count", 2, 1);
  Eigen::MatrixXd verts(ambient, nv);
  for (int v = 0; v < nv; ++v)
    for (int a = 0; a < ambient; ++a)
      if (!(in >> verts(a, v))) throw ParseError("mesh: bad vertex line", 3 + v, 1);

  expect("cells");
  int nc = 0;
  if (!(in >> nc) || nc <= 0) throw ParseError("mesh: bad cell count", 3 + nv, 1);
  std::vector<std::vector<int>> cells(nc, std::vector<int>(top + 1));
  std::vector<int> signs(nc);
  std::vector<std::vector<int>> codes(nc, std::vector<int>(top + 1));
  for (int c = 0; c < nc; ++c) {
    for (int a = 0; a <= top; ++a)
      if (!(in >> cells[c][a])) throw ParseError("mesh: bad cell line", 4 + nv + c, 1);
    if (!(in >> signs[c])) throw ParseError("mesh: bad cell sign", 4 + nv + c, 1);
    if (periodic)
      for (int a = 0; a <= top; ++a)
        if (!(in >> codes[c][a])) throw ParseError("mesh: bad cell offsets", 4 + nv + c, 1);
  }

  // Cells are stored sorted, so the sign IS the input parity; realize it in
  // the input order so build_complex reconstructs the same orientation.
  std::vector<std::vector<int>> oriented(nc);
  for (int c = 0; c < nc; ++c) oriented[c] = oriented_tuple(cells[c], signs[c]);
  SimplicialComplex K = build_complex(ambient, verts, oriented);
  if (periodic) {
    K.periodic = true;
    K.periods = periods;
    K.cell_lift.resize(nc);
    for (int c = 0; c < nc; ++c) {
      Eigen::MatrixXd L(ambient, top + 1);
      for (int a = 0; a <= top; ++a) {
        L.col(a) = verts.col(cells[c][a]);
        for (int d = 0; d < ambient; ++d)
          if (codes[c][a] & (1 << d)) L(d, a) += periods[d];
      }
      K.cell_lift[c] = L;
    }
  }
  K.name = "loaded";
  return K;
}

} // namespace hodgelab
