#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hodgelab/errors.hpp"
#include "hodgelab/mesh.hpp"

#include <Eigen/Sparse>

#include <set>

using namespace hodgelab;

namespace {

double dd_norm(const SimplicialComplex& K) {
  double worst = 0.0;
  for (int k = 0; k + 1 < K.top_dim; ++k) {
    Eigen::SparseMatrix<double> prod = K.coboundary[k + 1] * K.coboundary[k];
    worst = std::max(worst, prod.coeffs().size() ? prod.coeffs().cwiseAbs().maxCoeff() : 0.0);
  }
  return worst;
}

// Signed volume of a top cell in its stored orientation.
double oriented_volume(const SimplicialComplex& K, int c) {
  Eigen::MatrixXd X = K.simplex_coords(K.top_dim, c);
  const int k = K.top_dim;
  if (K.orientation[c] < 0) X.leftCols(2).rowwise().reverseInPlace();
  Eigen::MatrixXd E(X.rows(), k);
  for (int i = 0; i < k; ++i) E.col(i) = X.col(i + 1) - X.col(0);
  if (E.rows() == E.cols()) return E.determinant();
  return std::sqrt((E.transpose() * E).determinant());  // unsigned for embedded cells
}

} // namespace

TEST_CASE("interval counts, boundary, betti") {
  SimplicialComplex K = gen_interval(4);
  CHECK(K.count(0) == 5);
  CHECK(K.count(1) == 4);
  CHECK(K.euler_characteristic() == 1);
  auto b = betti(K);
  REQUIRE(b.size() == 2);
  CHECK(b[0] == 1);
  CHECK(b[1] == 0);

  BoundaryMap B = boundary_complex(K);
  CHECK(!B.closed);
  CHECK(B.boundary.count(0) == 2);
  // inner normals point into the interval
  for (int i = 0; i < 2; ++i) {
    const double x = B.boundary.vertices(0, i);
    const double n = B.inner_normals(0, i);
    CHECK(n * (0.5 - x) > 0.0);
    CHECK(std::abs(std::abs(n) - 1.0) < 1e-15);
  }
}

TEST_CASE("circle: perimeter, closed boundary, unit vertices") {
  SimplicialComplex K = gen_circle(6);
  CHECK(K.count(0) == 6);
  CHECK(K.count(1) == 6);
  double length = 0.0;
  for (int e = 0; e < 6; ++e) {
    Eigen::MatrixXd X = K.simplex_coords(1, e);
    length += (X.col(1) - X.col(0)).norm();
  }
  CHECK(length == doctest::Approx(6.0).epsilon(1e-14));
  for (int v = 0; v < K.count(0); ++v)
    CHECK(std::abs(K.vertices.col(v).norm() - 1.0) < 1e-14);

  auto b = betti(K);
  CHECK(b[0] == 1);
  CHECK(b[1] == 1);
  CHECK(boundary_complex(K).closed);

  // stored orientation is the consistent one: every oriented edge head-to-tail
  std::vector<int> outdeg(6, 0), indeg(6, 0);
  for (int e = 0; e < 6; ++e) {
    auto t = K.simplices[1][e];
    if (K.orientation[e] < 0) std::swap(t[0], t[1]);
    outdeg[t[0]]++;
    indeg[t[1]]++;
  }
  for (int v = 0; v < 6; ++v) {
    CHECK(outdeg[v] == 1);
    CHECK(indeg[v] == 1);
  }
}

TEST_CASE("disc: counts, refinement, boundary normals") {
  SimplicialComplex K0 = gen_disc(0);
  CHECK(K0.count(0) == 7);
  CHECK(K0.count(1) == 12);
  CHECK(K0.count(2) == 6);
  CHECK(K0.euler_characteristic() == 1);

  SimplicialComplex K = gen_disc(2);
  CHECK(K.count(2) == 96);
  CHECK(K.euler_characteristic() == 1);
  auto b = betti(K);
  CHECK(b[0] == 1);
  CHECK(b[1] == 0);
  CHECK(b[2] == 0);
  CHECK(dd_norm(K) == 0.0);
  for (int c = 0; c < K.count(2); ++c) CHECK(oriented_volume(K, c) > 0.0);

  BoundaryMap B = boundary_complex(K);
  CHECK(B.boundary.count(1) == 24);
  auto bb = betti(B.boundary);
  CHECK(bb[0] == 1);
  CHECK(bb[1] == 1);
  for (int i = 0; i < B.boundary.count(1); ++i) {
    Eigen::MatrixXd X = B.boundary.simplex_coords(1, i);
    for (int a = 0; a < 2; ++a) CHECK(std::abs(X.col(a).norm() - 1.0) < 1e-14);
    const Eigen::VectorXd mid = 0.5 * (X.col(0) + X.col(1));
    CHECK(B.inner_normals.col(i).dot(-mid) > 0.0);  // toward the center
  }
  // inclusion maps land on the parent's matching simplices
  for (int i = 0; i < B.boundary.count(0); ++i) {
    const int pi = B.inclusion[0][i];
    CHECK((B.boundary.vertices.col(i) - K.vertices.col(pi)).norm() == 0.0);
  }
}

TEST_CASE("icosphere: counts, refinement, orientation, betti") {
  SimplicialComplex K0 = gen_icosphere(0);
  CHECK(K0.count(0) == 12);
  CHECK(K0.count(1) == 30);
  CHECK(K0.count(2) == 20);
  CHECK(K0.euler_characteristic() == 2);

  SimplicialComplex K1 = gen_icosphere(1);
  CHECK(K1.count(0) == 42);
  CHECK(K1.count(1) == 120);
  CHECK(K1.count(2) == 80);
  for (int v = 0; v < K1.count(0); ++v)
    CHECK(std::abs(K1.vertices.col(v).norm() - 1.0) < 1e-14);
  CHECK(dd_norm(K1) == 0.0);
  CHECK(boundary_complex(K1).closed);

  // consistent orientation = outward everywhere
  for (int c = 0; c < K1.count(2); ++c) {
    auto t = K1.simplices[2][c];
    if (K1.orientation[c] < 0) std::swap(t[0], t[1]);
    Eigen::Vector3d a = K1.vertices.col(t[0]), b = K1.vertices.col(t[1]),
                    d = K1.vertices.col(t[2]);
    CHECK((b - a).cross(d - a).dot(a + b + d) > 0.0);
  }

  for (int lvl : {0, 2}) {
    auto b = betti(gen_icosphere(lvl));
    CHECK(b[0] == 1);
    CHECK(b[1] == 0);
    CHECK(b[2] == 1);
  }
}

TEST_CASE("flat torus: counts, lifts, betti") {
  SimplicialComplex K = gen_flat_torus(4, 4);
  CHECK(K.count(0) == 16);
  CHECK(K.count(1) == 48);
  CHECK(K.count(2) == 32);
  CHECK(K.euler_characteristic() == 0);
  CHECK(K.periodic);
  CHECK(dd_norm(K) == 0.0);
  CHECK(boundary_complex(K).closed);

  auto b = betti(K);
  CHECK(b[0] == 1);
  CHECK(b[1] == 2);
  CHECK(b[2] == 1);

  // every cell is an honest flat triangle of area (1/4 * 1/4) / 2
  for (int c = 0; c < K.count(2); ++c) {
    const Eigen::MatrixXd& L = K.cell_lift[c];
    const double area =
        0.5 * std::abs((L(0, 1) - L(0, 0)) * (L(1, 2) - L(1, 0)) -
                       (L(0, 2) - L(0, 0)) * (L(1, 1) - L(1, 0)));
    CHECK(area == doctest::Approx(0.03125).epsilon(1e-13));
    CHECK(L.minCoeff() >= 0.0);
    CHECK(L.maxCoeff() <= 1.0);
  }
  // lower simplices inherit a consistent lift from their owner cell
  for (int e = 0; e < K.count(1); ++e) {
    Eigen::MatrixXd X = K.simplex_coords(1, e);
    CHECK((X.col(1) - X.col(0)).norm() <= std::sqrt(2.0) * 0.25 + 1e-12);
  }
  CHECK_THROWS_AS(gen_flat_torus(2, 4), UnsupportedShape);
  CHECK_THROWS_AS(refine(K), UnsupportedShape);

  SimplicialComplex R = gen_flat_torus(5, 3, 2.0, 1.0);
  CHECK(R.count(0) == 15);
  CHECK(R.euler_characteristic() == 0);
  auto br = betti(R);
  CHECK(br[1] == 2);
}

TEST_CASE("ball3: radial layering, boundary sphere, betti") {
  SimplicialComplex K1 = gen_ball3(1);
  CHECK(K1.count(0) == 43);
  CHECK(K1.count(3) == 80);
  CHECK(K1.euler_characteristic() == 1);
  CHECK(dd_norm(K1) == 0.0);
  for (int c = 0; c < K1.count(3); ++c) CHECK(oriented_volume(K1, c) > 0.0);
  auto b = betti(K1);
  REQUIRE(b.size() == 4);
  CHECK(b[0] == 1);
  CHECK(b[1] == 0);
  CHECK(b[2] == 0);
  CHECK(b[3] == 0);

  SimplicialComplex K2 = gen_ball3(2);
  CHECK(K2.count(0) == 1 + 2 * 162);
  CHECK(K2.count(3) == 320 + 3 * 320);
  CHECK(K2.euler_characteristic() == 1);

  BoundaryMap B = boundary_complex(K2);
  CHECK(!B.closed);
  CHECK(B.boundary.count(2) == 320);
  CHECK(B.boundary.count(0) == 162);
  auto bb = betti(B.boundary);
  CHECK(bb[0] == 1);
  CHECK(bb[1] == 0);
  CHECK(bb[2] == 1);
  for (int i = 0; i < B.boundary.count(2); ++i) {
    Eigen::MatrixXd X = B.boundary.simplex_coords(2, i);
    for (int a = 0; a < 3; ++a) CHECK(std::abs(X.col(a).norm() - 1.0) < 1e-14);
    const Eigen::VectorXd mid = X.rowwise().mean();
    CHECK(B.inner_normals.col(i).dot(-mid) > 0.5);  // roughly radial, inward
  }
}

TEST_CASE("annulus3: two boundary spheres with opposite normals") {
  SimplicialComplex K = gen_annulus3(1, 0.5, 1.0);
  CHECK(K.count(0) == 2 * 42);
  CHECK(K.count(3) == 3 * 80);
  CHECK(K.euler_characteristic() == 2);
  CHECK(dd_norm(K) == 0.0);
  auto b = betti(K);
  CHECK(b[0] == 1);
  CHECK(b[1] == 0);
  CHECK(b[2] == 1);
  CHECK(b[3] == 0);

  BoundaryMap B = boundary_complex(K);
  auto bb = betti(B.boundary);
  CHECK(bb[0] == 2);
  CHECK(bb[2] == 2);
  int inner = 0, outer = 0;
  for (int i = 0; i < B.boundary.count(2); ++i) {
    Eigen::MatrixXd X = B.boundary.simplex_coords(2, i);
    const Eigen::VectorXd mid = X.rowwise().mean();
    const double r = X.col(0).norm();
    const double radial = B.inner_normals.col(i).dot(mid) / mid.norm();
    if (r < 0.75) {
      ++inner;
      CHECK(radial > 0.5);  // inner sphere: normal points away from origin
    } else {
      ++outer;
      CHECK(radial < -0.5);  // outer sphere: toward origin
    }
  }
  CHECK(inner == 80);
  CHECK(outer == 80);
}

TEST_CASE("refinement preserves topology and orientation") {
  SimplicialComplex K = gen_disc(1);
  SimplicialComplex R = refine(K);
  CHECK(R.count(2) == 4 * K.count(2));
  CHECK(R.euler_characteristic() == K.euler_characteristic());
  for (int c = 0; c < R.count(2); ++c) CHECK(oriented_volume(R, c) > 0.0);

  SimplicialComplex T = gen_ball3(1);
  SimplicialComplex RT = refine(T);
  CHECK(RT.count(3) == 8 * T.count(3));
  CHECK(RT.euler_characteristic() == 1);
  for (int c = 0; c < RT.count(3); ++c) CHECK(oriented_volume(RT, c) > 0.0);
  auto b = betti(RT);
  CHECK(b[0] == 1);
  CHECK(b[2] == 0);
}

TEST_CASE("invalid inputs: non-manifold, non-orientable, bad shapes") {
  Eigen::MatrixXd verts(2, 5);
  verts << 0, 1, 0, 0, 1, 0, 0, 1, -1, 1;
  CHECK_THROWS_AS(build_complex(2, verts, {{0, 1, 2}, {0, 1, 3}, {0, 1, 4}}), NonManifold);

  // five-triangle Moebius band
  Eigen::MatrixXd mv = Eigen::MatrixXd::Random(3, 5);
  CHECK_THROWS_AS(
      build_complex(3, mv, {{0, 1, 2}, {1, 2, 3}, {2, 3, 4}, {3, 4, 0}, {4, 0, 1}}),
      NonOrientable);

  CHECK_THROWS_AS(gen_circle(2), UnsupportedShape);
  CHECK_THROWS_AS(gen_annulus3(1, 1.0, 0.5), UnsupportedShape);
  CHECK_THROWS_AS(build_complex(2, verts, {{0, 1, 1}}), DomainError);
}

TEST_CASE("dump/load round trip is bit-exact") {
  for (int which = 0; which < 3; ++which) {
    SimplicialComplex K = which == 0   ? gen_icosphere(1)
                          : which == 1 ? gen_flat_torus(4, 4)
                                       : gen_ball3(1);
    const std::string text = dump_mesh(K);
    SimplicialComplex L = load_mesh(text);
    CHECK(dump_mesh(L) == text);
    CHECK(L.count(0) == K.count(0));
    CHECK(L.count(L.top_dim) == K.count(K.top_dim));
    CHECK(L.orientation == K.orientation);
    CHECK((L.vertices - K.vertices).norm() == 0.0);
    if (K.periodic) {
      REQUIRE(L.periodic);
      for (int c = 0; c < K.count(2); ++c)
        CHECK((L.cell_lift[c] - K.cell_lift[c]).norm() == 0.0);
    }
  }
  CHECK_THROWS_AS(load_mesh("dim 2"), ParseError);
}
