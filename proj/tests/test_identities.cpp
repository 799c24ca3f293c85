#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hodgelab/chart.hpp"
#include "hodgelab/errors.hpp"
#include "hodgelab/identity_lab.hpp"

using namespace hodgelab;

namespace {

Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}

Eigen::VectorXd vec3(double a, double b, double c) {
  Eigen::VectorXd v(3);
  v << a, b, c;
  return v;
}

double max_residual(const std::vector<IdentityReport>& reports) {
  double m = 0.0;
  for (const auto& r : reports) m = std::max(m, r.rel_residual);
  return m;
}

} // namespace

TEST_CASE("circle chart geometry") {
  SphereChart c(1, 2.0);
  Eigen::VectorXd u(1);
  u << 0.7;
  const Eigen::VectorXd x = c.embed(u);
  CHECK(x[0] == doctest::Approx(2.0 * std::cos(0.7)).epsilon(1e-14));
  CHECK(c.metric(u)(0, 0) == doctest::Approx(4.0));
  CHECK(c.metric_inv(u)(0, 0) == doctest::Approx(0.25));
  CHECK(c.coords_of(x)[0] == doctest::Approx(0.7).epsilon(1e-12));
  CHECK((c.jacobian(u) - vec2(-2.0 * std::sin(0.7), 2.0 * std::cos(0.7))).norm() < 1e-14);
}

TEST_CASE("sphere chart geometry and pole guard") {
  SphereChart c(2, 1.0);
  Eigen::VectorXd u(2);
  u << 1.1, -2.3;
  const Eigen::VectorXd x = c.embed(u);
  CHECK(x.norm() == doctest::Approx(1.0));
  const Eigen::VectorXd ub = c.coords_of(x);
  CHECK(ub[0] == doctest::Approx(1.1).epsilon(1e-12));
  CHECK(ub[1] == doctest::Approx(-2.3).epsilon(1e-12));
  const Eigen::MatrixXd g = c.metric(u);
  CHECK(g(0, 0) == doctest::Approx(1.0));
  CHECK(g(1, 1) == doctest::Approx(std::sin(1.1) * std::sin(1.1)));
  // metric = jacobian gram matrix
  const Eigen::MatrixXd jg = c.jacobian(u).transpose() * c.jacobian(u);
  CHECK((g - jg).norm() < 1e-14);
  CHECK_THROWS_AS(c.coords_of(vec3(0.0, 0.0, 1.0)), PoleProximity);
  CHECK_THROWS_AS(c.coords_of(vec3(1e-4, 0.0, -std::sqrt(1.0 - 1e-8))), PoleProximity);
  CHECK_THROWS_AS(c.coords_of(vec3(0.0, 0.0, 2.0)), NotOnBoundary);
}

TEST_CASE("circle codifferential examples") {
  SphereChart c(1, 1.0);
  // eta = sin(theta) dtheta  =>  delta eta = -cos(theta)
  const ChartFormEval comps = [](const Eigen::VectorXd& u) {
    Eigen::VectorXd v(1);
    v << std::sin(u[0]);
    return v;
  };
  const ChartScalarEval zero = [](const Eigen::VectorXd&) { return 0.0; };
  for (double th : {0.3, 1.2, 2.9, -1.7}) {
    Eigen::VectorXd u(1);
    u << th;
    const FormValue d = chart_codiff_f_fd(c, 1, comps, zero, u);
    CHECK(d.c[0] == doctest::Approx(-std::cos(th)).epsilon(1e-9));
  }
  // constant coefficient: delta(dtheta) = 0
  const ChartFormEval one = [](const Eigen::VectorXd&) {
    Eigen::VectorXd v(1);
    v << 1.0;
    return v;
  };
  Eigen::VectorXd u(1);
  u << 0.9;
  CHECK(std::abs(chart_codiff_f_fd(c, 1, one, zero, u).c[0]) < 1e-10);
}

TEST_CASE("sphere codifferential against the closed form") {
  SphereChart c(2, 1.0);
  // eta = h(theta,phi) dtheta with h = cos(theta) sin(phi):
  // delta eta = -d_theta h - cot(theta) h
  const ChartFormEval comps = [](const Eigen::VectorXd& u) {
    Eigen::VectorXd v(2);
    v << std::cos(u[0]) * std::sin(u[1]), 0.0;
    return v;
  };
  const ChartScalarEval zero = [](const Eigen::VectorXd&) { return 0.0; };
  for (double th : {0.4, 1.3, 2.6}) {
    for (double ph : {-2.0, 0.3, 1.9}) {
      Eigen::VectorXd u(2);
      u << th, ph;
      const double expect =
          std::sin(th) * std::sin(ph) - std::cos(th) / std::sin(th) * std::cos(th) * std::sin(ph);
      const FormValue d = chart_codiff_f_fd(c, 1, comps, zero, u);
      CHECK(d.c[0] == doctest::Approx(expect).epsilon(1e-6));
    }
  }
  // the azimuth form dphi is co-closed
  const ChartFormEval dphi = [](const Eigen::VectorXd&) {
    Eigen::VectorXd v(2);
    v << 0.0, 1.0;
    return v;
  };
  Eigen::VectorXd u(2);
  u << 1.1, 0.4;
  CHECK(std::abs(chart_codiff_f_fd(c, 2 - 1, dphi, zero, u).c[0]) < 1e-9);
}

TEST_CASE("embedded chart geometry matches the closed-form sphere") {
  const std::vector<ScalarField> X = {parse_field("sin(x1)*cos(x2)", 2),
                                      parse_field("sin(x1)*sin(x2)", 2),
                                      parse_field("cos(x1)", 2)};
  ChartGeometry geo(X, 2);
  SphereChart c(2, 1.0);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uth(0.3, 2.8), uph(-3.0, 3.0);
  for (int i = 0; i < 5; ++i) {
    Eigen::VectorXd u(2);
    u << uth(rng), uph(rng);
    const ChartFrame fr = geo.frame(u);
    CHECK((fr.g - c.metric(u)).norm() < 1e-12);
    CHECK((fr.g_inv - c.metric_inv(u)).norm() < 1e-10);
    const auto gamma = c.christoffel(u);
    for (int k = 0; k < 2; ++k) CHECK((fr.gamma[k] - gamma[k]).norm() < 1e-10);
  }
}

TEST_CASE("chart laplacian eigenfunction and covariant trace identity") {
  const std::vector<ScalarField> X = {parse_field("sin(x1)*cos(x2)", 2),
                                      parse_field("sin(x1)*sin(x2)", 2),
                                      parse_field("cos(x1)", 2)};
  ChartGeometry geo(X, 2);
  const ScalarField z = parse_field("cos(x1)", 2);
  Eigen::VectorXd u(2);
  u << 1.2, 0.7;
  const ChartFrame fr = geo.frame(u);
  // first spherical harmonic: Lap z = 2 z on the unit sphere
  const double lap = ChartGeometry::laplacian_f(fr, z.jet(u), Eigen::VectorXd::Zero(2));
  CHECK(lap == doctest::Approx(2.0 * std::cos(1.2)).epsilon(1e-11));

  // sum over ambient coordinates of |nabla_{grad X_l} w|^2 equals |nabla w|^2
  std::mt19937_64 rng(5);
  const PFormField w = random_form(2, 1, 3, rng);
  const FormJet1 wj = w.jet1(u);
  double acc = 0.0;
  for (int l = 0; l < 3; ++l) {
    const Eigen::VectorXd grad_chart = fr.g_inv * X[l].jet(u).g;
    const FormValue dv = ChartGeometry::cov_dir_deriv(fr, wj, grad_chart);
    acc += chart_inner(fr.g_inv, dv, dv);
  }
  CHECK(acc == doctest::Approx(ChartGeometry::nabla_norm2(fr, wj)).epsilon(1e-11));

  // weighted Laplacians of the embedding coordinates: sum of squares is
  // m^2 |H|^2 + |grad f|^2 (unit sphere: m = 2, |H| = 1)
  const ScalarField f = parse_field("0.3*sin(x1)*cos(x2)", 2);
  const Eigen::VectorXd fgrad = f.jet(u).g;
  double sq = 0.0;
  for (int l = 0; l < 3; ++l)
    sq += std::pow(ChartGeometry::laplacian_f(fr, X[l].jet(u), fgrad), 2);
  const double grad2 = fgrad.dot(fr.g_inv * fgrad);
  CHECK(sq == doctest::Approx(4.0 + grad2).epsilon(1e-11));
}

TEST_CASE("pointwise identity suites") {
  const auto r2 = pointwise_suite(2, 100, 42);
  CHECK(r2.size() > 400);
  CHECK(max_residual(r2) < 1e-10);
  for (const auto& r : r2) CHECK(r.pass);
  const auto r3 = pointwise_suite(3, 100, 314159);
  CHECK(max_residual(r3) < 1e-10);
}

TEST_CASE("boundary operator bundle on the unit ball") {
  const FlatDomain dom = FlatDomain::ball(1.0, 3);
  std::mt19937_64 rng(7);
  PFormField w(3, 1);
  w.comp(0) = ScalarField::constant(0.0);
  w.comp(1) = ScalarField::constant(0.0);
  w.comp(2) = ScalarField::constant(1.0);  // w = dz
  const ScalarField f = parse_field("0.5*r2/2", 3);
  const ScalarField V = ScalarField::constant(1.0);
  const Eigen::VectorXd x = vec3(0.0, 0.0, 1.0);  // north pole: N = -e_z
  const BoundaryOps ops = boundary_ops(dom, w, f, V, x);
  CHECK(ops.point.eta == doctest::Approx(1.0));
  CHECK(ops.tangential.norm2() == doctest::Approx(0.0));
  CHECK(ops.normal.norm2() == doctest::Approx(1.0));
  CHECK(ops.normal.c[0] == doctest::Approx(-1.0));
  // f = a r^2/2 has normal derivative -a on the unit sphere (inner normal)
  CHECK(ops.f_n == doctest::Approx(-0.5));
  CHECK(ops.mean_f == doctest::Approx(1.0 - 0.25));
  CHECK(ops.v_n == doctest::Approx(0.0));
}

TEST_CASE("boundary quadratic form routes agree pointwise") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> nd(0.0, 1.0);
  for (const auto& dom : {FlatDomain::ball(1.0, 2), FlatDomain::ball(1.0, 3),
                          FlatDomain::annulus(0.6, 1.3, 3)}) {
    for (int i = 0; i < 12; ++i) {
      Eigen::VectorXd dir(dom.dim());
      for (int a = 0; a < dom.dim(); ++a) dir[a] = nd(rng);
      dir.normalize();
      double radius = dom.radius();
      if (dom.kind() == FlatDomain::Kind::Annulus && i % 2 == 1) radius = dom.inner_radius();
      const Eigen::VectorXd x = radius * dir;
      const int p = i % (dom.dim() + 1);
      const PFormField w = random_form(dom.dim(), p, 2, rng);
      const ScalarField f = random_polynomial(dom.dim(), 2, rng);
      const auto bf = b_f_form(dom, w, f, x);
      CHECK(rel_residual(bf.first, bf.second) < 1e-12);
    }
  }
}

TEST_CASE("boundary splitting identities") {
  // tangential rotation field on the disc boundary: all terms nearly vanish
  {
    const FlatDomain dom = FlatDomain::ball(1.0, 2);
    PFormField w(2, 1);
    w.comp(0) = -ScalarField::coordinate(1);  // -y dx
    w.comp(1) = ScalarField::coordinate(0);   // +x dy
    const ScalarField f = ScalarField::constant(0.0);
    const Eigen::VectorXd x = vec2(std::cos(0.4), std::sin(0.4));
    const auto reports = check_boundary_split(dom, w, f, x);
    REQUIRE(reports.size() == 2);
    for (const auto& r : reports) CHECK(r.rel_residual < 1e-9);
  }
  // seeded random sweeps on the disc and the 3-ball
  {
    const auto disc = boundary_split_suite(FlatDomain::ball(1.0, 2), 25, 2024);
    CHECK(max_residual(disc) < 1e-8);
    const auto ball = boundary_split_suite(FlatDomain::ball(1.0, 3), 25, 2025);
    CHECK(max_residual(ball) < 1e-8);
    const auto ann = boundary_split_suite(FlatDomain::annulus(0.5, 1.0, 3), 16, 2026);
    CHECK(max_residual(ann) < 1e-8);
  }
  CHECK_THROWS_AS(check_boundary_split(FlatDomain::ball(1.0, 2), PFormField(2, 0),
                                       ScalarField::constant(0.0), vec2(1.0, 0.0)),
                  DegreeError);
}

TEST_CASE("integration by parts with a known value") {
  const FlatDomain disc = FlatDomain::ball(1.0, 2);
  PFormField w(2, 0);
  w.comp(0) = ScalarField::coordinate(0);  // w = x
  PFormField psi(2, 1);
  psi.comp(0) = ScalarField::constant(1.0);  // psi = dx
  psi.comp(1) = ScalarField::constant(0.0);
  const ScalarField f = ScalarField::constant(0.0);
  const IdentityReport r = check_green(disc, w, psi, f, 12);
  CHECK(r.lhs == doctest::Approx(M_PI).epsilon(1e-12));
  CHECK(r.rel_residual < 1e-10);
}

TEST_CASE("energy identity with a known split") {
  const FlatDomain disc = FlatDomain::ball(1.0, 2);
  PFormField w(2, 1);
  w.comp(0) = ScalarField::constant(0.0);
  w.comp(1) = ScalarField::coordinate(0);  // w = x dy
  const ScalarField f = ScalarField::constant(0.0);
  const IdentityReport r = check_green_laplacian(disc, w, f, 12);
  CHECK(r.lhs == doctest::Approx(M_PI).epsilon(1e-12));  // |d(x dy)|^2 integrates to pi
  CHECK(r.rel_residual < 1e-10);
}

TEST_CASE("reilly identity reduces to the function case") {
  const FlatDomain disc = FlatDomain::ball(1.0, 2);
  std::mt19937_64 rng(31);
  const ScalarField u = random_polynomial(2, 3, rng);
  const PFormField w = gradient_field(u, 2);
  const ScalarField f = ScalarField::constant(0.25);
  const ScalarField V = ScalarField::constant(1.0);
  const auto reports = check_reilly(disc, w, f, V, 14);
  REQUIRE(reports.size() == 2);
  for (const auto& r : reports) CHECK(r.rel_residual < 1e-8);
}

TEST_CASE("integral suites on the verification domains") {
  const unsigned long long seed = 7777;
  for (const auto& dom :
       {FlatDomain::ball(1.0, 2), FlatDomain::annulus(0.5, 1.0, 2)}) {
    const auto reports = integral_suite(dom, seed, 12);
    CHECK(!reports.empty());
    CHECK(max_residual(reports) < 1e-8);
    for (const auto& r : reports) CHECK(r.pass);
  }
  // 3D spot check at moderate order to keep the test quick; the acceptance
  // suite runs the full order-12 sweep on all three domains
  const auto b3 = integral_suite(FlatDomain::ball(1.0, 3), seed, 10);
  CHECK(max_residual(b3) < 1e-8);
}

TEST_CASE("weight shift invariance of integral residuals") {
  // adding a constant to f rescales both sides identically; residuals match
  const FlatDomain disc = FlatDomain::ball(1.0, 2);
  std::mt19937_64 rng(12);
  const PFormField w = random_form(2, 1, 2, rng);
  const ScalarField f = random_polynomial(2, 2, rng);
  const IdentityReport a = check_green_laplacian(disc, w, f, 12);
  const IdentityReport b = check_green_laplacian(disc, w, f + 3.0, 12);
  CHECK(b.lhs == doctest::Approx(a.lhs * std::exp(-3.0)).epsilon(1e-11));
  CHECK(b.rel_residual < 1e-10);
}
