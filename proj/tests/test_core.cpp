#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <hodgelab/errors.hpp>
#include <hodgelab/expr.hpp>
#include <hodgelab/jet.hpp>
#include <hodgelab/multiindex.hpp>
#include <hodgelab/quadrature.hpp>

#include <cmath>
#include <random>

using namespace hodgelab;

TEST_CASE("binomials and table sizes") {
  CHECK(binom(4, 2) == 6);
  CHECK(binom(3, 0) == 1);
  CHECK(binom(3, 3) == 1);
  const auto& t = MultiIndexTable::get(3, 2);
  CHECK(t.count() == 3);
  // lexicographic: (0,1) (0,2) (1,2)
  CHECK(t.tuple(0)[0] == 0);
  CHECK(t.tuple(0)[1] == 1);
  CHECK(t.tuple(2)[0] == 1);
  CHECK(t.tuple(2)[1] == 2);
  CHECK_THROWS_AS(MultiIndexTable::get(3, 4), DegreeError);
  CHECK_THROWS_AS(MultiIndexTable::get(5, 1), DegreeError);
}

TEST_CASE("tuple lookup tracks permutation parity and kills repeats") {
  const auto& t = MultiIndexTable::get(3, 2);
  IndexTuple swapped{2, 0, 0, 0};
  auto s = t.lookup(swapped);  // (2,0) = -(0,2)
  CHECK(s.slot == t.slot_of(IndexTuple{0, 2, 0, 0}));
  CHECK(s.sign == -1);
  IndexTuple rep{1, 1, 0, 0};
  CHECK(t.lookup(rep).sign == 0);
}

TEST_CASE("star pairing signs square to the right parity") {
  // in dim 3: sign(I, I^c) paired both ways gives (-1)^{p(n-p)}
  for (int p = 0; p <= 3; ++p) {
    const auto& t = MultiIndexTable::get(3, p);
    const auto& tc = MultiIndexTable::get(3, 3 - p);
    for (int i = 0; i < t.count(); ++i) {
      int j = t.complement_slot(i, tc);
      int prod = t.star_sign(i) * tc.star_sign(j);
      CHECK(prod == ((p * (3 - p)) % 2 == 0 ? 1 : -1));
    }
  }
}

static double fd_partial(const ScalarField& u, Eigen::VectorXd x, int a, double h = 1e-5) {
  Eigen::VectorXd xp = x, xm = x;
  xp[a] += h;
  xm[a] -= h;
  return (u.value(xp) - u.value(xm)) / (2 * h);
}

TEST_CASE("second-order jets match central differences on a messy expression") {
  auto u = parse_field("exp(sin(x1*x2) - x2^2/4) + sqrt(4 + r2) * cos(x1)", 2);
  Eigen::VectorXd x(2);
  x << 0.7, -0.3;
  Jet2 j = u.jet(x);
  CHECK(j.v == doctest::Approx(u.value(x)).epsilon(1e-14));
  for (int a = 0; a < 2; ++a)
    CHECK(j.g[a] == doctest::Approx(fd_partial(u, x, a)).epsilon(1e-8));
  const double h = 1e-4;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b <= a; ++b) {
      Eigen::VectorXd xpp = x, xpm = x, xmp = x, xmm = x;
      xpp[a] += h; xpp[b] += h;
      xpm[a] += h; xpm[b] -= h;
      xmp[a] -= h; xmp[b] += h;
      xmm[a] -= h; xmm[b] -= h;
      double fd = (u.value(xpp) - u.value(xpm) - u.value(xmp) + u.value(xmm)) / (4 * h * h);
      CHECK(j.h(a, b) == doctest::Approx(fd).epsilon(5e-6));
    }
}

TEST_CASE("symbolic derivatives agree with jets") {
  auto u = parse_field("x1^3*x2 - sin(x1)*exp(x2) + r2^2", 2);
  auto ux = u.deriv(0);
  auto uy = u.deriv(1);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-1.5, 1.5);
  for (int k = 0; k < 20; ++k) {
    Eigen::VectorXd x(2);
    x << U(rng), U(rng);
    Jet2 j = u.jet(x);
    CHECK(ux.value(x) == doctest::Approx(j.g[0]).epsilon(1e-12));
    CHECK(uy.value(x) == doctest::Approx(j.g[1]).epsilon(1e-12));
  }
}

TEST_CASE("substitution composes correctly") {
  auto u = parse_field("r2 + x2", 2);
  // substitute x1 = s^2, x2 = 3 s  (s is the sole coordinate downstream)
  auto s2 = parse_field("x1^2", 1);
  auto s3 = parse_field("3*x1", 1);
  auto comp = u.subst({s2, s3});
  Eigen::VectorXd s(1);
  s << 0.5;
  double expect = std::pow(0.25, 2) + 9 * 0.25 + 3 * 0.5;
  CHECK(comp.value(s) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("jet worked examples") {
  auto u = parse_field("x1^2/2", 1);
  Eigen::VectorXd x(1);
  x << 3.0;
  Jet2 j = u.jet(x);
  CHECK(j.v == doctest::Approx(4.5));
  CHECK(j.g[0] == doctest::Approx(3.0));
  CHECK(j.h(0, 0) == doctest::Approx(1.0));

  auto v = parse_field("x1*x2", 2);
  Eigen::VectorXd y(2);
  y << 2.0, 5.0;
  Jet2 k = v.jet(y);
  CHECK(k.v == doctest::Approx(10.0));
  CHECK(k.g[0] == doctest::Approx(5.0));
  CHECK(k.g[1] == doctest::Approx(2.0));
  CHECK(k.h(0, 1) == doctest::Approx(1.0));
  CHECK(k.h(0, 0) == doctest::Approx(0.0));
}

TEST_CASE("parser rejects malformed input with position info") {
  CHECK_THROWS_AS(parse_field("x3", 2), ParseError);          // coord out of range
  CHECK_THROWS_AS(parse_field("foo(x1)", 2), ParseError);     // unknown identifier
  CHECK_THROWS_AS(parse_field("x1 + ", 2), ParseError);       // dangling operator
  CHECK_THROWS_AS(parse_field("(x1", 2), ParseError);         // unbalanced paren
  CHECK_THROWS_AS(parse_field("x1 ^ x2", 2), ParseError);     // non-constant exponent
  CHECK_THROWS_AS(parse_field("", 2), ParseError);
  try {
    parse_field("x1 +\n* 2", 2);
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
    CHECK(e.col == 1);
  }
}

TEST_CASE("parser precedence and associativity") {
  auto u = parse_field("2 + 3 * 4 ^ 2", 1);
  Eigen::VectorXd x(1);
  x << 0.0;
  CHECK(u.value(x) == doctest::Approx(50.0));
  auto v = parse_field("2 ^ 3 ^ 2", 1);  // right associative: 2^9
  CHECK(v.value(x) == doctest::Approx(512.0));
  auto w = parse_field("-x1^2", 1);  // -(x1^2)
  x << 2.0;
  CHECK(w.value(x) == doctest::Approx(-4.0));
  auto q = parse_field("1 - 2 - 3", 1);  // left associative
  CHECK(q.value(x) == doctest::Approx(-4.0));
}

TEST_CASE("gauss-legendre integrates high-degree polynomials exactly") {
  for (int n = 1; n <= 10; ++n) {
    auto rule = quad_interval(-1.0, 1.0, 2 * n - 1);
    // integrate x^{2n-2} over [-1,1]: 2/(2n-1)
    double s = 0;
    for (int i = 0; i < rule.size(); ++i)
      s += rule.weights[i] * std::pow(rule.points[i][0], 2 * n - 2);
    CHECK(s == doctest::Approx(2.0 / (2 * n - 1)).epsilon(1e-13));
  }
}

TEST_CASE("quadrature oracles on balls, annuli, spheres") {
  auto one = [](const Eigen::VectorXd&) { return 1.0; };

  auto b2 = quad_ball(1.0, 2, 12);
  CHECK(integrate(b2, one) == doctest::Approx(M_PI).epsilon(1e-12));

  auto b3 = quad_ball(1.0, 3, 12);
  CHECK(integrate(b3, one) == doctest::Approx(4 * M_PI / 3).epsilon(1e-12));
  // moment: int_{B^3} x^2 = 4 pi / 15
  auto xx = [](const Eigen::VectorXd& x) { return x[0] * x[0]; };
  CHECK(integrate(b3, xx) == doctest::Approx(4 * M_PI / 15).epsilon(1e-12));

  auto s2 = quad_sphere(1.0, 3, 12);
  CHECK(integrate(s2, one) == doctest::Approx(4 * M_PI).epsilon(1e-12));
  CHECK(integrate(s2, xx) == doctest::Approx(4 * M_PI / 3).epsilon(1e-12));

  auto s1 = quad_sphere(2.0, 2, 12);
  CHECK(integrate(s1, one) == doctest::Approx(4 * M_PI).epsilon(1e-12));

  auto an = quad_annulus(0.5, 1.0, 2, 12);
  CHECK(integrate(an, one) == doctest::Approx(M_PI * (1 - 0.25)).epsilon(1e-12));
  auto an3 = quad_annulus(0.5, 1.0, 3, 12);
  CHECK(integrate(an3, one) == doctest::Approx(4 * M_PI / 3 * (1 - 0.125)).epsilon(1e-12));

  // weighted: int_{B^2} e^{-r^2/2} = 2 pi (1 - e^{-1/2})
  auto f = parse_field("r2/2", 2);
  double w = integrate_weighted(b2, one, f);
  CHECK(w == doctest::Approx(2 * M_PI * (1 - std::exp(-0.5))).epsilon(1e-12));
}

TEST_CASE("reference simplex rules hit monomial exactness") {
  // int_{ref triangle} x^a y^b = a! b! / (a+b+2)!
  auto fact = [](int n) { double r = 1; for (int i = 2; i <= n; ++i) r *= i; return r; };
  for (int order = 2; order <= 10; order += 2) {
    auto rule = quad_ref_simplex(2, order);
    for (int a = 0; a + 0 <= order; ++a)
      for (int b = 0; a + b <= order; ++b) {
        double s = 0;
        for (int i = 0; i < rule.size(); ++i)
          s += rule.weights[i] * std::pow(rule.points[i][0], a) * std::pow(rule.points[i][1], b);
        double exact = fact(a) * fact(b) / fact(a + b + 2);
        CHECK(s == doctest::Approx(exact).epsilon(1e-12));
      }
  }
  // tetrahedron: int x^a y^b z^c = a! b! c! / (a+b+c+3)!
  auto rule3 = quad_ref_simplex(3, 6);
  for (int a = 0; a <= 6; ++a)
    for (int b = 0; a + b <= 6; ++b)
      for (int c = 0; a + b + c <= 6; ++c) {
        double s = 0;
        for (int i = 0; i < rule3.size(); ++i)
          s += rule3.weights[i] * std::pow(rule3.points[i][0], a) *
               std::pow(rule3.points[i][1], b) * std::pow(rule3.points[i][2], c);
        double exact = fact(a) * fact(b) * fact(c) / fact(a + b + c + 3);
        CHECK(s == doctest::Approx(exact).epsilon(1e-12));
      }
}

TEST_CASE("pairwise summation is deterministic") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> U(-1, 1);
  std::vector<double> v(10001);
  for (auto& t : v) t = U(rng);
  std::vector<double> a = v, b = v;
  double s1 = pairwise_sum(a);
  double s2 = pairwise_sum(b);
  CHECK(s1 == s2);  // bitwise
}

TEST_CASE("invalid orders and domains throw") {
  CHECK_THROWS_AS(quad_ball(1.0, 4, 8), UnsupportedDimension);
  CHECK_THROWS_AS(quad_ball(-1.0, 2, 8), DomainError);
  CHECK_THROWS_AS(quad_ball(1.0, 2, 0), DomainError);
  CHECK_THROWS_AS(quad_ball(1.0, 2, 21), DomainError);
  CHECK_THROWS_AS(quad_annulus(1.0, 0.5, 2, 8), DomainError);
  CHECK_THROWS_AS(parse_field("x1", 5), UnsupportedDimension);
}

TEST_CASE("jet arithmetic edge cases") {
  Jet2 a = Jet2::coordinate(2, 0, 2.0);
  Jet2 b = Jet2::coordinate(2, 1, 3.0);
  Jet2 q = a / b;
  CHECK(q.v == doctest::Approx(2.0 / 3.0));
  CHECK(q.g[0] == doctest::Approx(1.0 / 3.0));
  CHECK(q.g[1] == doctest::Approx(-2.0 / 9.0));
  CHECK(q.h(0, 1) == doctest::Approx(-1.0 / 9.0));
  CHECK(q.h(1, 1) == doctest::Approx(4.0 / 27.0));
  CHECK_THROWS_AS(hodgelab::sqrt(a - Jet2::constant(2, 2.0) * Jet2::constant(2, 1.5)), DomainError);
  // integer powers valid at negative base
  Jet2 p = pow(a - Jet2::constant(2, 5.0), 3);
  CHECK(p.v == doctest::Approx(-27.0));
  CHECK(p.g[0] == doctest::Approx(27.0));
}
