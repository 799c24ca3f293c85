#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hodgelab/eig.hpp"
#include "hodgelab/errors.hpp"
#include "hodgelab/fields.hpp"
#include "hodgelab/mesh.hpp"
#include "hodgelab/spectra.hpp"
#include "hodgelab/whitney.hpp"

#include <cmath>
#include <random>

using namespace hodgelab;

namespace {

// cyclic Jacobi on the Cholesky-reduced pencil: an independent eigenvalue oracle
Eigen::VectorXd jacobi_pencil_eigenvalues(Eigen::MatrixXd A, const Eigen::MatrixXd& B) {
  const Eigen::LLT<Eigen::MatrixXd> llt(B);
  REQUIRE(llt.info() == Eigen::Success);
  const Eigen::MatrixXd L = llt.matrixL();
  Eigen::MatrixXd C = L.triangularView<Eigen::Lower>().solve(A);
  C = L.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd(C.transpose()));
  C = 0.5 * (C + C.transpose()).eval();

  const int n = static_cast<int>(C.rows());
  const double scale = C.cwiseAbs().maxCoeff();
  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off = std::max(off, std::abs(C(p, q)));
    if (off < 1e-14 * scale) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(C(p, q)) < 1e-16 * scale) continue;
        const double th = 0.5 * std::atan2(2.0 * C(p, q), C(q, q) - C(p, p));
        const double c = std::cos(th), s = std::sin(th);
        for (int k = 0; k < n; ++k) {
          const double kp = C(k, p), kq = C(k, q);
          C(k, p) = c * kp - s * kq;
          C(k, q) = s * kp + c * kq;
        }
        for (int k = 0; k < n; ++k) {
          const double pk = C(p, k), qk = C(q, k);
          C(p, k) = c * pk - s * qk;
          C(q, k) = s * pk + c * qk;
        }
      }
  }
  Eigen::VectorXd ev = C.diagonal();
  std::sort(ev.data(), ev.data() + n);
  return ev;
}

const ScalarField kZero = ScalarField::constant(0.0);

double max_rel_gap(const std::vector<double>& got, const std::vector<double>& want) {
  REQUIRE(got.size() >= want.size());
  double m = 0.0;
  for (std::size_t i = 0; i < want.size(); ++i)
    m = std::max(m, std::abs(got[i] - want[i]) / std::max(std::abs(want[i]), 1.0));
  return m;
}

}  // namespace

TEST_CASE("partial eigensolver matches a cyclic Jacobi oracle at n=200") {
  std::mt19937_64 rng(424242);
  std::normal_distribution<double> g(0.0, 1.0);
  const int n = 200;
  Eigen::MatrixXd R(n, n), S(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      R(i, j) = g(rng);
      S(i, j) = g(rng);
    }
  const Eigen::MatrixXd A = 0.5 * (R + R.transpose());
  const Eigen::MatrixXd B =
      S * S.transpose() + 0.5 * n * Eigen::MatrixXd::Identity(n, n);

  const Eigen::VectorXd oracle = jacobi_pencil_eigenvalues(A, B);
  const EigResult part = eig_gen_sym(A, B, 7, 1e-8);
  REQUIRE(part.values.size() == 7);
  CHECK((part.values - oracle.head(7)).cwiseAbs().maxCoeff() < 1e-9);

  const Eigen::VectorXd res = pencil_residuals(A, B, part);
  CHECK(res.maxCoeff() < 1e-8);

  // B-orthonormal vectors
  const Eigen::MatrixXd gram = part.vectors.transpose() * B * part.vectors;
  CHECK((gram - Eigen::MatrixXd::Identity(7, 7)).cwiseAbs().maxCoeff() < 1e-10);

  CHECK_THROWS_AS(eig_gen_sym(A, B, 0, 1e-8), SolveFailure);
  CHECK_THROWS_AS(eig_gen_sym(A, B, n + 1, 1e-8), SolveFailure);
}

TEST_CASE("circle eigenvalues land on the squared integers") {
  WeightedComplex W = assemble(gen_circle(256), kZero, 4);
  SpectrumResult s = coexact_spectrum(W, 0, 4);
  CHECK(max_rel_gap(s.eigenvalues, {1.0, 1.0, 4.0, 4.0}) < 1e-3);
  for (double r : s.residuals) CHECK(r < 1e-8);
  CHECK(s.mesh == "circle(256)");
  CHECK(s.h > 0.0);

  // 1-forms carry the harmonic class plus the same positive spectrum
  SpectrumResult f = full_spectrum(W, 1, 5);
  CHECK(std::abs(f.eigenvalues[0]) < 1e-9);
  CHECK(max_rel_gap({f.eigenvalues.begin() + 1, f.eigenvalues.end()},
                    {1.0, 1.0, 4.0, 4.0}) < 1e-3);

  // B-orthonormal eigenvectors
  const Eigen::MatrixXd gram =
      s.vectors.transpose() * Eigen::MatrixXd(W.mass[0]) * s.vectors;
  CHECK((gram - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-9);

  CHECK_THROWS_AS(coexact_spectrum(W, 1, 2), DegreeError);
  WeightedComplex Wd = assemble(gen_disc(1), kZero, 4);
  CHECK_THROWS_AS(coexact_spectrum(Wd, 0, 2), DomainError);
}

TEST_CASE("sphere and torus function spectra converge at second order") {
  double l2 = 0.0, l3 = 0.0;
  for (int L : {2, 3}) {
    WeightedComplex W = assemble(gen_icosphere(L), kZero, 4);
    SpectrumResult s = coexact_spectrum(W, 0, 3);
    // first cluster has multiplicity three
    CHECK(std::abs(s.eigenvalues[2] - s.eigenvalues[0]) < 1e-9 * s.eigenvalues[0]);
    (L == 2 ? l2 : l3) = s.eigenvalues[0];
  }
  CHECK(std::abs(l3 - 2.0) < 0.02 * 2.0);
  // Richardson extrapolation of the second-order error
  const double extrap = (4.0 * l3 - l2) / 3.0;
  CHECK(std::abs(extrap - 2.0) < 0.005 * 2.0);

  WeightedComplex Wt = assemble(gen_flat_torus(16, 16, 1.0, 1.0), kZero, 4);
  SpectrumResult st = coexact_spectrum(Wt, 0, 4);
  const double fourpi2 = 4.0 * M_PI * M_PI;
  for (double v : st.eigenvalues) CHECK(std::abs(v - fourpi2) < 0.02 * fourpi2);
}

TEST_CASE("both exact-spectrum routes agree to solver precision") {
  WeightedComplex W = assemble(gen_icosphere(2), parse_field("0.3*x1", 3), 6);
  SpectrumResult s = exact_spectrum(W, 1, 3);
  REQUIRE(s.projected.size() == s.eigenvalues.size());
  for (std::size_t i = 0; i < s.eigenvalues.size(); ++i)
    CHECK(std::abs(s.eigenvalues[i] - s.projected[i]) < 1e-9 * s.eigenvalues[i]);
  CHECK(s.kind == SpectrumKind::exact);
  CHECK(s.degree == 1);
}

TEST_CASE("duality pairs the co-exact and exact spectra") {
  // identity 1 (degree shift) holds at solver precision; identity 2
  // (complementary degree) compares two independent pencils and carries the
  // discretization error of the mesh, so it is reported but only bounded loosely
  WeightedComplex Ws = assemble(gen_icosphere(2), parse_field("0.3*x1", 3), 6);
  DualityReport rs = check_duality(Ws);
  CHECK(rs.pass_next);
  CHECK(rs.max_rel_next < 1e-7);
  CHECK(rs.max_rel_dual < 0.02);
  REQUIRE(rs.pairs.size() == 2);

  WeightedComplex Wt = assemble(
      gen_flat_torus(12, 12, 1.0, 1.0),
      parse_field("0.2*sin(6.283185307179586*x1)", 2), 6);
  DualityReport rt = check_duality(Wt);
  CHECK(rt.pass_next);
  CHECK(rt.max_rel_dual < 0.05);
}

TEST_CASE("adding a constant to the weight leaves spectra unchanged") {
  const ScalarField f = parse_field("0.2*x1", 2);
  WeightedComplex W0 = assemble(gen_circle(64), f, 6);
  WeightedComplex W1 = assemble(gen_circle(64), f + 5.0, 6);
  SpectrumResult a = coexact_spectrum(W0, 0, 4);
  SpectrumResult b = coexact_spectrum(W1, 0, 4);
  CHECK(max_rel_gap(a.eigenvalues, b.eigenvalues) < 1e-10);

  const ScalarField f3 = parse_field("0.3*x2", 2);
  WeightedComplex D0 = assemble(gen_disc(3), f3, 6);
  WeightedComplex D1 = assemble(gen_disc(3), f3 + 3.0, 6);
  SteklovResult sa = steklov_spectrum(D0, 0, 4);
  SteklovResult sb = steklov_spectrum(D1, 0, 4);
  CHECK(max_rel_gap(sa.sigma, sb.sigma) < 1e-10);
}

TEST_CASE("disc boundary-value spectrum counts up by integers") {
  WeightedComplex W = assemble(gen_disc(4), kZero, 4);
  SteklovResult s = steklov_spectrum(W, 0, 6);
  CHECK(max_rel_gap(s.sigma, {0.0, 1.0, 1.0, 2.0, 2.0, 3.0}) < 0.02);
  CHECK(s.harmonic_trace_dim == 1);  // the constant trace
  for (double r : s.residuals) CHECK(r < 1e-8);
  CHECK(s.boundary_mesh == "boundary(disc(4))");

  // dropping the harmonic trace removes the zero
  SteklovResult sp = steklov_spectrum(W, 0, 5, false);
  CHECK(sp.coclosed_dim == s.coclosed_dim - 1);
  CHECK(max_rel_gap(sp.sigma, {1.0, 1.0, 2.0, 2.0, 3.0}) < 0.02);

  // top boundary degree: only the harmonic circle class is co-closed
  SteklovResult st = steklov_spectrum(W, 1, 1);
  CHECK(st.coclosed_dim == 1);
  CHECK(st.harmonic_trace_dim == 1);
  CHECK_THROWS_AS(steklov_spectrum(W, 1, 1, false), EmptyCoclosedSpace);

  WeightedComplex Wc = assemble(gen_circle(16), kZero, 4);
  CHECK_THROWS_AS(steklov_spectrum(Wc, 0, 2), DomainError);
}

TEST_CASE("ball boundary-value spectrum on one-forms") {
  WeightedComplex W = assemble(gen_ball3(2), kZero, 4);
  SteklovResult s = steklov_spectrum(W, 1, 3);
  REQUIRE(s.sigma.size() == 3);
  // first co-closed eigenvalue 2 with multiplicity three
  for (double v : s.sigma) CHECK(std::abs(v - 2.0) < 0.05 * 2.0);
  CHECK(s.harmonic_trace_dim == 0);
}

TEST_CASE("case thm1.2: boundary spectral gap against the curvature product") {
  TheoremConfig cfg;
  cfg.level = 2;
  TheoremCheck tc = check_theorem("thm1.2", cfg);
  CHECK(tc.hypotheses_ok);
  CHECK(tc.pass);
  CHECK(tc.bound == doctest::Approx(2.0));
  CHECK(tc.computed / tc.bound > 0.98);
  CHECK(tc.computed / tc.bound < 1.05);
  bool saw_analytic = false, saw_sampled = false;
  for (const auto& c : tc.constants) {
    if (c.provenance == "analytic") saw_analytic = true;
    if (c.provenance == "sampled") saw_sampled = true;
  }
  CHECK(saw_analytic);
  CHECK(saw_sampled);

  // radial quadratic weight: constant on the boundary sphere, so the computed
  // gap stays at 2 while the bound drops to 2 - a
  cfg.weight = parse_field("0.25*(r2/2)", 3);
  TheoremCheck ta = check_theorem("thm1.2", cfg);
  CHECK(ta.hypotheses_ok);
  CHECK(ta.bound == doctest::Approx(2.0 - 0.25));
  CHECK(ta.margin > 0.25 - 0.05);
  CHECK(ta.pass);

  // a steeply decreasing weight breaks the normal-derivative hypothesis:
  // the check must report the violation, not judge the inequality
  cfg.weight = parse_field("0-3*x1", 3);
  TheoremCheck tv = check_theorem("thm1.2", cfg);
  CHECK_FALSE(tv.hypotheses_ok);
  CHECK(tv.violations.size() == 1);
  CHECK(tv.pass);  // vacuous

  CHECK_THROWS_AS(check_theorem("thm9.9", cfg), DomainError);
}

TEST_CASE("case thm1.3: vanishing cohomology under the spectral hypothesis") {
  TheoremConfig cfg;
  cfg.level = 2;
  cfg.p = 1;
  TheoremCheck tc = check_theorem("thm1.3", cfg);
  CHECK(tc.hypotheses_ok);
  CHECK(tc.pass);
  CHECK(tc.computed == 0.0);  // b_1 of the ball

  // nonconstant positive potential, still within the hypothesis
  cfg.potential = parse_field("1+0.2*x1", 3);
  TheoremCheck tp = check_theorem("thm1.3", cfg);
  CHECK(tp.hypotheses_ok);
  CHECK(tp.pass);

  // the annulus has b_2 = 1; its inner sphere curves the wrong way, so the
  // hypothesis fails and the nonzero Betti number is reported without judgment
  TheoremConfig ann;
  ann.domain = "annulus3";
  ann.level = 1;
  ann.p = 2;
  TheoremCheck ta = check_theorem("thm1.3", ann);
  CHECK_FALSE(ta.hypotheses_ok);
  CHECK(ta.computed == 1.0);
  CHECK(ta.pass);  // vacuous
  CHECK(ta.violations.size() >= 1);
}

TEST_CASE("case thm1.5: first nonzero boundary-value eigenvalue vs (p+1)c") {
  TheoremConfig cfg;
  cfg.level = 2;
  TheoremCheck tc = check_theorem("thm1.5", cfg);
  CHECK(tc.hypotheses_ok);
  CHECK(tc.bound == doctest::Approx(2.0));
  CHECK(tc.computed > 2.0 - 0.05 * 2.0);
  CHECK(tc.pass);

  // annulus inner sphere has negative principal curvature: hypothesis fails
  TheoremConfig ann;
  ann.domain = "annulus3";
  ann.level = 1;
  TheoremCheck ta = check_theorem("thm1.5", ann);
  CHECK_FALSE(ta.hypotheses_ok);
  CHECK(ta.pass);  // vacuous
}

TEST_CASE("case thm1.6: boundary-value vs boundary Hodge eigenvalue ratio") {
  TheoremConfig cfg;
  cfg.level = 2;
  cfg.k = 5;
  cfg.weight = parse_field("0.2*x1", 3);
  TheoremCheck tc = check_theorem("thm1.6", cfg);
  CHECK(tc.hypotheses_ok);
  CHECK(tc.bound == doctest::Approx(1.0 / (1.0 - 0.2)));
  CHECK(tc.pass);
  CHECK(tc.computed < tc.bound);

  // unweighted ball: sigma_1 = lambda_1 = 2 on co-closed one-forms, the
  // sharp configuration of the ratio bound
  TheoremConfig sharp;
  sharp.level = 2;
  sharp.k = 3;
  TheoremCheck ts = check_theorem("thm1.6", sharp);
  CHECK(ts.hypotheses_ok);
  CHECK(ts.bound == doctest::Approx(1.0));
  CHECK(ts.computed == doctest::Approx(1.0).epsilon(0.05));
  CHECK(ts.pass);
}

TEST_CASE("eigenvalue-sum inequality on the unit circle") {
  EmbeddingData E = make_embedding("circle", ScalarField());
  LpConfig cfg;
  cfg.p = 1;
  cfg.j = 1;
  cfg.mesh_n = 128;
  TheoremCheck tc = lp_check(E, cfg);
  CHECK(tc.hypotheses_ok);
  CHECK(tc.pass);
  // the inequality is sharp here: lambda_2 equals the right-hand side
  CHECK(std::abs(tc.computed - tc.bound) < 1e-3);

  EmbeddingData Ew = make_embedding("circle", parse_field("0.2*x1", 2));
  LpConfig c0;
  c0.p = 0;
  for (int j : {1, 2, 3}) {
    c0.j = j;
    TheoremCheck t = lp_check(Ew, c0);
    CHECK(t.hypotheses_ok);
    CHECK(t.margin > 0.0);
    CHECK(t.pass);
  }
}

TEST_CASE("eigenvalue-sum inequality on the minimal flat torus") {
  LpConfig cfg;
  cfg.p = 1;
  cfg.mesh_n = 24;
  for (const char* weight : {"", "0.2*x1"}) {
    EmbeddingData E = make_embedding(
        "clifford", *weight ? parse_field(weight, 4) : ScalarField());
    TheoremCheck tc = lp_check(E, cfg);
    CHECK(tc.hypotheses_ok);
    CHECK(tc.margin > 0.0);
    CHECK(tc.pass);
    for (const auto& c : tc.constants)
      if (c.name == "rewrite_residual") CHECK(c.value < 1e-8);
  }
}

TEST_CASE("embedding constructors guard their closed-form data") {
  CHECK_THROWS_AS(make_embedding("moebius", ScalarField()), UnsupportedEmbedding);
  EmbeddingData s2 = make_embedding("sphere2", ScalarField());
  CHECK_THROWS_AS(s2.weitzenboeck_scale(2), CurvatureUnavailable);
  CHECK(s2.weitzenboeck_scale(1) == doctest::Approx(1.0));
  LpConfig cfg;
  EmbeddingData bad = make_embedding("sphere2", parse_field("x1", 3));
  CHECK_THROWS_AS(lp_check(bad, cfg), UnsupportedEmbedding);
}

TEST_CASE("pointwise trace identities on the model embeddings") {
  for (const char* nm : {"circle", "clifford"}) {
    const int amb = nm[1] == 'i' ? 2 : 4;
    EmbeddingData E = make_embedding(nm, parse_field("0.3*x1", amb));
    PFormField w(E.m, 1);
    for (int s = 0; s < w.ncomp(); ++s)
      w.comp(s) = parse_field(s == 0 ? "sin(x1)+0.5" : "cos(x1)*x2", E.m);
    TraceReport r = trace_identities(E, w, 25, 11);
    CHECK(r.res_laplacian < 1e-9);
    CHECK(r.res_dirsum < 1e-9);
    CHECK(r.res_gradsum < 1e-9);
    CHECK(r.pass);
  }
  EmbeddingData S = make_embedding("sphere2", ScalarField());
  PFormField w(2, 1);
  w.comp(0) = parse_field("sin(x1)*cos(x2)", 2);
  w.comp(1) = parse_field("x1*x1", 2);
  TraceReport r = trace_identities(S, w, 25, 11);
  CHECK(r.pass);
}
