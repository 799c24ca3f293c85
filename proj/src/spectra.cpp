#include "hodgelab/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "hodgelab/chart.hpp"
#include "hodgelab/domain.hpp"
#include "hodgelab/errors.hpp"
#include "hodgelab/mesh.hpp"
#include "hodgelab/multiindex.hpp"
#include "hodgelab/quadrature.hpp"
#include "hodgelab/smooth_ops.hpp"

namespace hodgelab {

namespace {

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

Eigen::MatrixXd dense(const Eigen::SparseMatrix<double>& S) { return Eigen::MatrixXd(S); }

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& A) { return 0.5 * (A + A.transpose()); }

void require_closed(const SimplicialComplex& K, const char* who) {
  for (int i = 0; i < K.count(K.top_dim - 1); ++i)
    if (K.facet_cofaces(i).size() == 1)
      throw DomainError(std::string(who) + ": closed mesh required");
}

std::string weight_text(const WeightedComplex& W) {
  return W.weight.valid() ? W.weight.to_string() : std::string("0");
}

// The exact p-cochains are the column span of the degree-(p-1) coboundary;
// an orthonormal basis doubles as the projector onto the subspace.
Eigen::MatrixXd image_basis(const Eigen::MatrixXd& D) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(D);
  const Eigen::Index r = qr.rank();
  if (r == 0) return Eigen::MatrixXd(D.rows(), 0);
  return Eigen::MatrixXd(qr.householderQ() * Eigen::MatrixXd::Identity(D.rows(), r));
}

// Quadratic form of the full weighted Hodge energy |d.|^2 + |delta_f .|^2 on
// p-cochains. The codifferential block is M_p D M_{p-1}^{-1} D^T M_p, dense
// because of the inverse mass.
Eigen::MatrixXd full_hodge_stiffness(const WeightedComplex& W, int p) {
  const SimplicialComplex& K = W.mesh;
  const int top = K.top_dim;
  if (p < 0 || p > top) throw DegreeError("full_hodge_stiffness: degree out of range");
  const int n = K.count(p);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  if (p < top) {
    const Eigen::SparseMatrix<double> S =
        K.coboundary[p].transpose() * W.mass[p + 1] * K.coboundary[p];
    A += dense(S);
  }
  if (p > 0) {
    const Eigen::MatrixXd U = dense(K.coboundary[p - 1]).transpose() * dense(W.mass[p]);
    Eigen::LLT<Eigen::MatrixXd> llt{Eigen::MatrixXd(dense(W.mass[p - 1]))};
    if (llt.info() != Eigen::Success)
      throw NotSPD("full_hodge_stiffness: mass matrix not positive definite");
    A += U.transpose() * llt.solve(U);
  }
  return symmetrized(A);
}

struct Deflated {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  int dropped = 0;
};

// Remove the zero cluster of a positive-semidefinite pencil. The threshold is
// relative to the largest eigenvalue; the first retained eigenvalue must clear
// the last dropped one by a factor of 10 or the split is ambiguous.
Deflated deflate_zeros(const EigResult& e) {
  const Eigen::Index n = e.values.size();
  if (n == 0) throw GapAmbiguous("deflation: empty pencil");
  const double lmax = e.values[n - 1];
  if (!(lmax > 0.0)) throw GapAmbiguous("deflation: pencil is numerically zero");
  const double eps = 1e-8 * lmax;
  Eigen::Index z = 0;
  while (z < n && e.values[z] < eps) ++z;
  if (z == n) throw GapAmbiguous("deflation: no eigenvalues above the zero threshold");
  if (z > 0) {
    const double floor = std::max(e.values[z - 1], 1e-300);
    if (e.values[z] < 10.0 * floor)
      throw GapAmbiguous("deflation: gap ratio " + std::to_string(e.values[z] / floor) +
                         " below 10 between dropped and kept eigenvalues");
  }
  Deflated d;
  d.values = e.values.tail(n - z);
  d.vectors = e.vectors.rightCols(n - z);
  d.dropped = static_cast<int>(z);
  return d;
}

std::vector<double> to_std(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

// --- hypothesis sampling on flat domains ------------------------------------------

// Matrix of the slot-wise extension of a symmetric (1,1)-tensor to p-forms,
// in the increasing multi-index basis.
Eigen::MatrixXd induced_matrix(const Eigen::MatrixXd& T, int dim, int p) {
  const int nc = binom(dim, p);
  Eigen::MatrixXd Q(nc, nc);
  for (int j = 0; j < nc; ++j) {
    FormValue e(dim, p);
    e.c[j] = 1.0;
    Q.col(j) = induced_op(T, e).c;
  }
  return Q;
}

// Smallest eigenvalue of the weighted Weitzenboeck term on p-forms over the
// sample cloud. On flat domains the curvature part vanishes, leaving the
// induced Hessians of the weight (and of the potential, when present).
double min_weitzenboeck_eigenvalue(const FlatDomain& dom, const ScalarField& f,
                                   const ScalarField* V, int p, unsigned seed, int count) {
  const int dim = dom.dim();
  if (p < 0 || p > dim) throw DegreeError("weitzenboeck sampling: degree out of range");
  double mn = std::numeric_limits<double>::infinity();
  for (const Eigen::VectorXd& x : dom.interior_samples(count, seed)) {
    const Jet2 fj = f.jet(x);
    Eigen::MatrixXd Q = induced_matrix(fj.h, dim, p);
    if (V != nullptr) {
      const Jet2 vj = V->jet(x);
      if (!(vj.v > 0.0)) throw NonpositiveV("potential must be positive on the domain");
      Q += (scalar_laplacian_f(vj, fj) * Eigen::MatrixXd::Identity(Q.rows(), Q.cols()) +
            induced_matrix(vj.h, dim, p)) /
           vj.v;
    }
    if (Q.rows() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrized(Q),
                                                      Eigen::EigenvaluesOnly);
    mn = std::min(mn, es.eigenvalues().minCoeff());
  }
  return std::isfinite(mn) ? mn : 0.0;
}

double inf_normal_derivative(const FlatDomain& dom, const ScalarField& f, int order) {
  const QuadratureRule rule = dom.boundary_rule(order);
  double mn = std::numeric_limits<double>::infinity();
  for (int i = 0; i < rule.size(); ++i) {
    const BoundaryPoint bp = dom.boundary_point(rule.points[i]);
    mn = std::min(mn, f.jet(bp.x).g.dot(bp.normal));
  }
  return mn;
}

double sup_log_normal_derivative(const FlatDomain& dom, const ScalarField& V, int order) {
  const QuadratureRule rule = dom.boundary_rule(order);
  double mx = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < rule.size(); ++i) {
    const BoundaryPoint bp = dom.boundary_point(rule.points[i]);
    const Jet2 vj = V.jet(bp.x);
    if (!(vj.v > 0.0)) throw NonpositiveV("potential must be positive on the boundary");
    mx = std::max(mx, vj.g.dot(bp.normal) / vj.v);
  }
  return mx;
}

double sup_gradient_norm(const FlatDomain& dom, const ScalarField& f, int order,
                         unsigned seed, int count) {
  double mx = 0.0;
  for (const Eigen::VectorXd& x : dom.interior_samples(count, seed))
    mx = std::max(mx, f.jet(x).g.norm());
  const QuadratureRule rule = dom.boundary_rule(order);
  for (int i = 0; i < rule.size(); ++i) mx = std::max(mx, f.jet(rule.points[i]).g.norm());
  return mx;
}

// Analytic boundary data of the supported flat domains. All boundary
// components are round spheres, hence umbilic with a single principal
// curvature per component (with respect to the inner normal of the domain).
struct BoundaryGeometry {
  int n = 2;                // boundary dimension
  std::vector<double> eta;  // per-component principal curvature
  double sigma(int p) const {
    double s = std::numeric_limits<double>::infinity();
    for (double e : eta) s = std::min(s, p * e);
    return s;
  }
  double cmin() const {
    double c = std::numeric_limits<double>::infinity();
    for (double e : eta) c = std::min(c, e);
    return c;
  }
};

struct TheoremSetup {
  BoundaryGeometry geom;
  FlatDomain dom;
  ScalarField f;
  ScalarField V;
};

TheoremSetup theorem_setup(const TheoremConfig& cfg) {
  const ScalarField f = cfg.weight.valid() ? cfg.weight : ScalarField::constant(0.0);
  const ScalarField V = cfg.potential.valid() ? cfg.potential : ScalarField::constant(1.0);
  if (cfg.domain == "ball3")
    return {BoundaryGeometry{2, {1.0}}, FlatDomain::ball(1.0, 3), f, V};
  if (cfg.domain == "annulus3") {
    if (!(cfg.r0 > 0.0) || !(cfg.r1 > cfg.r0))
      throw UnsupportedShape("check_theorem: annulus3 needs 0 < r0 < r1");
    // outer sphere curves toward the inner normal, the inner sphere away
    return {BoundaryGeometry{2, {1.0 / cfg.r1, -1.0 / cfg.r0}},
            FlatDomain::annulus(cfg.r0, cfg.r1, 3), f, V};
  }
  throw UnsupportedShape("check_theorem: domain must be ball3 or annulus3");
}

SimplicialComplex domain_mesh(const TheoremConfig& cfg) {
  if (cfg.domain == "ball3") return gen_ball3(cfg.level);
  return gen_annulus3(cfg.level, cfg.r0, cfg.r1);
}

// The boundary of the unit ball is meshed directly (same geometry as the
// boundary of the volume mesh, without paying for the interior).
SimplicialComplex boundary_mesh(const TheoremConfig& cfg) {
  if (cfg.domain == "ball3") return gen_icosphere(cfg.level);
  BoundaryMap B = boundary_complex(gen_annulus3(cfg.level, cfg.r0, cfg.r1));
  return B.boundary;
}

void push_constant(TheoremCheck& tc, const std::string& name, double value,
                   const char* provenance) {
  tc.constants.push_back({name, value, provenance});
}

void check_hypothesis(TheoremCheck& tc, bool ok, const std::string& text) {
  if (!ok) {
    tc.hypotheses_ok = false;
    tc.violations.push_back(text);
  }
}

void finish_margin(TheoremCheck& tc) {
  if (!tc.hypotheses_ok) {
    // the claim is vacuous; report the numbers without judging them
    tc.pass = true;
    tc.note += (tc.note.empty() ? "" : "; ");
    tc.note += "hypotheses violated: inequality not applicable, values reported only";
    return;
  }
  tc.pass = tc.margin >= -tc.tol_rel * std::abs(tc.bound);
}

constexpr double kHypTol = 1e-10;

// --- embedded model manifolds -------------------------------------------------------

// 2-jet of f(X(u)) from the ambient jet of f and the chart jets of X.
Jet2 pullback_jet(const ChartFrame& fr, const Jet2& fj) {
  const int m = static_cast<int>(fr.jac.cols());
  const int M = static_cast<int>(fr.jac.rows());
  Jet2 out;
  out.v = fj.v;
  out.g = fr.jac.transpose() * fj.g;
  out.h = fr.jac.transpose() * fj.h * fr.jac;
  for (int L = 0; L < M; ++L) out.h += fj.g[L] * fr.xjets[L].h;
  (void)m;
  return out;
}

std::vector<Eigen::VectorXd> chart_samples(const EmbeddingData& E, int count,
                                           unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<Eigen::VectorXd> pts;
  pts.reserve(count);
  for (int i = 0; i < count; ++i) {
    Eigen::VectorXd u(E.m);
    if (!E.periods.empty()) {
      for (int d = 0; d < E.m; ++d) u[d] = uni(rng) * E.periods[d];
    } else {
      // sphere chart: colatitude away from the poles, full azimuth
      u[0] = 0.15 + uni(rng) * (M_PI - 0.3);
      u[1] = uni(rng) * 2.0 * M_PI;
    }
    pts.push_back(u);
  }
  return pts;
}

Eigen::VectorXd embed_point(const EmbeddingData& E, const Eigen::VectorXd& u) {
  Eigen::VectorXd x(E.ambient);
  for (int l = 0; l < E.ambient; ++l) x[l] = E.X[l].value(u);
  return x;
}

// sup of the intrinsic weighted Laplacian of the restricted weight, sampled
// over a chart grid (plus jitter-free corners); 0 for constant weights.
double sup_delta_ff(const EmbeddingData& E) {
  if (!E.weight.valid() || E.weight.is_constant()) return 0.0;
  ChartGeometry geom(E.X, E.m);
  double mx = -std::numeric_limits<double>::infinity();
  auto visit = [&](const Eigen::VectorXd& u) {
    const ChartFrame fr = geom.frame(u);
    const Jet2 fj = E.weight.jet(embed_point(E, u));
    const Jet2 fc = pullback_jet(fr, fj);
    mx = std::max(mx, ChartGeometry::laplacian_f(fr, fc, fc.g));
  };
  if (E.m == 1) {
    const int n = 1024;
    for (int i = 0; i < n; ++i)
      visit(Eigen::VectorXd::Constant(1, E.periods[0] * i / n));
  } else if (!E.periods.empty()) {
    const int n = 64;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Eigen::Vector2d u(E.periods[0] * i / n, E.periods[1] * j / n);
        visit(u);
      }
  } else {
    const int n = 64;
    for (int i = 1; i < n; ++i)
      for (int j = 0; j < 2 * n; ++j) {
        Eigen::Vector2d u(M_PI * i / n, M_PI * j / n);
        visit(u);
      }
  }
  return mx;
}

// max over sample points of | m^2|H|^2 + |grad_M f|^2 - |m H - (ambient grad f)^T|^2 |
double rewrite_identity_residual(const EmbeddingData& E, int npts, unsigned seed) {
  ChartGeometry geom(E.X, E.m);
  double mx = 0.0;
  for (const Eigen::VectorXd& u : chart_samples(E, npts, seed)) {
    const ChartFrame fr = geom.frame(u);
    const Eigen::VectorXd x = embed_point(E, u);
    const Eigen::VectorXd g_amb =
        E.weight.valid() ? Eigen::VectorXd(E.weight.jet(x).g) : Eigen::VectorXd::Zero(E.ambient);
    const Eigen::VectorXd g_chart = fr.jac.transpose() * g_amb;
    const double grad2 = g_chart.dot(fr.g_inv * g_chart);
    const double lhs = E.m * E.m * E.mean_curv2 + grad2;
    const Eigen::VectorXd tangential = fr.jac * (fr.g_inv * g_chart);
    const double rhs = (double(E.m) * E.mean_curvature_vector(x) - tangential).squaredNorm();
    mx = std::max(mx, std::abs(lhs - rhs));
  }
  return mx;
}

// Right-hand side integral of the eigenvalue-sum inequality, cell by cell:
//   int [ (m^2|H|^2 + |grad_M f|^2) |w|^2 - 4 <W_f w, w> ] e^{-f} dv
// with the Whitney interpolant of the eigenform. On chart meshes (torus) the
// weight Hessian is intrinsic already; on the embedded circle the intrinsic
// Hessian comes from the arclength chart at the projected point.
double lp_rhs_integral(const EmbeddingData& E, const WeightedComplex& W,
                       const ScalarField& f_mesh, const Cochain& wj, int p,
                       double wscale, int order, bool chart_mesh) {
  const SimplicialComplex& K = W.mesh;
  const int k = K.top_dim;
  const QuadratureRule rule = quad_ref_simplex(k, std::max(order, 4));
  const bool weighted = E.weight.valid() && !E.weight.is_constant();
  ChartGeometry geom(E.X, E.m);
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(K.count(k)) * rule.size());
  for (int c = 0; c < K.count(k); ++c) {
    const CellFrame fr = cell_frame(K, c);
    const double jac = fr.volume * factorial(k);
    for (int q = 0; q < rule.size(); ++q) {
      Eigen::VectorXd lambda(k + 1);
      lambda[0] = 1.0 - rule.points[q].sum();
      lambda.tail(k) = rule.points[q];
      const Eigen::VectorXd x = fr.ambient * lambda;
      const FormValue wv = whitney_value(K, wj, c, lambda);
      const double w2 = wv.norm2();

      double fval = 0.0, grad2 = 0.0, hess_term = 0.0;
      if (chart_mesh) {
        const Jet2 fc = f_mesh.valid() ? f_mesh.jet(x) : Jet2{};
        if (f_mesh.valid()) {
          fval = fc.v;
          const Eigen::VectorXd gf = fr.tangent.transpose() * fc.g;
          grad2 = gf.squaredNorm();
          const Eigen::MatrixXd hf = fr.tangent.transpose() * fc.h * fr.tangent;
          hess_term = inner(induced_op(hf, wv), wv);
        }
      } else if (weighted) {
        const Jet2 fj = E.weight.jet(x);
        fval = fj.v;
        grad2 = (fr.tangent.transpose() * fj.g).squaredNorm();
        if (E.m == 1 && p == 1) {
          // covariant second derivative along the smooth circle
          Eigen::VectorXd u(1);
          u[0] = E.radius * std::atan2(x[1], x[0]);
          const ChartFrame cf = geom.frame(u);
          const Jet2 fc = pullback_jet(cf, E.weight.jet(embed_point(E, u)));
          const double hcov = fc.h(0, 0) - cf.gamma[0](0, 0) * fc.g[0];
          hess_term = hcov * w2;
        }
      } else if (E.weight.valid()) {
        fval = E.weight.value(Eigen::VectorXd::Zero(E.ambient));
      }

      const double integrand =
          (E.m * E.m * E.mean_curv2 + grad2) * w2 - 4.0 * (wscale * w2 + hess_term);
      terms.push_back(rule.weights[q] * jac * std::exp(-fval) * integrand);
    }
  }
  return pairwise_sum(terms);
}

}  // namespace

double longest_edge(const SimplicialComplex& K) {
  double h = 0.0;
  for (int i = 0; i < K.count(1); ++i) {
    const Eigen::MatrixXd X = K.simplex_coords(1, i);
    h = std::max(h, (X.col(1) - X.col(0)).norm());
  }
  return h;
}

SpectrumResult coexact_spectrum(const WeightedComplex& W, int p, int k) {
  const SimplicialComplex& K = W.mesh;
  require_closed(K, "coexact_spectrum");
  if (p < 0 || p >= K.top_dim)
    throw DegreeError("coexact_spectrum: degree must satisfy 0 <= p < top");
  if (k < 1) throw DomainError("coexact_spectrum: k must be positive");

  const Eigen::SparseMatrix<double> S =
      K.coboundary[p].transpose() * W.mass[p + 1] * K.coboundary[p];
  const Eigen::MatrixXd A = symmetrized(dense(S));
  const Eigen::MatrixXd B = dense(W.mass[p]);
  const Deflated d = deflate_zeros(eig_gen_sym(A, B));

  const int kk = std::min<int>(k, static_cast<int>(d.values.size()));
  SpectrumResult out;
  out.degree = p;
  out.kind = SpectrumKind::coexact;
  out.eigenvalues = to_std(d.values.head(kk));
  out.vectors = d.vectors.leftCols(kk);
  EigResult kept{d.values.head(kk), out.vectors};
  out.residuals = to_std(pencil_residuals(A, B, kept));
  out.mesh = K.name;
  out.weight = weight_text(W);
  out.h = longest_edge(K);
  return out;
}

SpectrumResult exact_spectrum(const WeightedComplex& W, int p, int k) {
  const SimplicialComplex& K = W.mesh;
  require_closed(K, "exact_spectrum");
  if (p < 1 || p > K.top_dim)
    throw DegreeError("exact_spectrum: degree must satisfy 1 <= p <= top");

  // primary route: transport the co-exact pencil one degree down
  SpectrumResult out = coexact_spectrum(W, p - 1, k);
  out.degree = p;
  out.kind = SpectrumKind::exact;
  out.vectors.resize(0, 0);

  // cross-check: the full Hodge pencil restricted to the exact subspace
  const Eigen::MatrixXd E = image_basis(dense(K.coboundary[p - 1]));
  if (E.cols() == 0) throw DegreeError("exact_spectrum: the exact subspace is trivial");
  const Eigen::MatrixXd Ar = symmetrized(E.transpose() * full_hodge_stiffness(W, p) * E);
  const Eigen::MatrixXd Br = symmetrized(E.transpose() * dense(W.mass[p]) * E);
  const EigResult proj = eig_gen_sym(Ar, Br);
  const int kk = std::min<int>(k, static_cast<int>(proj.values.size()));
  out.projected = to_std(proj.values.head(kk));
  return out;
}

SpectrumResult full_spectrum(const WeightedComplex& W, int p, int k) {
  const SimplicialComplex& K = W.mesh;
  require_closed(K, "full_spectrum");
  if (p < 0 || p > K.top_dim)
    throw DegreeError("full_spectrum: degree must satisfy 0 <= p <= top");
  if (k < 1) throw DomainError("full_spectrum: k must be positive");

  const Eigen::MatrixXd A = full_hodge_stiffness(W, p);
  const Eigen::MatrixXd B = dense(W.mass[p]);
  const EigResult e = eig_gen_sym(A, B);
  const int kk = std::min<int>(k, static_cast<int>(e.values.size()));

  SpectrumResult out;
  out.degree = p;
  out.kind = SpectrumKind::full;
  out.eigenvalues = to_std(e.values.head(kk));
  out.vectors = e.vectors.leftCols(kk);
  EigResult kept{e.values.head(kk), out.vectors};
  out.residuals = to_std(pencil_residuals(A, B, kept));
  out.mesh = K.name;
  out.weight = weight_text(W);
  out.h = longest_edge(K);
  return out;
}

DualityReport check_duality(const WeightedComplex& W, double tol_rel) {
  const SimplicialComplex& K = W.mesh;
  require_closed(K, "check_duality");
  const int n = K.top_dim;

  // independent exact-side minima for every degree 1..n
  std::vector<double> exact_min(n + 1, 0.0);
  for (int q = 1; q <= n; ++q) {
    const Eigen::MatrixXd E = image_basis(dense(K.coboundary[q - 1]));
    if (E.cols() == 0) throw DegreeError("check_duality: trivial exact subspace");
    const Eigen::MatrixXd Ar = symmetrized(E.transpose() * full_hodge_stiffness(W, q) * E);
    const Eigen::MatrixXd Br = symmetrized(E.transpose() * dense(W.mass[q]) * E);
    exact_min[q] = eig_gen_sym(Ar, Br).values[0];
  }

  DualityReport rep;
  rep.tol_rel = tol_rel;
  rep.mesh = K.name;
  rep.weight = weight_text(W);
  for (int p = 0; p < n; ++p) {
    DualityPair pr;
    pr.p = p;
    pr.coexact = coexact_spectrum(W, p, 1).eigenvalues[0];
    pr.exact_next = exact_min[p + 1];
    pr.exact_dual = exact_min[n - p];
    const double scale = std::max(std::abs(pr.coexact), 1e-300);
    pr.rel_next = std::abs(pr.coexact - pr.exact_next) / scale;
    pr.rel_dual = std::abs(pr.coexact - pr.exact_dual) / scale;
    rep.max_rel_next = std::max(rep.max_rel_next, pr.rel_next);
    rep.max_rel_dual = std::max(rep.max_rel_dual, pr.rel_dual);
    rep.pairs.push_back(pr);
  }
  rep.pass_next = rep.max_rel_next <= tol_rel;
  rep.pass_dual = rep.max_rel_dual <= tol_rel;
  return rep;
}

namespace {

// Basis of the discretely co-closed boundary trace space: the kernel of the
// boundary weighted codifferential (which contains the boundary-harmonic
// cochains), or the pure co-exact image when harmonics are excluded.
Eigen::MatrixXd coclosed_basis(const WeightedComplex& Wb, int p, bool include_harmonics,
                               int* harmonic_dim_out) {
  const SimplicialComplex& Kb = Wb.mesh;
  const int btop = Kb.top_dim;
  const int nb = Kb.count(p);
  int coexact_dim = 0;
  if (p < btop) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(dense(Kb.coboundary[p]));
    coexact_dim = static_cast<int>(qr.rank());
  }

  Eigen::MatrixXd C;
  if (include_harmonics) {
    if (p == 0) {
      C = Eigen::MatrixXd::Identity(nb, nb);
    } else {
      const Eigen::MatrixXd T =
          dense(Kb.coboundary[p - 1]).transpose() * dense(Wb.mass[p]);
      Eigen::FullPivLU<Eigen::MatrixXd> lu(T);
      C = lu.kernel();
      if (C.cols() == 1 && C.col(0).isZero()) C.resize(nb, 0);  // kernel() quirk for full rank
    }
  } else {
    if (p >= btop)
      throw EmptyCoclosedSpace("no co-exact boundary forms in the top degree");
    const Eigen::MatrixXd U =
        dense(Kb.coboundary[p]).transpose() * dense(Wb.mass[p + 1]);
    Eigen::LLT<Eigen::MatrixXd> llt{Eigen::MatrixXd(dense(Wb.mass[p]))};
    if (llt.info() != Eigen::Success) throw NotSPD("boundary mass not positive definite");
    C = image_basis(llt.solve(U));
  }
  if (C.cols() == 0) throw EmptyCoclosedSpace("co-closed trace space is empty");
  if (harmonic_dim_out != nullptr)
    *harmonic_dim_out = include_harmonics ? static_cast<int>(C.cols()) - coexact_dim : 0;
  return C;
}

// Multi-column solve of the interior stiffness block. For functions the block
// is positive definite and a sparse factorization applies directly. For higher
// degrees it is PSD with a kernel of interior exact cochains; the right-hand
// side is always in its range, so any least-squares solution yields the same
// Schur complement (dense orthogonal decomposition on moderate sizes, a tiny
// diagonal shift otherwise — the shift only perturbs along near-kernel
// directions that the Schur product kills).
Eigen::MatrixXd interior_solve(const Eigen::SparseMatrix<double>& Aii,
                               const Eigen::MatrixXd& Aib, bool definite) {
  const Eigen::Index ni = Aii.rows();
  if (ni == 0) return Eigen::MatrixXd(0, Aib.cols());
  if (definite) {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(Aii);
    if (ldlt.info() != Eigen::Success)
      throw SolveFailure("steklov_spectrum: interior factorization failed");
    return ldlt.solve(Aib);
  }
  if (ni <= 4000) {
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod{Eigen::MatrixXd(dense(Aii))};
    return cod.solve(Aib);
  }
  Eigen::VectorXd diag = Aii.diagonal();
  const double eps = 1e-10 * diag.sum() / static_cast<double>(ni);
  Eigen::SparseMatrix<double> shifted = Aii;
  for (Eigen::Index i = 0; i < ni; ++i) shifted.coeffRef(i, i) += std::max(eps, 1e-300);
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(shifted);
  if (ldlt.info() != Eigen::Success)
    throw SolveFailure("steklov_spectrum: interior factorization failed");
  return ldlt.solve(Aib);
}

}  // namespace

SteklovResult steklov_spectrum(const WeightedComplex& W, int p, int k,
                               bool include_boundary_harmonics) {
  const SimplicialComplex& K = W.mesh;
  const int top = K.top_dim;
  if (p < 0 || p > top - 1)
    throw DegreeError("steklov_spectrum: degree must satisfy 0 <= p <= top-1");
  if (k < 1) throw DomainError("steklov_spectrum: k must be positive");

  BoundaryMap B = boundary_complex(K);
  if (B.closed) throw DomainError("steklov_spectrum: mesh has no boundary");
  WeightedComplex Wb = assemble(B.boundary, W.weight, W.quad_order);

  const int np = K.count(p);
  const int nb = B.boundary.count(p);
  if (nb == 0) throw EmptyCoclosedSpace("no boundary simplices of the requested degree");

  // trace block ordered by boundary simplex index so it aligns with the
  // boundary mass and coboundary matrices
  std::vector<int> trace_of(np, -1), interior_of(np, -1);
  for (int i = 0; i < nb; ++i) trace_of[B.inclusion[p][i]] = i;
  int ni = 0;
  for (int s = 0; s < np; ++s)
    if (trace_of[s] < 0) interior_of[s] = ni++;

  const Eigen::SparseMatrix<double> A = stiffness(W, p);
  Eigen::MatrixXd Abb = Eigen::MatrixXd::Zero(nb, nb);
  Eigen::MatrixXd Aib = Eigen::MatrixXd::Zero(ni, nb);
  std::vector<Eigen::Triplet<double>> tii;
  for (int col = 0; col < A.outerSize(); ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, col); it; ++it) {
      const int r = static_cast<int>(it.row()), c = static_cast<int>(it.col());
      const int rb = trace_of[r], cb = trace_of[c];
      if (rb >= 0 && cb >= 0)
        Abb(rb, cb) += it.value();
      else if (rb < 0 && cb >= 0)
        Aib(interior_of[r], cb) += it.value();
      else if (rb < 0 && cb < 0)
        tii.emplace_back(interior_of[r], interior_of[c], it.value());
    }
  Eigen::SparseMatrix<double> Aii(ni, ni);
  Aii.setFromTriplets(tii.begin(), tii.end());

  const Eigen::MatrixXd X = interior_solve(Aii, Aib, p == 0);
  const Eigen::MatrixXd S = symmetrized(Abb - Aib.transpose() * X);

  int harmonic_dim = 0;
  const Eigen::MatrixXd C =
      coclosed_basis(Wb, p, include_boundary_harmonics, &harmonic_dim);
  const Eigen::MatrixXd Sr = symmetrized(C.transpose() * S * C);
  const Eigen::MatrixXd Mr = symmetrized(C.transpose() * dense(Wb.mass[p]) * C);
  const EigResult e = eig_gen_sym(Sr, Mr);

  const int kk = std::min<int>(k, static_cast<int>(e.values.size()));
  SteklovResult out;
  out.degree = p;
  out.sigma = to_std(e.values.head(kk));
  EigResult kept{e.values.head(kk), e.vectors.leftCols(kk)};
  out.residuals = to_std(pencil_residuals(Sr, Mr, kept));
  out.boundary_mesh = B.boundary.name;
  out.weight = weight_text(W);
  out.h = longest_edge(B.boundary);
  out.coclosed_dim = static_cast<int>(C.cols());
  out.harmonic_trace_dim = harmonic_dim;
  out.include_boundary_harmonics = include_boundary_harmonics;
  out.traces = C * e.vectors.leftCols(kk);
  return out;
}

namespace {

TheoremCheck thm_exact_lower_bound(const TheoremConfig& cfg) {
  TheoremSetup st = theorem_setup(cfg);
  const int n = st.geom.n;
  if (cfg.p < 1 || cfg.p > n)
    throw DegreeError("thm1.2: degree must satisfy 1 <= p <= boundary dim");

  TheoremCheck tc;
  tc.theorem_id = "thm1.2";
  tc.tol_rel = cfg.tol_rel;

  const double sig_p = st.geom.sigma(cfg.p);
  const double sig_q = st.geom.sigma(n - cfg.p + 1);
  const double fN = inf_normal_derivative(st.dom, st.f, cfg.quad_order);
  const double wmin =
      min_weitzenboeck_eigenvalue(st.dom, st.f, nullptr, cfg.p, cfg.seed, 64);
  push_constant(tc, "sigma_p", sig_p, "analytic");
  push_constant(tc, "sigma_{n-p+1}", sig_q, "analytic");
  push_constant(tc, "inf_f_N", fN, "sampled");
  push_constant(tc, "min_weitzenboeck_p", wmin, "sampled");

  check_hypothesis(tc, wmin >= -kHypTol,
                   "weighted curvature term on p-forms is not nonnegative");
  check_hypothesis(tc, sig_p > 0.0, "sigma_p(boundary) is not positive");
  check_hypothesis(tc, sig_q + fN > 0.0, "sigma_{n-p+1} + inf f_N is not positive");

  const SimplicialComplex bm = boundary_mesh(cfg);
  WeightedComplex Wb = assemble(bm, st.f, cfg.quad_order);
  // first exact eigenvalue via the co-exact transport one degree down
  tc.computed = coexact_spectrum(Wb, cfg.p - 1, 1).eigenvalues[0];
  tc.bound = sig_p * (sig_q + fN);
  tc.margin = tc.computed - tc.bound;
  tc.note = "exact boundary spectrum vs curvature product on " + bm.name;
  finish_margin(tc);
  return tc;
}

TheoremCheck thm_cohomology_vanishing(const TheoremConfig& cfg) {
  TheoremSetup st = theorem_setup(cfg);
  if (cfg.p < 0 || cfg.p > 3) throw DegreeError("thm1.3: degree out of range");

  TheoremCheck tc;
  tc.theorem_id = "thm1.3";
  tc.tol_rel = 0.0;

  const double sig_p = st.geom.sigma(cfg.p);
  const double lnVN = sup_log_normal_derivative(st.dom, st.V, cfg.quad_order);
  const double wmin =
      min_weitzenboeck_eigenvalue(st.dom, st.f, &st.V, cfg.p, cfg.seed, 64);
  push_constant(tc, "sigma_p", sig_p, "analytic");
  push_constant(tc, "sup_(lnV)_N", lnVN, "sampled");
  push_constant(tc, "min_weitzenboeck_pV", wmin, "sampled");

  check_hypothesis(tc, wmin >= -kHypTol,
                   "weighted curvature term on p-forms is not nonnegative");
  check_hypothesis(tc, sig_p > lnVN, "sigma_p does not strictly dominate sup (lnV)_N");

  const SimplicialComplex K = domain_mesh(cfg);
  const std::vector<int> b = betti(K);
  tc.computed = static_cast<double>(b[cfg.p]);
  tc.bound = 0.0;
  tc.margin = -tc.computed;  // nonnegative iff the cohomology vanishes
  tc.note = "b_" + std::to_string(cfg.p) + " of " + K.name;
  finish_margin(tc);
  return tc;
}

TheoremCheck thm_steklov_lower_bound(const TheoremConfig& cfg) {
  TheoremSetup st = theorem_setup(cfg);
  const int n = st.geom.n;
  if (cfg.p < 1 || cfg.p > n)
    throw DegreeError("thm1.5: degree must satisfy 1 <= p <= boundary dim");

  TheoremCheck tc;
  tc.theorem_id = "thm1.5";
  tc.tol_rel = cfg.tol_rel;

  const double c = st.geom.cmin();
  const double fN = inf_normal_derivative(st.dom, st.f, cfg.quad_order);
  const double wmin =
      min_weitzenboeck_eigenvalue(st.dom, st.f, nullptr, cfg.p + 1, cfg.seed, 64);
  push_constant(tc, "c", c, "analytic");
  push_constant(tc, "inf_f_N", fN, "sampled");
  push_constant(tc, "min_weitzenboeck_p+1", wmin, "sampled");
  push_constant(tc, "sectional", 0.0, "analytic");

  check_hypothesis(tc, c > 0.0, "principal curvatures are not bounded below by c > 0");
  check_hypothesis(tc, wmin >= -kHypTol,
                   "weighted curvature term on (p+1)-forms is not nonnegative");

  const SimplicialComplex K = domain_mesh(cfg);
  WeightedComplex W = assemble(K, st.f, cfg.quad_order);
  SteklovResult stk =
      steklov_spectrum(W, cfg.p, std::max(cfg.k, 1), cfg.include_boundary_harmonics);
  // first nonzero Steklov eigenvalue (harmonic traces contribute zeros)
  double sigma1 = 0.0;
  const double smax = stk.sigma.empty() ? 0.0 : std::abs(stk.sigma.back());
  for (double s : stk.sigma)
    if (s > 1e-8 * std::max(smax, 1.0)) {
      sigma1 = s;
      break;
    }
  tc.computed = sigma1;
  tc.bound = (cfg.p + 1) * c;
  tc.margin = tc.computed - tc.bound;
  tc.note = "first nonzero Steklov eigenvalue on co-closed traces of " + stk.boundary_mesh;
  finish_margin(tc);
  return tc;
}

TheoremCheck thm_steklov_upper_bound(const TheoremConfig& cfg) {
  TheoremSetup st = theorem_setup(cfg);
  const int n = st.geom.n;
  if (cfg.p < 1 || cfg.p > n - 1)
    throw DegreeError("thm1.6: degree must satisfy 1 <= p <= boundary dim - 1");

  TheoremCheck tc;
  tc.theorem_id = "thm1.6";
  tc.tol_rel = cfg.tol_rel;

  const double c = st.geom.cmin();
  const double supg = sup_gradient_norm(st.dom, st.f, cfg.quad_order, cfg.seed, 64);
  const double denom = (n - cfg.p) * c - supg;
  const double wmin =
      min_weitzenboeck_eigenvalue(st.dom, st.f, nullptr, cfg.p + 1, cfg.seed, 64);
  push_constant(tc, "c", c, "analytic");
  push_constant(tc, "sup_grad_f", supg, "sampled");
  push_constant(tc, "(n-p)c - sup_grad_f", denom, "sampled");
  push_constant(tc, "min_weitzenboeck_p+1", wmin, "sampled");

  check_hypothesis(tc, c > 0.0, "principal curvatures are not bounded below by c > 0");
  check_hypothesis(tc, denom > 0.0, "(n-p)c - sup|grad f| is not positive");
  check_hypothesis(tc, wmin >= -kHypTol,
                   "weighted curvature term on (p+1)-forms is not nonnegative");

  const SimplicialComplex K = domain_mesh(cfg);
  WeightedComplex W = assemble(K, st.f, cfg.quad_order);
  SteklovResult stk =
      steklov_spectrum(W, cfg.p, cfg.k, cfg.include_boundary_harmonics);

  // boundary Hodge eigenvalues restricted to the same co-closed trace space
  WeightedComplex Wb = assemble(boundary_mesh(cfg), st.f, cfg.quad_order);
  const Eigen::MatrixXd C =
      coclosed_basis(Wb, cfg.p, cfg.include_boundary_harmonics, nullptr);
  const Eigen::MatrixXd Ar =
      symmetrized(C.transpose() * full_hodge_stiffness(Wb, cfg.p) * C);
  const Eigen::MatrixXd Br = symmetrized(C.transpose() * dense(Wb.mass[cfg.p]) * C);
  const EigResult lam = eig_gen_sym(Ar, Br);

  const int kk = std::min<int>({cfg.k, static_cast<int>(stk.sigma.size()),
                                static_cast<int>(lam.values.size())});
  double worst_ratio = 0.0;
  std::ostringstream pairs;
  const double lscale = std::max(std::abs(lam.values[lam.values.size() - 1]), 1.0);
  int used = 0;
  for (int i = 0; i < kk; ++i) {
    if (lam.values[i] < 1e-10 * lscale) continue;  // matched harmonic zeros
    worst_ratio = std::max(worst_ratio, stk.sigma[i] / lam.values[i]);
    pairs << (used++ ? "; " : "") << "sigma_" << (i + 1) << "=" << stk.sigma[i]
          << " lambda_" << (i + 1) << "=" << lam.values[i];
  }
  if (used == 0) throw SolveFailure("thm1.6: no comparable eigenvalue pairs");
  tc.computed = worst_ratio;
  tc.bound = 1.0 / denom;
  tc.margin = tc.bound - tc.computed;
  tc.note = "max sigma_k / lambda_k over k <= " + std::to_string(kk) + " (" +
            pairs.str() + ")";
  finish_margin(tc);
  return tc;
}

}  // namespace

TheoremCheck check_theorem(const std::string& case_id, const TheoremConfig& cfg) {
  if (case_id == "thm1.2") return thm_exact_lower_bound(cfg);
  if (case_id == "thm1.3") return thm_cohomology_vanishing(cfg);
  if (case_id == "thm1.5") return thm_steklov_lower_bound(cfg);
  if (case_id == "thm1.6") return thm_steklov_upper_bound(cfg);
  throw DomainError("check_theorem: unknown case '" + case_id +
                    "' (expected thm1.2, thm1.3, thm1.5 or thm1.6)");
}

double EmbeddingData::weitzenboeck_scale(int p) const {
  if (p < 0 || p > m) throw DegreeError("weitzenboeck_scale: degree out of range");
  if (name == "circle" || name == "clifford") return 0.0;  // flat intrinsic metric
  if (name == "sphere2") {
    if (p == 0) return 0.0;
    if (p == 1) return 1.0 / (radius * radius);  // Ricci acts as 1/R^2 on 1-forms
    throw CurvatureUnavailable("sphere2 curvature term is closed-form for p in {0,1} only");
  }
  throw UnsupportedEmbedding("unknown embedding '" + name + "'");
}

Eigen::VectorXd EmbeddingData::mean_curvature_vector(const Eigen::VectorXd& x) const {
  if (name == "circle" || name == "sphere2") return -x / (radius * radius);
  if (name == "clifford") return -x;  // factor radius 1/sqrt(2): -x / (2 r^2)
  throw UnsupportedEmbedding("unknown embedding '" + name + "'");
}

EmbeddingData make_embedding(const std::string& name, const ScalarField& ambient_weight,
                             double radius) {
  if (!(radius > 0.0)) throw UnsupportedEmbedding("embedding radius must be positive");
  EmbeddingData E;
  E.name = name;
  E.radius = radius;
  const ScalarField u1 = ScalarField::coordinate(0);
  const ScalarField u2 = ScalarField::coordinate(1);
  if (name == "circle") {
    E.m = 1;
    E.ambient = 2;
    E.X = {radius * cos(u1 / radius), radius * sin(u1 / radius)};
    E.periods = {2.0 * M_PI * radius};
    E.mean_curv2 = 1.0 / (radius * radius);
  } else if (name == "clifford") {
    const double r = 1.0 / std::sqrt(2.0);
    E.m = 2;
    E.ambient = 4;
    E.radius = r;
    E.X = {r * cos(u1 / r), r * sin(u1 / r), r * cos(u2 / r), r * sin(u2 / r)};
    E.periods = {2.0 * M_PI * r, 2.0 * M_PI * r};
    E.mean_curv2 = 1.0;  // |H|^2 = 1/(2 r^2) with r^2 = 1/2
  } else if (name == "sphere2") {
    E.m = 2;
    E.ambient = 3;
    E.X = {radius * sin(u1) * cos(u2), radius * sin(u1) * sin(u2), radius * cos(u1)};
    E.mean_curv2 = 1.0 / (radius * radius);
  } else {
    throw UnsupportedEmbedding("unknown embedding '" + name +
                               "' (expected circle, clifford or sphere2)");
  }
  if (ambient_weight.valid()) {
    if (ambient_weight.max_coordinate() >= E.ambient)
      throw DomainError("embedding weight uses coordinates beyond the ambient dimension");
    E.weight = ambient_weight;
  } else {
    E.weight = ScalarField::constant(0.0);
  }
  return E;
}

TheoremCheck lp_check(const EmbeddingData& E, const LpConfig& cfg) {
  const int m = E.m;
  const int kt = cfg.k_terms > 0 ? cfg.k_terms : m;
  if (kt > m) throw DomainError("lp_check: at most m eigenvalues are summed");
  if (cfg.j < 1) throw DomainError("lp_check: j is 1-based");
  if (cfg.p < 0 || cfg.p > m) throw DegreeError("lp_check: degree out of range");
  const double wscale = E.weitzenboeck_scale(cfg.p);

  SimplicialComplex K;
  ScalarField f_mesh;
  bool chart_mesh = false;
  if (E.name == "circle") {
    K = gen_circle(std::max(cfg.mesh_n, 3));
    if (E.radius != 1.0) {
      K.vertices *= E.radius;
      for (auto& L : K.cell_lift) L *= E.radius;
      K.name += "*R";
    }
    f_mesh = E.weight;
  } else if (E.name == "clifford") {
    const int nseg = std::max(cfg.mesh_n, 3);
    K = gen_flat_torus(nseg, nseg, E.periods[0], E.periods[1]);
    f_mesh = E.weight.subst(E.X);  // restrict the ambient weight to the chart
    chart_mesh = true;
  } else if (E.name == "sphere2") {
    if (!E.weight.is_constant())
      throw UnsupportedEmbedding(
          "sphere2 eigenvalue-sum check supports constant weights only");
    K = gen_icosphere(std::max(cfg.mesh_n, 0));
    if (E.radius != 1.0) {
      K.vertices *= E.radius;
      K.name += "*R";
    }
    f_mesh = E.weight;
  } else {
    throw UnsupportedEmbedding("unknown embedding '" + E.name + "'");
  }

  WeightedComplex W = assemble(K, f_mesh, cfg.quad_order);
  SpectrumResult sp = full_spectrum(W, cfg.p, cfg.j + kt);
  if (static_cast<int>(sp.eigenvalues.size()) < cfg.j + kt)
    throw SolveFailure("lp_check: pencil too small for the requested indices");
  const double lam_j = sp.eigenvalues[cfg.j - 1];
  double lam_sum = 0.0;
  for (int l = 1; l <= kt; ++l) lam_sum += sp.eigenvalues[cfg.j - 1 + l];

  Cochain wj{cfg.p, sp.vectors.col(cfg.j - 1)};
  const double sup_dff = sup_delta_ff(E);
  const double integral =
      lp_rhs_integral(E, W, f_mesh, wj, cfg.p, wscale, cfg.quad_order, chart_mesh);
  const double rewrite = rewrite_identity_residual(E, cfg.sample_points, cfg.seed);

  TheoremCheck tc;
  tc.theorem_id = "lp";
  tc.tol_rel = cfg.tol_rel;
  push_constant(tc, "m", m, "analytic");
  push_constant(tc, "|H|^2", E.mean_curv2, "analytic");
  push_constant(tc, "weitzenboeck_scale", wscale, "analytic");
  push_constant(tc, "lambda_j", lam_j, "sampled");
  push_constant(tc, "sup_Delta_f_f", sup_dff, "sampled");
  push_constant(tc, "rhs_integral", integral, "sampled");
  push_constant(tc, "rewrite_residual", rewrite, "sampled");
  check_hypothesis(tc, rewrite < 1e-8, "mean-curvature rewrite identity fails at samples");

  tc.computed = lam_sum;
  tc.bound = (m + 4) * lam_j + 2.0 * sup_dff + integral;
  tc.margin = tc.bound - tc.computed;
  tc.note = "sum of " + std::to_string(kt) + " eigenvalues after index " +
            std::to_string(cfg.j) + " on " + K.name + " (degree " +
            std::to_string(cfg.p) + ")";
  finish_margin(tc);
  return tc;
}

TraceReport trace_identities(const EmbeddingData& E, const PFormField& omega,
                             int npoints, unsigned seed, double tol) {
  if (omega.dim() != E.m)
    throw DomainError("trace_identities: form dimension must match the chart");
  ChartGeometry geom(E.X, E.m);
  TraceReport rep;
  rep.tol = tol;
  rep.points = npoints;
  for (const Eigen::VectorXd& u : chart_samples(E, npoints, seed)) {
    const ChartFrame fr = geom.frame(u);
    const Eigen::VectorXd x = embed_point(E, u);
    const Jet2 fj = E.weight.jet(x);
    const Eigen::VectorXd fgrad = fr.jac.transpose() * fj.g;

    // sum_l (Delta_f X_l)^2 = m^2 |H|^2 + |grad_M f|^2
    double lap2 = 0.0;
    for (int l = 0; l < E.ambient; ++l) {
      const double d = ChartGeometry::laplacian_f(fr, fr.xjets[l], fgrad);
      lap2 += d * d;
    }
    const double grad2 = fgrad.dot(fr.g_inv * fgrad);
    rep.res_laplacian =
        std::max(rep.res_laplacian,
                 std::abs(lap2 - (E.m * E.m * E.mean_curv2 + grad2)));

    // sum_l |nabla_{grad X_l} w|^2 = |nabla w|^2
    const FormJet1 wj = omega.jet1(u);
    double dirsum = 0.0;
    for (int l = 0; l < E.ambient; ++l) {
      const Eigen::VectorXd v = fr.g_inv * fr.jac.row(l).transpose();
      const FormValue dv = ChartGeometry::cov_dir_deriv(fr, wj, v);
      dirsum += chart_inner(fr.g_inv, dv, dv);
    }
    rep.res_dirsum =
        std::max(rep.res_dirsum, std::abs(dirsum - ChartGeometry::nabla_norm2(fr, wj)));

    // sum_l |grad X_l|^2 = m
    double gsum = 0.0;
    for (int l = 0; l < E.ambient; ++l) {
      const Eigen::VectorXd row = fr.jac.row(l).transpose();
      gsum += row.dot(fr.g_inv * row);
    }
    rep.res_gradsum = std::max(rep.res_gradsum, std::abs(gsum - E.m));
  }
  rep.pass = rep.res_laplacian < tol && rep.res_dirsum < tol && rep.res_gradsum < tol;
  return rep;
}

}  // namespace hodgelab
