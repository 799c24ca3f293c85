#include "hodgelab/identity_lab.hpp"

#include <cmath>

#include "hodgelab/errors.hpp"
#include "hodgelab/multiindex.hpp"

namespace hodgelab {

double rel_residual(double lhs, double rhs) {
  return std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

double rel_residual(const FormValue& lhs, const FormValue& rhs) {
  const double nl = std::sqrt(lhs.norm2());
  const double nr = std::sqrt(rhs.norm2());
  const double nd = std::sqrt((lhs - rhs).norm2());
  return nd / std::max({1.0, nl, nr});
}

namespace {

IdentityReport make_report(std::string name, std::string domain, int degree, double lhs,
                           double rhs, double res) {
  IdentityReport r;
  r.name = std::move(name);
  r.domain = std::move(domain);
  r.degree = degree;
  r.lhs = lhs;
  r.rhs = rhs;
  r.rel_residual = res;
  return r;
}

std::string pointwise_descr(int dim) { return "R^" + std::to_string(dim) + " pointwise"; }

FormValue zero_form(int dim, int degree) { return FormValue(dim, degree); }

} // namespace

// --- pointwise checks -----------------------------------------------------------

IdentityReport check_bochner(const PFormField& w, const ScalarField& f,
                             const Eigen::VectorXd& x) {
  const Jet2 fj = f.jet(x);
  const FormJet2 wj = w.jet2(x);
  const FormValue lhs = hodge_laplacian_f(wj, fj);
  const FormValue rhs = rough_laplacian_f(wj, fj) + induced_op(fj.h, w.value(x));
  const double res = rel_residual(lhs, rhs);
  return make_report("bochner", pointwise_descr(w.dim()), w.degree(),
                     std::sqrt(lhs.norm2()), std::sqrt(rhs.norm2()), res);
}

IdentityReport check_scalar_bochner(const PFormField& w, const ScalarField& f,
                                    const Eigen::VectorXd& x) {
  const Jet2 fj = f.jet(x);
  const FormJet2 wj = w.jet2(x);
  const FormValue wv = wj.value();
  const double lhs = 0.5 * scalar_laplacian_f(norm2_jet(wj), fj);
  const double rhs = inner(hodge_laplacian_f(wj, fj), wv) -
                     inner(induced_op(fj.h, wv), wv) - nabla_norm2(wj.jet1());
  return make_report("scalar_bochner", pointwise_descr(w.dim()), w.degree(), lhs, rhs,
                     rel_residual(lhs, rhs));
}

IdentityReport check_cartan(const PFormField& w, const ScalarField& f,
                            const Eigen::VectorXd& x) {
  const int p = w.degree();
  const int dim = w.dim();
  const Jet2 fj = f.jet(x);
  const FormJet2 wj = w.jet2(x);
  FormValue lhs = zero_form(dim, p);
  if (p > 0) lhs = lhs + ext_d(contract_jet(fj.g, fj.h, wj));
  if (p < dim) lhs = lhs + contract(fj.g, ext_d_jet(wj).value());
  const FormValue rhs = dir_deriv(fj.g, wj.jet1()) + induced_op(fj.h, wj.value());
  return make_report("cartan", pointwise_descr(dim), p, std::sqrt(lhs.norm2()),
                     std::sqrt(rhs.norm2()), rel_residual(lhs, rhs));
}

IdentityReport check_contraction(const PFormField& w, const VectorField& F,
                                 const Eigen::VectorXd& x) {
  const int p = w.degree();
  const int dim = w.dim();
  if (p < 1) throw DegreeError("contraction identity needs degree >= 1");
  Eigen::VectorXd Fval;
  Eigen::MatrixXd Fder;
  F.jet1(x, Fval, Fder);
  const FormJet2 wj = w.jet2(x);
  const FormValue lhs = ext_d(contract_jet(Fval, Fder, wj));
  FormValue rhs = dir_deriv(Fval, wj.jet1()) + induced_op(Fder, wj.value());
  if (p < dim) rhs = rhs - contract(Fval, ext_d_jet(wj).value());
  return make_report("contraction_derivative", pointwise_descr(dim), p, std::sqrt(lhs.norm2()),
                     std::sqrt(rhs.norm2()), rel_residual(lhs, rhs));
}

std::vector<IdentityReport> check_wedge(const PFormField& w, const ScalarField& V,
                                        const ScalarField& f, const Eigen::VectorXd& x) {
  const int p = w.degree();
  const int dim = w.dim();
  if (p >= dim) throw DegreeError("wedge identities need degree <= dim-1");
  const Jet2 fj = f.jet(x);
  const Jet2 vj = V.jet(x);
  const FormJet2 wj = w.jet2(x);
  const FormValue wv = wj.value();
  std::vector<IdentityReport> out;

  // i_{grad f}(dV ^ w) = <grad V, grad f> w - dV ^ i_{grad f} w
  {
    const FormValue lhs = contract(fj.g, wedge1(vj.g, wv));
    FormValue rhs = wv * vj.g.dot(fj.g);
    if (p > 0) rhs = rhs - wedge1(vj.g, contract(fj.g, wv));
    out.push_back(make_report("wedge_contraction", pointwise_descr(dim), p,
                              std::sqrt(lhs.norm2()), std::sqrt(rhs.norm2()),
                              rel_residual(lhs, rhs)));
  }

  // delta_f(dV ^ w) = (Lap_f V) w - nabla_{grad V} w + (hess V)^{[p]} w - dV ^ delta_f w
  {
    const FormValue lhs = codiff_f(wedge1_jet(vj.g, vj.h, wj), fj);
    FormValue rhs = wv * scalar_laplacian_f(vj, fj) - dir_deriv(vj.g, wj.jet1()) +
                    induced_op(vj.h, wv);
    if (p > 0) rhs = rhs - wedge1(vj.g, codiff_f_jet(wj, fj).value());
    out.push_back(make_report("wedge_codifferential", pointwise_descr(dim), p,
                              std::sqrt(lhs.norm2()), std::sqrt(rhs.norm2()),
                              rel_residual(lhs, rhs)));
  }
  return out;
}

IdentityReport check_commutator(const PFormField& w, const ScalarField& G,
                                const ScalarField& f, const Eigen::VectorXd& x) {
  const int dim = w.dim();
  const Jet2 fj = f.jet(x);
  const Jet2 gj = G.jet(x);
  const FormJet2 wj = w.jet2(x);

  FormJet2 gw = wj;
  for (auto& c : gw.comps) c = gj * c;

  const FormValue lhs = hodge_laplacian_f(gw, fj) - hodge_laplacian_f(wj, fj) * gj.v;
  const FormValue rhs =
      wj.value() * scalar_laplacian_f(gj, fj) - dir_deriv(gj.g, wj.jet1()) * 2.0;
  return make_report("laplacian_commutator", pointwise_descr(dim), w.degree(),
                     std::sqrt(lhs.norm2()), std::sqrt(rhs.norm2()), rel_residual(lhs, rhs));
}

std::vector<IdentityReport> pointwise_suite(int dim, int cases, unsigned long long seed,
                                            double tol) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  std::vector<IdentityReport> out;
  for (int i = 0; i < cases; ++i) {
    const int p = i % (dim + 1);
    const PFormField w = random_form(dim, p, 3, rng);
    const ScalarField f = random_polynomial(dim, 3, rng);
    const ScalarField V = random_polynomial(dim, 3, rng);
    const ScalarField G = random_polynomial(dim, 3, rng);
    VectorField F;
    for (int a = 0; a < dim; ++a) F.comps.push_back(random_polynomial(dim, 3, rng));
    Eigen::VectorXd x(dim);
    for (int a = 0; a < dim; ++a) x[a] = ud(rng);

    out.push_back(check_bochner(w, f, x));
    out.push_back(check_scalar_bochner(w, f, x));
    out.push_back(check_cartan(w, f, x));
    out.push_back(check_commutator(w, G, f, x));
    if (p >= 1) out.push_back(check_contraction(w, F, x));
    if (p <= dim - 1)
      for (auto& r : check_wedge(w, V, f, x)) out.push_back(r);
  }
  for (auto& r : out) {
    r.seed = seed;
    r.tolerance = tol;
    r.pass = r.rel_residual < tol;
  }
  return out;
}

// --- boundary data ---------------------------------------------------------------

namespace {

// J^* w in frame components; zero when the degree exceeds the boundary dimension.
FormValue safe_restrict(const FormValue& v, const Eigen::MatrixXd& frame) {
  const int n = static_cast<int>(frame.cols());
  if (v.degree > n) return FormValue(n, n);  // identically zero placeholder
  return restrict_to_frame(v, frame);
}

// i_N w in frame components; zero 0-form when w is a 0-form.
FormValue safe_normal(const FormValue& v, const Eigen::VectorXd& normal,
                      const Eigen::MatrixXd& frame) {
  const int n = static_cast<int>(frame.cols());
  if (v.degree == 0) return FormValue(n, 0);
  if (v.degree - 1 > n) return FormValue(n, n);
  return normal_contraction(v, normal, frame);
}

} // namespace

BoundaryOps boundary_ops(const FlatDomain& dom, const PFormField& w, const ScalarField& f,
                         const ScalarField& V, const Eigen::VectorXd& x) {
  const int p = w.degree();
  const int n = dom.dim() - 1;
  BoundaryOps ops;
  ops.point = dom.boundary_point(x);
  const FormValue wv = w.value(x);
  ops.tangential = safe_restrict(wv, ops.point.frame);
  ops.normal = safe_normal(wv, ops.point.normal, ops.point.frame);
  // umbilic boundaries: S acts on tangential q-forms as q * eta
  ops.s_tangential = ops.tangential * (static_cast<double>(std::min(p, n + 1)) * ops.point.eta);
  ops.s_normal = ops.normal * (static_cast<double>(std::max(p - 1, 0)) * ops.point.eta);
  ops.f_n = f.jet(x).g.dot(ops.point.normal);
  ops.mean_f = ops.point.mean + ops.f_n / static_cast<double>(n);
  ops.v_n = V.jet(x).g.dot(ops.point.normal);
  return ops;
}

std::pair<double, double> b_f_form(const FlatDomain& dom, const PFormField& w,
                                   const ScalarField& f, const Eigen::VectorXd& x) {
  const int p = w.degree();
  const int dim = dom.dim();
  const int n = dim - 1;
  const BoundaryPoint bp = dom.boundary_point(x);
  const FormValue wv = w.value(x);
  const Jet2 fj = f.jet(x);
  const double f_n = fj.g.dot(bp.normal);

  const FormValue tang = safe_restrict(wv, bp.frame);
  const FormValue norm = safe_normal(wv, bp.normal, bp.frame);
  const double tang2 = tang.norm2();
  const double norm2 = norm.norm2();

  // route 1: shape operator on both factors + weighted mean curvature
  const double n_h_f = n * bp.mean + f_n;
  const double route1 = std::min(p, n + 1) * bp.eta * tang2 + n_h_f * norm2 -
                        std::max(p - 1, 0) * bp.eta * norm2;

  // route 2: shape operator on the trace and on the trace of the ambient star
  double star_tang2 = 0.0;
  if (p >= 1) {
    const FormValue sv = star(wv);
    star_tang2 = safe_restrict(sv, bp.frame).norm2();
  }
  const double route2 =
      std::min(p, n + 1) * bp.eta * tang2 + (n + 1 - p) * bp.eta * star_tang2 + f_n * norm2;

  return {route1, route2};
}

// --- boundary splitting ------------------------------------------------------------

namespace {

// Chart components of the pullback J^* w at chart point u.
Eigen::VectorXd pullback_components(const SphereChart& chart, const PFormField& w, int p,
                                    const Eigen::VectorXd& u) {
  const int n = chart.dim;
  const auto& t = MultiIndexTable::get(n, p);
  const Eigen::VectorXd X = chart.embed(u);
  const Eigen::MatrixXd jac = chart.jacobian(u);
  const FormValue wv = w.value(X);
  Eigen::VectorXd c(t.count());
  Eigen::MatrixXd cols(X.size(), p);
  for (int i = 0; i < t.count(); ++i) {
    const IndexTuple I = t.tuple(i);
    for (int r = 0; r < p; ++r) cols.col(r) = jac.col(I[r]);
    c[i] = eval_on_vectors(wv, cols);
  }
  return c;
}

// Chart components of a q-form known by its ambient evaluation on tangent
// columns (optionally with the normal prepended).
Eigen::VectorXd ambient_to_chart(const FormValue& ambient, const Eigen::MatrixXd& jac, int q,
                                 const Eigen::VectorXd* normal) {
  const int n = static_cast<int>(jac.cols());
  const auto& t = MultiIndexTable::get(n, q);
  Eigen::VectorXd c(t.count());
  const int extra = normal ? 1 : 0;
  Eigen::MatrixXd cols(jac.rows(), q + extra);
  if (normal) cols.col(0) = *normal;
  for (int i = 0; i < t.count(); ++i) {
    const IndexTuple I = t.tuple(i);
    for (int r = 0; r < q; ++r) cols.col(r + extra) = jac.col(I[r]);
    c[i] = eval_on_vectors(ambient, cols);
  }
  return c;
}

FormValue chart_form(int n, int q, const Eigen::VectorXd& c) {
  FormValue v(n, q);
  v.c = c;
  return v;
}

double chart_rel_residual(const Eigen::MatrixXd& g_inv, const FormValue& lhs,
                          const FormValue& rhs) {
  const double nl = std::sqrt(std::max(0.0, chart_inner(g_inv, lhs, lhs)));
  const double nr = std::sqrt(std::max(0.0, chart_inner(g_inv, rhs, rhs)));
  const FormValue d = lhs - rhs;
  const double nd = std::sqrt(std::max(0.0, chart_inner(g_inv, d, d)));
  return nd / std::max({1.0, nl, nr});
}

} // namespace

std::vector<IdentityReport> check_boundary_split(const FlatDomain& dom, const PFormField& w,
                                                 const ScalarField& f,
                                                 const Eigen::VectorXd& x) {
  const int dim = dom.dim();
  const int n = dim - 1;
  const int p = w.degree();
  if (p < 1 || p > n)
    throw DegreeError("boundary splitting needs 1 <= degree <= boundary dimension");
  if (dom.kind() == FlatDomain::Kind::Box)
    throw UnsupportedShape("boundary splitting charts require a ball or annulus domain");

  const BoundaryPoint bp = dom.boundary_point(x);
  const SphereChart chart(n, x.norm());
  const Eigen::VectorXd u0 = chart.coords_of(x);
  const Eigen::MatrixXd jac0 = chart.jacobian(u0);
  const Eigen::MatrixXd g_inv = chart.metric_inv(u0);

  const Jet2 fj = f.jet(x);
  const FormJet2 wj = w.jet2(x);
  const FormValue wv = wj.value();
  const double f_n = fj.g.dot(bp.normal);
  const double n_h_f = n * bp.mean + f_n;
  const FormValue nabla_n = dir_deriv(bp.normal, wj.jet1());

  std::vector<IdentityReport> out;

  // delta_f^{bdry}(J^* w) = J^*(delta_f w) + i_N nabla_N w + S^{[p-1]} i_N w - n H_f i_N w
  {
    const ChartFormEval comps = [&](const Eigen::VectorXd& u) {
      return pullback_components(chart, w, p, u);
    };
    const ChartScalarEval fres = [&](const Eigen::VectorXd& u) {
      return f.value(chart.embed(u));
    };
    const FormValue lhs = chart_codiff_f_fd(chart, p, comps, fres, u0);

    Eigen::VectorXd rhs_c;
    {
      const FormValue dfw = (p >= 1) ? codiff_f_jet(wj, fj).value() : FormValue(dim, 0);
      const Eigen::VectorXd t1 = ambient_to_chart(dfw, jac0, p - 1, nullptr);
      const Eigen::VectorXd t2 = ambient_to_chart(nabla_n, jac0, p - 1, &bp.normal);
      const Eigen::VectorXd t3 = ambient_to_chart(wv, jac0, p - 1, &bp.normal);
      rhs_c = t1 + t2 + ((p - 1) * bp.eta - n_h_f) * t3;
    }
    const FormValue rhs = chart_form(n, p - 1, rhs_c);
    out.push_back(make_report("boundary_split_codifferential", dom.describe(), p,
                              std::sqrt(std::max(0.0, chart_inner(g_inv, lhs, lhs))),
                              std::sqrt(std::max(0.0, chart_inner(g_inv, rhs, rhs))),
                              chart_rel_residual(g_inv, lhs, rhs)));
  }

  // d^{bdry}(i_N w) = -i_N dw + J^*(nabla_N w) - S^{[p]} J^* w
  {
    const ChartFormEval comps = [&](const Eigen::VectorXd& u) {
      const Eigen::VectorXd X = chart.embed(u);
      const Eigen::MatrixXd jac = chart.jacobian(u);
      const Eigen::VectorXd nrm = dom.boundary_point(X).normal;
      return ambient_to_chart(w.value(X), jac, p - 1, &nrm);
    };
    const FormValue lhs = chart_d_fd(chart, p - 1, comps, u0);

    const FormValue dw = (p < dim) ? ext_d_jet(wj).value() : FormValue(dim, 0);
    Eigen::VectorXd rhs_c = ambient_to_chart(nabla_n, jac0, p, nullptr) -
                            p * bp.eta * ambient_to_chart(wv, jac0, p, nullptr);
    if (p < dim) rhs_c -= ambient_to_chart(dw, jac0, p, &bp.normal);
    const FormValue rhs = chart_form(n, p, rhs_c);
    out.push_back(make_report("boundary_split_differential", dom.describe(), p,
                              std::sqrt(std::max(0.0, chart_inner(g_inv, lhs, lhs))),
                              std::sqrt(std::max(0.0, chart_inner(g_inv, rhs, rhs))),
                              chart_rel_residual(g_inv, lhs, rhs)));
  }
  return out;
}

std::vector<IdentityReport> boundary_split_suite(const FlatDomain& dom, int npoints,
                                                 unsigned long long seed, double tol) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  const int dim = dom.dim();
  const int n = dim - 1;
  std::vector<IdentityReport> out;
  for (int i = 0; i < npoints; ++i) {
    // random direction, kept away from chart poles
    Eigen::VectorXd dir(dim);
    do {
      for (int a = 0; a < dim; ++a) dir[a] = nd(rng);
      dir.normalize();
    } while (dim == 3 && std::abs(dir[2]) > 0.99);
    double radius = dom.radius();
    if (dom.kind() == FlatDomain::Kind::Annulus && (i % 2 == 1)) radius = dom.inner_radius();
    const Eigen::VectorXd x = radius * dir;

    const int p = 1 + (i % n);
    const PFormField w = random_form(dim, p, 3, rng);
    const ScalarField f = random_polynomial(dim, 3, rng);
    for (auto& r : check_boundary_split(dom, w, f, x)) {
      r.seed = seed;
      r.tolerance = tol;
      r.pass = r.rel_residual < tol;
      out.push_back(r);
    }
  }
  return out;
}

// --- integral identities --------------------------------------------------------------

namespace {

// Deterministic accumulation: per-node contributions summed pairwise.
class Accumulator {
public:
  void add(double v) { terms_.push_back(v); }
  double total() const {
    std::vector<double> copy = terms_;
    return pairwise_sum(copy);
  }

private:
  std::vector<double> terms_;
};

} // namespace

IdentityReport check_green(const FlatDomain& dom, const PFormField& w, const PFormField& psi,
                           const ScalarField& f, int order) {
  if (psi.degree() != w.degree() + 1)
    throw DegreeError("integration by parts pairs a p-form with a (p+1)-form");
  Accumulator lhs_acc, codiff_acc, bdry_acc;

  const QuadratureRule qi = dom.interior_rule(order);
  for (int i = 0; i < qi.size(); ++i) {
    const Eigen::VectorXd& x = qi.points[i];
    const double wt = qi.weights[i] * std::exp(-f.value(x));
    lhs_acc.add(wt * inner(ext_d(w.jet1(x)), psi.value(x)));
    codiff_acc.add(wt * inner(w.value(x), codiff_f_jet(psi.jet2(x), f.jet(x)).value()));
  }
  const QuadratureRule qb = dom.boundary_rule(order);
  for (int i = 0; i < qb.size(); ++i) {
    const Eigen::VectorXd& x = qb.points[i];
    const BoundaryPoint bp = dom.boundary_point(x);
    const double wt = qb.weights[i] * std::exp(-f.value(x));
    const FormValue tw = safe_restrict(w.value(x), bp.frame);
    const FormValue np = safe_normal(psi.value(x), bp.normal, bp.frame);
    bdry_acc.add(wt * inner(tw, np));
  }
  const double lhs = lhs_acc.total();
  const double rhs = codiff_acc.total() - bdry_acc.total();
  IdentityReport r = make_report("green", dom.describe(), w.degree(), lhs, rhs,
                                 rel_residual(lhs, rhs));
  r.quad_order = order;
  return r;
}

IdentityReport check_green_laplacian(const FlatDomain& dom, const PFormField& w,
                                     const ScalarField& f, int order) {
  const int dim = dom.dim();
  const int p = w.degree();
  Accumulator energy_acc, lap_acc, bdry_acc;

  const QuadratureRule qi = dom.interior_rule(order);
  for (int i = 0; i < qi.size(); ++i) {
    const Eigen::VectorXd& x = qi.points[i];
    const Jet2 fj = f.jet(x);
    const FormJet2 wj = w.jet2(x);
    const double wt = qi.weights[i] * std::exp(-fj.v);
    double energy = 0.0;
    if (p < dim) energy += ext_d(wj.jet1()).norm2();
    if (p > 0) energy += codiff_f_jet(wj, fj).value().norm2();
    energy_acc.add(wt * energy);
    lap_acc.add(wt * inner(hodge_laplacian_f(wj, fj), wj.value()));
  }
  const QuadratureRule qb = dom.boundary_rule(order);
  for (int i = 0; i < qb.size(); ++i) {
    const Eigen::VectorXd& x = qb.points[i];
    const BoundaryPoint bp = dom.boundary_point(x);
    const Jet2 fj = f.jet(x);
    const FormJet2 wj = w.jet2(x);
    const double wt = qb.weights[i] * std::exp(-fj.v);
    double term = 0.0;
    if (p > 0) {
      const FormValue dfw = codiff_f_jet(wj, fj).value();
      term += inner(safe_normal(wj.value(), bp.normal, bp.frame), safe_restrict(dfw, bp.frame));
    }
    if (p < dim) {
      const FormValue dw = ext_d(wj.jet1());
      term -= inner(safe_restrict(wj.value(), bp.frame), safe_normal(dw, bp.normal, bp.frame));
    }
    bdry_acc.add(wt * term);
  }
  const double lhs = energy_acc.total();
  const double rhs = lap_acc.total() + bdry_acc.total();
  IdentityReport r =
      make_report("green_laplacian", dom.describe(), p, lhs, rhs, rel_residual(lhs, rhs));
  r.quad_order = order;
  return r;
}

IdentityReport check_pohozhaev(const FlatDomain& dom, const PFormField& w, const VectorField& F,
                               const ScalarField& f, int order) {
  const int dim = dom.dim();
  const int p = w.degree();
  if (p > dim - 1) throw DegreeError("the Pohozhaev identity differentiates w; need degree <= dim-1");
  Accumulator lhs_acc, grad_acc, bdry_acc;

  const QuadratureRule qi = dom.interior_rule(order);
  for (int i = 0; i < qi.size(); ++i) {
    const Eigen::VectorXd& x = qi.points[i];
    const Jet2 fj = f.jet(x);
    const FormJet2 wj = w.jet2(x);
    Eigen::VectorXd Fval;
    Eigen::MatrixXd Fder;
    F.jet1(x, Fval, Fder);
    const double wt = qi.weights[i] * std::exp(-fj.v);

    const FormJet1 dwj = ext_d_jet(wj);
    const FormValue dw = dwj.value();
    const double div_f = Fder.trace() - fj.g.dot(Fval);
    lhs_acc.add(wt * dw.norm2() * div_f);

    double rhs = inner(induced_op(Fder, dw), dw);
    rhs -= inner(contract(Fval, dw), codiff_f(dwj, fj));
    grad_acc.add(wt * 2.0 * rhs);
  }
  const QuadratureRule qb = dom.boundary_rule(order);
  for (int i = 0; i < qb.size(); ++i) {
    const Eigen::VectorXd& x = qb.points[i];
    const BoundaryPoint bp = dom.boundary_point(x);
    const double wt = qb.weights[i] * std::exp(-f.value(x));
    const FormValue dw = ext_d(w.jet1(x));
    const Eigen::VectorXd Fval = F.value(x);
    double term = -dw.norm2() * Fval.dot(bp.normal);
    const FormValue ifdw = contract(Fval, dw);
    term += 2.0 * inner(safe_restrict(ifdw, bp.frame), safe_normal(dw, bp.normal, bp.frame));
    bdry_acc.add(wt * term);
  }
  const double lhs = lhs_acc.total();
  const double rhs = grad_acc.total() + bdry_acc.total();
  IdentityReport r =
      make_report("pohozhaev", dom.describe(), p, lhs, rhs, rel_residual(lhs, rhs));
  r.quad_order = order;
  return r;
}

std::vector<IdentityReport> check_reilly(const FlatDomain& dom, const PFormField& w,
                                         const ScalarField& f, const ScalarField& V, int order) {
  const int dim = dom.dim();
  const int n = dim - 1;
  const int p = w.degree();
  if (dom.kind() == FlatDomain::Kind::Box)
    throw UnsupportedShape("the Reilly identity needs boundary charts; use a ball or annulus");

  Accumulator lhs_acc;                  // V (|delta_f w|^2 + |dw|^2 - |nabla w|^2)
  Accumulator contract_acc;             // -2 <w, i_{grad V} dw>
  Accumulator potential_acc;            // V<W_f w,w> + (Lap_f V)|w|^2 + <(hess V) w, w>
  Accumulator trace_acc;                // -V_N |J^* w|^2
  Accumulator split_acc;                // 2 V <delta_f^bdry J^* w, i_N w>
  Accumulator bform1_acc, bform2_acc;   // V B_f(w, w), both routes

  const QuadratureRule qi = dom.interior_rule(order);
  for (int i = 0; i < qi.size(); ++i) {
    const Eigen::VectorXd& x = qi.points[i];
    const Jet2 fj = f.jet(x);
    const Jet2 vj = V.jet(x);
    const FormJet2 wj = w.jet2(x);
    const FormValue wv = wj.value();
    const double wt = qi.weights[i] * std::exp(-fj.v);

    double dirichlet = -nabla_norm2(wj.jet1());
    if (p > 0) dirichlet += codiff_f_jet(wj, fj).value().norm2();
    FormValue dw(dim, std::min(p + 1, dim));
    if (p < dim) {
      dw = ext_d(wj.jet1());
      dirichlet += dw.norm2();
    }
    lhs_acc.add(wt * vj.v * dirichlet);

    double t2 = 0.0;
    if (p < dim) t2 = -2.0 * inner(wv, contract(vj.g, dw));
    contract_acc.add(wt * t2);

    const double t3 = vj.v * inner(induced_op(fj.h, wv), wv) +
                      scalar_laplacian_f(vj, fj) * wv.norm2() +
                      inner(induced_op(vj.h, wv), wv);
    potential_acc.add(wt * t3);
  }

  const QuadratureRule qb = dom.boundary_rule(order);
  for (int i = 0; i < qb.size(); ++i) {
    const Eigen::VectorXd& x = qb.points[i];
    const BoundaryPoint bp = dom.boundary_point(x);
    const Jet2 fj = f.jet(x);
    const Jet2 vj = V.jet(x);
    const FormValue wv = w.value(x);
    const double wt = qb.weights[i] * std::exp(-fj.v);
    const double v_n = vj.g.dot(bp.normal);

    trace_acc.add(wt * (-v_n) * safe_restrict(wv, bp.frame).norm2());

    double split = 0.0;
    if (p >= 1 && p <= n) {
      const SphereChart chart(n, x.norm());
      const Eigen::VectorXd u0 = chart.coords_of(x);
      const Eigen::MatrixXd jac0 = chart.jacobian(u0);
      const ChartFormEval comps = [&](const Eigen::VectorXd& u) {
        return pullback_components(chart, w, p, u);
      };
      const ChartScalarEval fres = [&](const Eigen::VectorXd& u) {
        return f.value(chart.embed(u));
      };
      const FormValue lhs_chart = chart_codiff_f_fd(chart, p, comps, fres, u0);
      const Eigen::VectorXd normal_c = ambient_to_chart(wv, jac0, p - 1, &bp.normal);
      split = 2.0 * vj.v *
              chart_inner(chart.metric_inv(u0), lhs_chart, chart_form(n, p - 1, normal_c));
    }
    split_acc.add(wt * split);

    const auto bf = b_f_form(dom, w, f, x);
    bform1_acc.add(wt * vj.v * bf.first);
    bform2_acc.add(wt * vj.v * bf.second);
  }

  const double lhs = lhs_acc.total();
  const double common = contract_acc.total() + potential_acc.total() + trace_acc.total() +
                        split_acc.total();
  const double rhs1 = common + bform1_acc.total();
  const double rhs2 = common + bform2_acc.total();

  std::vector<IdentityReport> out;
  out.push_back(make_report("reilly_curvature_route", dom.describe(), p, lhs, rhs1,
                            rel_residual(lhs, rhs1)));
  out.push_back(
      make_report("reilly_star_route", dom.describe(), p, lhs, rhs2, rel_residual(lhs, rhs2)));
  for (auto& r : out) r.quad_order = order;
  return out;
}

std::vector<IdentityReport> integral_suite(const FlatDomain& dom, unsigned long long seed,
                                           int order, double tol) {
  std::mt19937_64 rng(seed);
  const int dim = dom.dim();
  const ScalarField f = random_polynomial(dim, 2, rng);
  const ScalarField V = random_polynomial(dim, 2, rng) + 2.0;
  VectorField F;
  for (int a = 0; a < dim; ++a) F.comps.push_back(random_polynomial(dim, 2, rng));

  std::vector<IdentityReport> out;
  for (int r = 0; r + 1 <= dim; ++r) {
    const PFormField w = random_form(dim, r, 2, rng);
    const PFormField psi = random_form(dim, r + 1, 2, rng);
    out.push_back(check_green(dom, w, psi, f, order));
  }
  for (int p = 0; p <= dim; ++p) {
    const PFormField w = random_form(dim, p, 2, rng);
    out.push_back(check_green_laplacian(dom, w, f, order));
    if (p <= dim - 1) out.push_back(check_pohozhaev(dom, w, F, f, order));
    if (dom.kind() != FlatDomain::Kind::Box)
      for (auto& rep : check_reilly(dom, w, f, V, order)) out.push_back(rep);
  }
  for (auto& rep : out) {
    rep.seed = seed;
    rep.tolerance = tol;
    rep.pass = rep.rel_residual < tol;
  }
  return out;
}

} // namespace hodgelab
