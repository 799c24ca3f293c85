#include "hodgelab/chart.hpp"

#include <cmath>

#include "hodgelab/errors.hpp"
#include "hodgelab/multiindex.hpp"

namespace hodgelab {

namespace {
constexpr double kPoleGuard = 1e-3;
}

SphereChart::SphereChart(int d, double R) : dim(d), radius(R) {
  if (d != 1 && d != 2) throw UnsupportedDimension("sphere chart dimension must be 1 or 2");
  if (!(R > 0.0)) throw DomainError("sphere chart radius must be positive");
}

Eigen::VectorXd SphereChart::embed(const Eigen::VectorXd& u) const {
  Eigen::VectorXd x(ambient_dim());
  if (dim == 1) {
    x << radius * std::cos(u[0]), radius * std::sin(u[0]);
  } else {
    const double st = std::sin(u[0]), ct = std::cos(u[0]);
    x << radius * st * std::cos(u[1]), radius * st * std::sin(u[1]), radius * ct;
  }
  return x;
}

Eigen::MatrixXd SphereChart::jacobian(const Eigen::VectorXd& u) const {
  Eigen::MatrixXd jac(ambient_dim(), dim);
  if (dim == 1) {
    jac << -radius * std::sin(u[0]), radius * std::cos(u[0]);
  } else {
    const double st = std::sin(u[0]), ct = std::cos(u[0]);
    const double sp = std::sin(u[1]), cp = std::cos(u[1]);
    jac.col(0) << radius * ct * cp, radius * ct * sp, -radius * st;
    jac.col(1) << -radius * st * sp, radius * st * cp, 0.0;
  }
  return jac;
}

Eigen::MatrixXd SphereChart::metric(const Eigen::VectorXd& u) const {
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(dim, dim);
  g(0, 0) = radius * radius;
  if (dim == 2) {
    const double st = std::sin(u[0]);
    g(1, 1) = radius * radius * st * st;
  }
  return g;
}

Eigen::MatrixXd SphereChart::metric_inv(const Eigen::VectorXd& u) const {
  Eigen::MatrixXd gi = Eigen::MatrixXd::Zero(dim, dim);
  gi(0, 0) = 1.0 / (radius * radius);
  if (dim == 2) {
    const double st = std::sin(u[0]);
    if (std::abs(st) < kPoleGuard) throw PoleProximity("metric inverse requested too close to a pole");
    gi(1, 1) = 1.0 / (radius * radius * st * st);
  }
  return gi;
}

std::vector<Eigen::MatrixXd> SphereChart::christoffel(const Eigen::VectorXd& u) const {
  std::vector<Eigen::MatrixXd> gamma(dim, Eigen::MatrixXd::Zero(dim, dim));
  if (dim == 2) {
    const double st = std::sin(u[0]), ct = std::cos(u[0]);
    if (std::abs(st) < kPoleGuard) throw PoleProximity("Christoffel symbols requested too close to a pole");
    gamma[0](1, 1) = -st * ct;          // Gamma^theta_{phi phi}
    gamma[1](0, 1) = gamma[1](1, 0) = ct / st;  // Gamma^phi_{theta phi}
  }
  return gamma;
}

Eigen::VectorXd SphereChart::coords_of(const Eigen::VectorXd& x) const {
  if (x.size() != ambient_dim()) throw UnsupportedDimension("ambient point has wrong dimension for chart");
  const double r = x.norm();
  if (std::abs(r - radius) > 1e-7 * std::max(1.0, radius))
    throw NotOnBoundary("point is not on the chart sphere");
  Eigen::VectorXd u(dim);
  if (dim == 1) {
    u[0] = std::atan2(x[1], x[0]);
  } else {
    double c = x[2] / r;
    c = std::min(1.0, std::max(-1.0, c));
    const double theta = std::acos(c);
    if (theta < kPoleGuard || M_PI - theta < kPoleGuard)
      throw PoleProximity("boundary point within pole exclusion of the colatitude chart");
    u[0] = theta;
    u[1] = std::atan2(x[1], x[0]);
  }
  return u;
}

double chart_inner(const Eigen::MatrixXd& g_inv, const FormValue& a, const FormValue& b) {
  if (a.dim != b.dim || a.degree != b.degree)
    throw DegreeError("chart inner product needs forms of equal dimension and degree");
  const int p = a.degree;
  if (p == 0) return a.c[0] * b.c[0];
  const auto& t = MultiIndexTable::get(a.dim, p);
  double acc = 0.0;
  Eigen::MatrixXd gram(p, p);
  for (int i = 0; i < t.count(); ++i) {
    const IndexTuple I = t.tuple(i);
    for (int j = 0; j < t.count(); ++j) {
      const IndexTuple J = t.tuple(j);
      for (int r = 0; r < p; ++r)
        for (int s = 0; s < p; ++s) gram(r, s) = g_inv(I[r], J[s]);
      acc += a.c[i] * b.c[j] * gram.determinant();
    }
  }
  return acc;
}

namespace {

// Values at u and central-difference partials D(comp, dir) of a component evaluator.
void fd_jet(const ChartFormEval& comp, const Eigen::VectorXd& u, int ncomp, double step,
            Eigen::VectorXd& val, Eigen::MatrixXd& der) {
  val = comp(u);
  if (val.size() != ncomp) throw DegreeError("chart form evaluator returned wrong component count");
  der.resize(ncomp, u.size());
  Eigen::VectorXd up = u, um = u;
  for (int a = 0; a < u.size(); ++a) {
    up[a] = u[a] + step;
    um[a] = u[a] - step;
    der.col(a) = (comp(up) - comp(um)) / (2.0 * step);
    up[a] = u[a];
    um[a] = u[a];
  }
}

// Covariant derivative matrix (component I, direction A) on increasing tuples.
Eigen::MatrixXd cov_from_parts(int dim, int degree, const Eigen::VectorXd& val,
                               const Eigen::MatrixXd& der,
                               const std::vector<Eigen::MatrixXd>& gamma) {
  const auto& t = MultiIndexTable::get(dim, degree);
  Eigen::MatrixXd cov = der;
  if (degree == 0) return cov;
  for (int i = 0; i < t.count(); ++i) {
    const IndexTuple I = t.tuple(i);
    for (int a = 0; a < dim; ++a) {
      double corr = 0.0;
      for (int slot = 0; slot < degree; ++slot) {
        for (int b = 0; b < dim; ++b) {
          const double gb = gamma[b](a, I[slot]);
          if (gb == 0.0) continue;
          IndexTuple rep = I;
          rep[slot] = b;
          const SignedSlot s = t.lookup(rep);
          if (s.sign != 0) corr += gb * s.sign * val[s.slot];
        }
      }
      cov(i, a) -= corr;
    }
  }
  return cov;
}

FormValue codiff_from_parts(int dim, int degree, const Eigen::VectorXd& val,
                            const Eigen::MatrixXd& cov, const Eigen::MatrixXd& g_inv,
                            const Eigen::VectorXd& fgrad) {
  if (degree < 1) throw DegreeError("codifferential needs degree >= 1");
  const auto& t = MultiIndexTable::get(dim, degree);
  FormValue out(dim, degree - 1);
  const auto& tout = MultiIndexTable::get(dim, degree - 1);
  for (int j = 0; j < tout.count(); ++j) {
    const IndexTuple J = tout.tuple(j);
    double acc = 0.0;
    for (int a = 0; a < dim; ++a) {
      for (int b = 0; b < dim; ++b) {
        const double gab = g_inv(a, b);
        if (gab == 0.0) continue;
        IndexTuple BJ{};
        BJ[0] = b;
        for (int r = 0; r < degree - 1; ++r) BJ[r + 1] = J[r];
        const SignedSlot s = t.lookup(BJ);
        if (s.sign == 0) continue;
        acc += gab * s.sign * (-cov(s.slot, a) + fgrad[a] * val[s.slot]);
      }
    }
    out.c[j] = acc;
  }
  return out;
}

} // namespace

FormValue chart_d_fd(const SphereChart& chart, int degree, const ChartFormEval& comp,
                     const Eigen::VectorXd& u, double step) {
  const int dim = chart.dim;
  const auto& t = MultiIndexTable::get(dim, degree);
  Eigen::VectorXd val;
  Eigen::MatrixXd der;
  fd_jet(comp, u, t.count(), step, val, der);
  const auto& tout = MultiIndexTable::get(dim, degree + 1);
  FormValue out(dim, degree + 1);
  for (int k = 0; k < tout.count(); ++k) {
    const IndexTuple K = tout.tuple(k);
    double acc = 0.0;
    for (int a = 0; a <= degree; ++a) {
      IndexTuple rest{};
      for (int r = 0, w = 0; r <= degree; ++r)
        if (r != a) rest[w++] = K[r];
      const SignedSlot s = t.lookup(rest);
      if (s.sign == 0) continue;  // distinct entries, cannot happen; keep the guard
      const double sgn = (a % 2 == 0) ? 1.0 : -1.0;
      acc += sgn * s.sign * der(s.slot, K[a]);
    }
    out.c[k] = acc;
  }
  return out;
}

FormValue chart_codiff_f_fd(const SphereChart& chart, int degree, const ChartFormEval& comp,
                            const ChartScalarEval& f, const Eigen::VectorXd& u, double step) {
  const int dim = chart.dim;
  const auto& t = MultiIndexTable::get(dim, degree);
  Eigen::VectorXd val;
  Eigen::MatrixXd der;
  fd_jet(comp, u, t.count(), step, val, der);
  const auto gamma = chart.christoffel(u);
  const Eigen::MatrixXd cov = cov_from_parts(dim, degree, val, der, gamma);
  Eigen::VectorXd fgrad(dim);
  Eigen::VectorXd up = u, um = u;
  for (int a = 0; a < dim; ++a) {
    up[a] = u[a] + step;
    um[a] = u[a] - step;
    fgrad[a] = (f(up) - f(um)) / (2.0 * step);
    up[a] = u[a];
    um[a] = u[a];
  }
  return codiff_from_parts(dim, degree, val, cov, chart.metric_inv(u), fgrad);
}

ChartGeometry::ChartGeometry(std::vector<ScalarField> embedding, int chart_dim)
    : X_(std::move(embedding)), m_(chart_dim) {
  if (m_ < 1 || m_ > kMaxDim) throw UnsupportedDimension("chart dimension out of range");
  if (static_cast<int>(X_.size()) < m_)
    throw UnsupportedEmbedding("embedding needs at least as many components as chart dimensions");
  for (const auto& c : X_)
    if (!c.valid() || c.max_coordinate() >= m_)
      throw UnsupportedEmbedding("embedding component references coordinates beyond the chart");
}

ChartFrame ChartGeometry::frame(const Eigen::VectorXd& u) const {
  if (u.size() != m_) throw UnsupportedDimension("chart point has wrong dimension");
  ChartFrame fr;
  const int M = ambient_dim();
  fr.jac.resize(M, m_);
  fr.xjets.reserve(M);
  for (int l = 0; l < M; ++l) {
    fr.xjets.push_back(X_[l].jet(u));
    fr.jac.row(l) = fr.xjets.back().g.transpose();
  }
  fr.g = fr.jac.transpose() * fr.jac;
  Eigen::LLT<Eigen::MatrixXd> llt(fr.g);
  if (llt.info() != Eigen::Success)
    throw UnsupportedEmbedding("embedding metric is rank deficient at the requested point");
  fr.g_inv = llt.solve(Eigen::MatrixXd::Identity(m_, m_));

  // dg[k](i,j) = d_k g_ij assembled from the embedding 2-jets.
  std::vector<Eigen::MatrixXd> dg(m_, Eigen::MatrixXd::Zero(m_, m_));
  for (int l = 0; l < M; ++l) {
    const Jet2& xj = fr.xjets[l];
    for (int k = 0; k < m_; ++k)
      for (int i = 0; i < m_; ++i)
        for (int j = 0; j < m_; ++j)
          dg[k](i, j) += xj.h(k, i) * xj.g(j) + xj.g(i) * xj.h(k, j);
  }
  fr.gamma.assign(m_, Eigen::MatrixXd::Zero(m_, m_));
  for (int k = 0; k < m_; ++k)
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < m_; ++j) {
        double acc = 0.0;
        for (int l = 0; l < m_; ++l)
          acc += fr.g_inv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
        fr.gamma[k](i, j) = 0.5 * acc;
      }
  return fr;
}

double ChartGeometry::laplacian_f(const ChartFrame& fr, const Jet2& uj,
                                  const Eigen::VectorXd& fgrad) {
  const int m = static_cast<int>(fr.g.rows());
  double acc = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      double hess = uj.h(i, j);
      for (int k = 0; k < m; ++k) hess -= fr.gamma[k](i, j) * uj.g(k);
      acc += fr.g_inv(i, j) * (-hess + fgrad[i] * uj.g(j));
    }
  return acc;
}

Eigen::MatrixXd ChartGeometry::cov_deriv(const ChartFrame& fr, const FormJet1& w) {
  return cov_from_parts(w.dim, w.degree, w.val, w.der, fr.gamma);
}

double ChartGeometry::nabla_norm2(const ChartFrame& fr, const FormJet1& w) {
  const Eigen::MatrixXd cov = cov_deriv(fr, w);
  const int m = static_cast<int>(fr.g.rows());
  double acc = 0.0;
  FormValue ca(w.dim, w.degree), cb(w.dim, w.degree);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      if (fr.g_inv(a, b) == 0.0) continue;
      ca.c = cov.col(a);
      cb.c = cov.col(b);
      acc += fr.g_inv(a, b) * chart_inner(fr.g_inv, ca, cb);
    }
  return acc;
}

FormValue ChartGeometry::cov_dir_deriv(const ChartFrame& fr, const FormJet1& w,
                                       const Eigen::VectorXd& v) {
  const Eigen::MatrixXd cov = cov_deriv(fr, w);
  FormValue out(w.dim, w.degree);
  out.c = cov * v;
  return out;
}

FormValue ChartGeometry::codiff_f(const ChartFrame& fr, const FormJet1& w,
                                  const Eigen::VectorXd& fgrad) {
  const Eigen::MatrixXd cov = cov_deriv(fr, w);
  return codiff_from_parts(w.dim, w.degree, w.val, cov, fr.g_inv, fgrad);
}

} // namespace hodgelab
