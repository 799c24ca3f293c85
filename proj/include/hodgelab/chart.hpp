#pragma once

// Intrinsic calculus on boundary spheres and on embedded chart geometries.
//
// Two independent routes are provided on purpose:
//   * SphereChart: closed-form round metric and Christoffel symbols for S^1
//     and S^2 boundary components; derivatives of form components taken by
//     central finite differences of a caller-supplied evaluator. This is the
//     oracle side of every boundary-splitting check.
//   * ChartGeometry: metric/Christoffels derived from 2-jets of an embedding
//     X : chart -> R^M given as expression trees. This is the symbolic route
//     used by the trace identities and the submanifold eigenvalue checks.
//
// Chart p-forms carry components against coordinate differentials du^I with
// increasing multi-indices; inner products use Gram determinants of the
// inverse metric.

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "hodgelab/expr.hpp"
#include "hodgelab/smooth_ops.hpp"

namespace hodgelab {

// --- closed-form round charts -------------------------------------------------

// S^1 (dim 1, coordinates theta) or S^2 (dim 2, colatitude/azimuth) of radius R.
struct SphereChart {
  int dim = 1;
  double radius = 1.0;

  SphereChart(int d, double R);

  int ambient_dim() const { return dim + 1; }

  // Embedding, chart tangent columns d X / d u^a, metric and its inverse,
  // Christoffel symbols Gamma[k](i, j) = Gamma^k_{ij}.
  Eigen::VectorXd embed(const Eigen::VectorXd& u) const;
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& u) const;
  Eigen::MatrixXd metric(const Eigen::VectorXd& u) const;
  Eigen::MatrixXd metric_inv(const Eigen::VectorXd& u) const;
  std::vector<Eigen::MatrixXd> christoffel(const Eigen::VectorXd& u) const;

  // Chart coordinates of an ambient point on the sphere. Throws PoleProximity
  // within 1e-3 (colatitude) of a pole; the S^2 azimuth is undefined there.
  Eigen::VectorXd coords_of(const Eigen::VectorXd& x) const;
};

// Components of a chart p-form at u (values only; used by the FD route).
using ChartFormEval = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using ChartScalarEval = std::function<double(const Eigen::VectorXd&)>;

// Inner product of chart p-forms from Gram determinants of g^{-1}.
double chart_inner(const Eigen::MatrixXd& g_inv, const FormValue& a, const FormValue& b);

// Coordinate exterior derivative by central differences (metric-free).
FormValue chart_d_fd(const SphereChart& chart, int degree, const ChartFormEval& comp,
                     const Eigen::VectorXd& u, double step = 1e-5);

// Weighted codifferential by central differences + closed-form Christoffels:
// (delta_f eta)_J = -g^{AB} (nabla_A eta)_{BJ} + g^{AB} f_A eta_{BJ}.
FormValue chart_codiff_f_fd(const SphereChart& chart, int degree, const ChartFormEval& comp,
                            const ChartScalarEval& f, const Eigen::VectorXd& u,
                            double step = 1e-5);

// --- embedding-derived chart geometry ------------------------------------------

// Pointwise geometric data of an embedded chart at u.
struct ChartFrame {
  Eigen::MatrixXd jac;                  // ambient x m, column a = dX/du^a
  Eigen::MatrixXd g;                    // metric
  Eigen::MatrixXd g_inv;
  std::vector<Eigen::MatrixXd> gamma;   // gamma[k](i,j) = Gamma^k_{ij}
  std::vector<Jet2> xjets;              // 2-jets of the embedding components
};

class ChartGeometry {
public:
  ChartGeometry(std::vector<ScalarField> embedding, int chart_dim);

  int chart_dim() const { return m_; }
  int ambient_dim() const { return static_cast<int>(X_.size()); }
  const std::vector<ScalarField>& embedding() const { return X_; }

  ChartFrame frame(const Eigen::VectorXd& u) const;

  // Weighted chart Laplacian of a scalar with 2-jet uj at u (positive spectrum):
  // -g^{ij}(u_{ij} - Gamma^k_{ij} u_k) + g^{ij} f_i u_j.
  static double laplacian_f(const ChartFrame& fr, const Jet2& uj, const Eigen::VectorXd& fgrad);

  // Covariant derivative matrix (component I, direction A) of a chart form.
  static Eigen::MatrixXd cov_deriv(const ChartFrame& fr, const FormJet1& w);

  // |nabla w|^2 = g^{AB} <nabla_A w, nabla_B w> with Gram inner products.
  static double nabla_norm2(const ChartFrame& fr, const FormJet1& w);

  // Directional covariant derivative nabla_v w for a chart vector v^i.
  static FormValue cov_dir_deriv(const ChartFrame& fr, const FormJet1& w,
                                 const Eigen::VectorXd& v);

  // Weighted codifferential from exact jets (symbolic route).
  static FormValue codiff_f(const ChartFrame& fr, const FormJet1& w,
                            const Eigen::VectorXd& fgrad);

private:
  std::vector<ScalarField> X_;
  int m_;
};

} // namespace hodgelab
