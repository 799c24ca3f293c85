#include "hodgelab/eig.hpp"

#include "hodgelab/errors.hpp"

#include <Eigen/Eigenvalues>

namespace hodgelab {

EigResult eig_gen_sym(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                      double residual_tol) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n || B.rows() != n || B.cols() != n)
    throw SolveFailure("eig_gen_sym: dimension mismatch");
  const double asym_a = (A - A.transpose()).cwiseAbs().maxCoeff();
  const double asym_b = (B - B.transpose()).cwiseAbs().maxCoeff();
  const double scale_a = std::max(A.cwiseAbs().maxCoeff(), 1e-300);
  const double scale_b = std::max(B.cwiseAbs().maxCoeff(), 1e-300);
  if (asym_a > 1e-10 * scale_a || asym_b > 1e-10 * scale_b)
    throw NotSPD("eig_gen_sym: inputs are not symmetric");
  if (Eigen::LLT<Eigen::MatrixXd>(B).info() != Eigen::Success)
    throw NotSPD("eig_gen_sym: right-hand matrix is not positive definite");

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A, B,
                                                               Eigen::ComputeEigenvectors |
                                                                   Eigen::Ax_lBx);
  if (es.info() != Eigen::Success)
    throw ConvergenceFailure("eig_gen_sym: iteration did not converge");

  EigResult out{es.eigenvalues(), es.eigenvectors()};
  const Eigen::MatrixXd BV = B * out.vectors;
  const Eigen::MatrixXd R = A * out.vectors - BV * out.values.asDiagonal();
  for (Eigen::Index j = 0; j < n; ++j) {
    const double denom = std::max(BV.col(j).norm(), 1e-300);
    const double err = R.col(j).norm() / denom;
    // admit an absolute floor tied to the pencil scale for near-null columns
    if (err > residual_tol && R.col(j).norm() > residual_tol * scale_a)
      throw ConvergenceFailure("eig_gen_sym: residual " + std::to_string(err) +
                               " for eigenvalue " + std::to_string(out.values[j]));
  }
  return out;
}

EigResult eig_gen_sym(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, int k,
                      double residual_tol) {
  if (k < 1 || k > A.rows())
    throw SolveFailure("eig_gen_sym: requested " + std::to_string(k) + " of " +
                       std::to_string(A.rows()) + " eigenpairs");
  EigResult full = eig_gen_sym(A, B, residual_tol);
  EigResult out;
  out.values = full.values.head(k);
  out.vectors = full.vectors.leftCols(k);
  return out;
}

Eigen::VectorXd pencil_residuals(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                 const EigResult& eig) {
  Eigen::VectorXd res(eig.values.size());
  for (Eigen::Index j = 0; j < eig.values.size(); ++j) {
    const Eigen::VectorXd bv = B * eig.vectors.col(j);
    const Eigen::VectorXd r = A * eig.vectors.col(j) - eig.values[j] * bv;
    res[j] = r.norm() / std::max(bv.norm(), 1e-300);
  }
  return res;
}

} // namespace hodgelab
