#pragma once

#include <Eigen/Dense>

namespace hodgelab {

struct EigResult {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns, B-orthonormal
};

// Generalized symmetric-definite pencil A v = lambda B v (A symmetric, B SPD).
// Every returned pair is verified against ||A v - lambda B v|| <= tol ||B v||.
EigResult eig_gen_sym(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                      double residual_tol = 1e-8);

// Smallest k eigenpairs of the same pencil (k <= dim, SolveFailure otherwise).
EigResult eig_gen_sym(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, int k,
                      double residual_tol);

// Residuals ||A v - lambda B v|| / ||B v|| for reporting alongside spectra.
Eigen::VectorXd pencil_residuals(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                 const EigResult& eig);

} // namespace hodgelab
