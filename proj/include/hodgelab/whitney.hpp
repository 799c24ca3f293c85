#pragma once

// Lowest-order Whitney finite elements on the simplicial complexes, with the
// weight exp(-f) folded into every inner product at quadrature-point accuracy
// (no vertex lumping).
//
// Cell geometry is always handled in an orthonormal tangent frame of the cell
// (identity for flat complexes, per-cell plane for embedded surfaces, lifted
// chart coordinates for the periodic torus), so Euclidean component algebra
// on FormValue applies verbatim.

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "hodgelab/expr.hpp"
#include "hodgelab/fields.hpp"
#include "hodgelab/mesh.hpp"
#include "hodgelab/smooth_ops.hpp"

namespace hodgelab {

struct Cochain {
  int degree = 0;
  Eigen::VectorXd coeffs;
};

struct WeightedComplex {
  SimplicialComplex mesh;
  ScalarField weight;  // f in exp(-f)
  int quad_order = 4;
  std::vector<Eigen::SparseMatrix<double>> mass;  // [p] for p = 0..top_dim
};

// Per-cell geometry in an orthonormal tangent frame.
struct CellFrame {
  Eigen::MatrixXd ambient;  // ambient_dim x (k+1), lifted coordinates
  Eigen::MatrixXd tangent;  // ambient_dim x k, orthonormal columns
  Eigen::MatrixXd edges;    // k x k tangent coords of v_a - v_0
  Eigen::MatrixXd bgrad;    // k x (k+1) barycentric gradients, tangent coords
  double volume = 0.0;
};
CellFrame cell_frame(const SimplicialComplex& K, int cell);

// Whitney basis form of the (p+1)-vertex subset `S` of the cell, evaluated at
// barycentric coordinates `lambda`; components over the tangent frame.
FormValue whitney_basis(const CellFrame& fr, const std::vector<int>& S,
                        const Eigen::VectorXd& lambda);

WeightedComplex assemble(const SimplicialComplex& K, const ScalarField& f, int quad_order);

// d^T M_{p+1} d, the quadratic form of |d(.)|^2 in the weighted metric.
Eigen::SparseMatrix<double> stiffness(const WeightedComplex& W, int p);

// Weighted codifferential M_{p-1}^{-1} d^T M_p.
Cochain discrete_delta_f(const WeightedComplex& W, const Cochain& c);

struct HodgeParts {
  Cochain exact, coexact, harmonic;
};
// Weighted-orthogonal splitting on a closed complex (two least-squares solves).
HodgeParts hodge_decompose(const WeightedComplex& W, const Cochain& c);

// Dimension of the numerically-zero eigenspace of the weighted Hodge pencil.
int harmonic_dim(const WeightedComplex& W, int p);

// Integrals of a smooth p-form over all p-simplices.
Cochain de_rham_interpolate(const SimplicialComplex& K, const PFormField& omega,
                            int quad_order);

// Whitney interpolant of a cochain inside one cell (components in the cell's
// tangent frame), and point location + evaluation across the complex.
FormValue whitney_value(const SimplicialComplex& K, const Cochain& c, int cell,
                        const Eigen::VectorXd& lambda);
int locate_cell(const SimplicialComplex& K, const Eigen::VectorXd& x,
                Eigen::VectorXd* lambda_out = nullptr);
FormValue whitney_reconstruct(const WeightedComplex& W, const Cochain& c,
                              const Eigen::VectorXd& x);

// SPD solve: dense Cholesky up to 4000 unknowns, diagonally preconditioned
// conjugate gradients (tol 1e-12) beyond.
Eigen::VectorXd spd_solve(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& b);

// Minimum-norm solution of the (possibly singular, consistent) SPSD system.
Eigen::VectorXd spsd_least_squares(const Eigen::MatrixXd& A, const Eigen::VectorXd& b);

// Index of a p-simplex by sorted vertex tuple, -1 if absent.
int simplex_index(const SimplicialComplex& K, int p, const std::vector<int>& tuple);

} // namespace hodgelab
