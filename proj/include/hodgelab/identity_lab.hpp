#pragma once

// The identity laboratory: every structural identity of the weighted calculus
// is checked with two independently implemented sides. Pointwise checks
// compare exact jets against operator compositions; integral checks compare
// quadrature accumulations term by term; boundary checks compare intrinsic
// chart computations (finite differences + closed-form Christoffels) against
// ambient jet evaluations restricted to the boundary.
//
// Residuals are always relative: |lhs - rhs| / max(1, |lhs|, |rhs|), with the
// norm of the difference in place of |lhs - rhs| for form-valued identities.

#include <Eigen/Dense>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "hodgelab/chart.hpp"
#include "hodgelab/domain.hpp"
#include "hodgelab/fields.hpp"
#include "hodgelab/smooth_ops.hpp"

namespace hodgelab {

struct IdentityReport {
  std::string name;
  std::string domain;      // where the check ran ("R^3 pointwise", "ball dim=3 ...")
  int degree = 0;          // form degree of the test subject
  unsigned long long seed = 0;
  int quad_order = 0;      // 0 for pointwise checks
  double lhs = 0.0;        // representative magnitudes (norms or integral values)
  double rhs = 0.0;
  double rel_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

double rel_residual(double lhs, double rhs);
double rel_residual(const FormValue& lhs, const FormValue& rhs);

// --- pointwise identities at a point ------------------------------------------

// Hodge = rough + weighted curvature term (flat space: the weight Hessian).
IdentityReport check_bochner(const PFormField& w, const ScalarField& f,
                             const Eigen::VectorXd& x);

// (1/2) Lap_f |w|^2 = <Lap_f^H w, w> - <W_f w, w> - |nabla w|^2.
IdentityReport check_scalar_bochner(const PFormField& w, const ScalarField& f,
                                    const Eigen::VectorXd& x);

// d i_{grad f} + i_{grad f} d = nabla_{grad f} + (hess f)^{[p]}.
IdentityReport check_cartan(const PFormField& w, const ScalarField& f,
                            const Eigen::VectorXd& x);

// d(i_F w) = -i_F(dw) + nabla_F w + (nabla F)^{[p]} w  (degree >= 1).
IdentityReport check_contraction(const PFormField& w, const VectorField& F,
                                 const Eigen::VectorXd& x);

// Wedge interchange and codifferential-of-wedge for dV ^ w (degree <= dim-1).
std::vector<IdentityReport> check_wedge(const PFormField& w, const ScalarField& V,
                                        const ScalarField& f, const Eigen::VectorXd& x);

// [Lap_f^H, G] w = (Lap_f G) w - 2 nabla_{grad G} w.
IdentityReport check_commutator(const PFormField& w, const ScalarField& G,
                                const ScalarField& f, const Eigen::VectorXd& x);

// Seeded random polynomial sweep of all pointwise identities on R^dim.
std::vector<IdentityReport> pointwise_suite(int dim, int cases, unsigned long long seed,
                                            double tol = 1e-10);

// --- boundary data -------------------------------------------------------------

// Everything the boundary identities consume at one boundary point, expressed
// in the orthonormal tangent frame of the point.
struct BoundaryOps {
  BoundaryPoint point;
  FormValue tangential;    // J^* w, frame components (zero form if degree > boundary dim)
  FormValue normal;        // i_N w, frame components (zero if degree == 0)
  FormValue s_tangential;  // S^{[p]} J^* w
  FormValue s_normal;      // S^{[p-1]} i_N w
  double f_n = 0.0;        // df(N)
  double mean_f = 0.0;     // H_f = H + f_N / (boundary dim)
  double v_n = 0.0;        // dV(N)
};

BoundaryOps boundary_ops(const FlatDomain& dom, const PFormField& w, const ScalarField& f,
                         const ScalarField& V, const Eigen::VectorXd& x);

// The boundary quadratic form of the weighted Reilly identity, computed along
// the two published routes: (shape operator on both trace factors + weighted
// mean curvature) and (shape operator + ambient Hodge star of the form).
std::pair<double, double> b_f_form(const FlatDomain& dom, const PFormField& w,
                                   const ScalarField& f, const Eigen::VectorXd& x);

// Splitting of the boundary codifferential and boundary differential of the
// trace; chart finite differences on the left, ambient jets on the right.
// Valid for 1 <= degree <= dim-1 on balls and annuli.
std::vector<IdentityReport> check_boundary_split(const FlatDomain& dom, const PFormField& w,
                                                 const ScalarField& f, const Eigen::VectorXd& x);

// Seeded random sweep of the boundary splitting identities.
std::vector<IdentityReport> boundary_split_suite(const FlatDomain& dom, int npoints,
                                                 unsigned long long seed, double tol = 1e-8);

// --- integral identities --------------------------------------------------------

// Integration by parts: int <dw, psi> = int <w, delta_f psi> - bdry <J^*w, i_N psi>.
IdentityReport check_green(const FlatDomain& dom, const PFormField& w, const PFormField& psi,
                           const ScalarField& f, int order);

// Energy form of the weighted Hodge Laplacian with its boundary correction.
IdentityReport check_green_laplacian(const FlatDomain& dom, const PFormField& w,
                                     const ScalarField& f, int order);

// Weighted Pohozhaev identity for dw against a vector field F.
IdentityReport check_pohozhaev(const FlatDomain& dom, const PFormField& w, const VectorField& F,
                               const ScalarField& f, int order);

// Weighted Reilly identity with potential V; one report per route of the
// boundary quadratic form. Seven independent quadrature accumulators.
std::vector<IdentityReport> check_reilly(const FlatDomain& dom, const PFormField& w,
                                         const ScalarField& f, const ScalarField& V, int order);

// Seeded random polynomial sweep of all integral identities on one domain.
std::vector<IdentityReport> integral_suite(const FlatDomain& dom, unsigned long long seed,
                                           int order, double tol = 1e-8);

} // namespace hodgelab
