#pragma once

// Closed-form p-form fields: one ScalarField per increasing multi-index.
// These are the test subjects of the identity laboratory; all pointwise
// operators consume their jets (see smooth_ops.hpp).

#include <cstdint>
#include <random>
#include <vector>

#include "hodgelab/expr.hpp"
#include "hodgelab/smooth_ops.hpp"

namespace hodgelab {

class PFormField {
public:
  PFormField() = default;
  PFormField(int dim, int degree);

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  int ncomp() const { return static_cast<int>(comps_.size()); }

  ScalarField& comp(int slot) { return comps_[slot]; }
  const ScalarField& comp(int slot) const { return comps_[slot]; }

  FormValue value(const Eigen::VectorXd& x) const;
  FormJet1 jet1(const Eigen::VectorXd& x) const;
  FormJet2 jet2(const Eigen::VectorXd& x) const;

  // Symbolic exterior derivative at tree level (used to build test fields
  // like omega = d u; runtime operators use jets instead).
  PFormField d_symbolic() const;

  // Scale every component field.
  PFormField scaled(const ScalarField& g) const;

private:
  int dim_ = 0;
  int degree_ = 0;
  std::vector<ScalarField> comps_;
};

// The differential of a scalar field as a 1-form field (symbolic gradient).
PFormField gradient_field(const ScalarField& u, int dim);

struct VectorField {
  std::vector<ScalarField> comps; // component A = <F, e_A>

  int dim() const { return static_cast<int>(comps.size()); }
  Eigen::VectorXd value(const Eigen::VectorXd& x) const;
  // jets of the components: val(A), der(A,B) = d_B F_A
  void jet1(const Eigen::VectorXd& x, Eigen::VectorXd& val, Eigen::MatrixXd& der) const;
};

VectorField gradient_vector(const ScalarField& u, int dim);

// --- seeded random polynomial data -------------------------------------------

// Random polynomial of total degree <= max_degree with coefficients in [-1, 1].
ScalarField random_polynomial(int dim, int max_degree, std::mt19937_64& rng);

// Random p-form field with polynomial components.
PFormField random_form(int dim, int degree, int max_degree, std::mt19937_64& rng);

} // namespace hodgelab
