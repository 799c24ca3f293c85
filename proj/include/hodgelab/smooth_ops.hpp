#pragma once

// Pointwise exterior calculus in flat orthonormal coordinates. A p-form value
// stores its components against increasing multi-indices; jets of the
// component functions (order 1 or 2) are enough for every operator here —
// second derivatives of *derived* forms are never required because the
// composed operators (weighted Hodge Laplacian etc.) chain jets explicitly.
//
// Conventions (fixed project-wide, see README):
//   Delta u           = -sum_A u_AA                    (positive spectrum)
//   Delta_f u         = -sum_A u_AA + <grad f, grad u>
//   delta_f omega     = delta omega + i_{grad f} omega
//   (delta omega)_J   = -sum_A d_A omega_{AJ}
//   S(X)              = -nabla_X N with N the inner unit normal.

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "hodgelab/jet.hpp"
#include "hodgelab/multiindex.hpp"

namespace hodgelab {

extern const char* const kConventionLedger; // version tag embedded in reports

struct FormValue {
  int dim = 0;
  int degree = 0;
  Eigen::VectorXd c; // size C(dim, degree); empty when the degree is out of range

  FormValue() = default;
  FormValue(int d, int p) : dim(d), degree(p) {
    c = Eigen::VectorXd::Zero(p >= 0 && p <= d ? binom(d, p) : 0);
  }

  static FormValue zero(int d, int p) { return FormValue(d, p); }

  bool empty() const { return c.size() == 0; }

  // Signed component access by arbitrary index tuple.
  double coeff(const IndexTuple& idx) const {
    const auto& tab = MultiIndexTable::get(dim, degree);
    SignedSlot s = tab.lookup(idx);
    return s.sign == 0 ? 0.0 : s.sign * c(s.slot);
  }

  double norm2() const { return c.squaredNorm(); }

  FormValue& operator+=(const FormValue& o) { c += o.c; return *this; }
  FormValue& operator-=(const FormValue& o) { c -= o.c; return *this; }
  FormValue operator*(double s) const { FormValue r = *this; r.c *= s; return r; }
};

inline FormValue operator+(FormValue a, const FormValue& b) { a += b; return a; }
inline FormValue operator-(FormValue a, const FormValue& b) { a -= b; return a; }
inline FormValue operator*(double s, const FormValue& a) { return a * s; }

inline double inner(const FormValue& a, const FormValue& b) { return a.c.dot(b.c); }

// Components and their first partials: der(i, A) = d_A (component i).
struct FormJet1 {
  int dim = 0;
  int degree = 0;
  Eigen::VectorXd val;
  Eigen::MatrixXd der;

  FormValue value() const {
    FormValue v(dim, degree);
    v.c = val;
    return v;
  }
};

// Components as full second-order jets.
struct FormJet2 {
  int dim = 0;
  int degree = 0;
  std::vector<Jet2> comps;

  FormValue value() const {
    FormValue v(dim, degree);
    for (size_t i = 0; i < comps.size(); ++i) v.c(i) = comps[i].v;
    return v;
  }
  FormJet1 jet1() const {
    FormJet1 j;
    j.dim = dim;
    j.degree = degree;
    j.val.resize(comps.size());
    j.der.resize(comps.size(), dim);
    for (size_t i = 0; i < comps.size(); ++i) {
      j.val(i) = comps[i].v;
      j.der.row(i) = comps[i].g.transpose();
    }
    return j;
  }
};

// --- first-order operators ---------------------------------------------------

// Exterior derivative; DegreeError at top degree.
FormValue ext_d(const FormJet1& w);

// Exterior derivative with first partials of the result (needs 2-jets).
FormJet1 ext_d_jet(const FormJet2& w);

// Weighted codifferential delta_f = delta + i_{grad f}; DegreeError at degree 0.
FormValue codiff_f(const FormJet1& w, const Jet2& f);
FormJet1 codiff_f_jet(const FormJet2& w, const Jet2& f);

// Componentwise covariant derivative matrix (flat): (i, A) -> d_A omega_i,
// and |nabla omega|^2 = its squared Frobenius norm.
inline Eigen::MatrixXd nabla_matrix(const FormJet1& w) { return w.der; }
inline double nabla_norm2(const FormJet1& w) { return w.der.squaredNorm(); }

// --- second-order operators --------------------------------------------------

// Weighted Hodge Laplacian d delta_f + delta_f d by jet chaining.
FormValue hodge_laplacian_f(const FormJet2& w, const Jet2& f);

// Weighted rough (Bochner) Laplacian nabla_f^* nabla = nabla^* nabla + nabla_{grad f}.
FormValue rough_laplacian_f(const FormJet2& w, const Jet2& f);

// Jet of the scalar |omega|^2 (value, gradient, Hessian).
Jet2 norm2_jet(const FormJet2& w);

// Scalar weighted Laplacian Delta_f u = -tr Hess u + <grad f, grad u>.
inline double scalar_laplacian_f(const Jet2& u, const Jet2& f) {
  return -u.h.trace() + f.g.dot(u.g);
}

// --- algebraic operators -----------------------------------------------------

// Induced operator T^{[p]} of a (1,1)-tensor T acting on each slot;
// T(i, j) = <e_i, T e_j>, i.e. column j is the image of basis vector j.
FormValue induced_op(const Eigen::MatrixXd& T, const FormValue& w);

// Interior product i_X; DegreeError at degree 0.
FormValue contract(const Eigen::VectorXd& X, const FormValue& w);

// Interior product with first partials of the result; the vector field is
// given by value and derivative matrix der(A, B) = d_B X_A.
FormJet1 contract_jet(const Eigen::VectorXd& Xval, const Eigen::MatrixXd& Xder,
                      const FormJet2& w);

// Directional derivative nabla_X omega (flat).
FormValue dir_deriv(const Eigen::VectorXd& X, const FormJet1& w);

// Wedge with the 1-form a-flat: (a wedge w); DegreeError at top degree.
FormValue wedge1(const Eigen::VectorXd& a, const FormValue& w);

// Wedge with first partials of the result; ader(A, B) = d_B a_A.
FormJet1 wedge1_jet(const Eigen::VectorXd& aval, const Eigen::MatrixXd& ader,
                    const FormJet2& w);

// Euclidean Hodge star for an orthonormal frame.
FormValue star(const FormValue& w);

// Antisymmetric multilinear evaluation omega(v_1, ..., v_p).
double eval_on_vectors(const FormValue& w, const Eigen::MatrixXd& vectors);

// Restriction J^* onto the span of an orthonormal frame (dim x k columns):
// components of the pulled-back form on the k-dimensional subspace.
FormValue restrict_to_frame(const FormValue& w, const Eigen::MatrixXd& frame);

// i_N then restriction; the contraction of a fully tangential slot pattern.
FormValue normal_contraction(const FormValue& w, const Eigen::VectorXd& normal,
                             const Eigen::MatrixXd& frame);

} // namespace hodgelab
