#include "hodgelab/fields.hpp"

#include <functional>

#include "hodgelab/errors.hpp"

namespace hodgelab {

PFormField::PFormField(int dim, int degree) : dim_(dim), degree_(degree) {
  const auto& tab = MultiIndexTable::get(dim, degree);
  comps_.assign(tab.count(), ScalarField::constant(0.0));
}

FormValue PFormField::value(const Eigen::VectorXd& x) const {
  FormValue v(dim_, degree_);
  for (int i = 0; i < ncomp(); ++i) v.c(i) = comps_[i].value(x);
  return v;
}

FormJet1 PFormField::jet1(const Eigen::VectorXd& x) const {
  // Full jets are cheap enough; reuse jet2 and drop the Hessian.
  return jet2(x).jet1();
}

FormJet2 PFormField::jet2(const Eigen::VectorXd& x) const {
  FormJet2 j;
  j.dim = dim_;
  j.degree = degree_;
  j.comps.reserve(comps_.size());
  for (const auto& f : comps_) j.comps.push_back(f.jet(x));
  return j;
}

PFormField PFormField::d_symbolic() const {
  if (degree_ == dim_) throw DegreeError("d of a top-degree form");
  const auto& out = MultiIndexTable::get(dim_, degree_ + 1);
  const auto& in = MultiIndexTable::get(dim_, degree_);
  PFormField r(dim_, degree_ + 1);
  for (int k = 0; k < out.count(); ++k) {
    const IndexTuple& K = out.tuple(k);
    ScalarField s = ScalarField::constant(0.0);
    for (int a = 0; a <= degree_; ++a) {
      IndexTuple J{};
      int m = 0;
      for (int i = 0; i <= degree_; ++i)
        if (i != a) J[m++] = K[i];
      int slot = in.slot_of(J);
      ScalarField term = comps_[slot].deriv(K[a]);
      s = (a % 2 == 0) ? s + term : s - term;
    }
    r.comp(k) = s;
  }
  return r;
}

PFormField PFormField::scaled(const ScalarField& g) const {
  PFormField r(dim_, degree_);
  for (int i = 0; i < ncomp(); ++i) r.comp(i) = g * comps_[i];
  return r;
}

PFormField gradient_field(const ScalarField& u, int dim) {
  PFormField r(dim, 1);
  for (int i = 0; i < dim; ++i) r.comp(i) = u.deriv(i);
  return r;
}

Eigen::VectorXd VectorField::value(const Eigen::VectorXd& x) const {
  Eigen::VectorXd v(dim());
  for (int i = 0; i < dim(); ++i) v(i) = comps[i].value(x);
  return v;
}

void VectorField::jet1(const Eigen::VectorXd& x, Eigen::VectorXd& val,
                       Eigen::MatrixXd& der) const {
  val.resize(dim());
  der.resize(dim(), dim());
  for (int i = 0; i < dim(); ++i) {
    Jet2 j = comps[i].jet(x);
    val(i) = j.v;
    der.row(i) = j.g.transpose();
  }
}

VectorField gradient_vector(const ScalarField& u, int dim) {
  VectorField f;
  f.comps.reserve(dim);
  for (int i = 0; i < dim; ++i) f.comps.push_back(u.deriv(i));
  return f;
}

ScalarField random_polynomial(int dim, int max_degree, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  // enumerate monomials x^a with |a| <= max_degree in a fixed order
  ScalarField sum = ScalarField::constant(coeff(rng));
  std::vector<int> expo(dim, 0);
  std::function<void(int, int)> walk = [&](int pos, int remaining) {
    if (pos == dim) {
      int total = 0;
      for (int e : expo) total += e;
      if (total == 0) return; // constant already added
      ScalarField mono = ScalarField::constant(coeff(rng));
      for (int i = 0; i < dim; ++i)
        for (int k = 0; k < expo[i]; ++k) mono = mono * ScalarField::coordinate(i);
      sum = sum + mono;
      return;
    }
    for (int e = 0; e <= remaining; ++e) {
      expo[pos] = e;
      walk(pos + 1, remaining - e);
    }
    expo[pos] = 0;
  };
  walk(0, max_degree);
  return sum;
}

PFormField random_form(int dim, int degree, int max_degree, std::mt19937_64& rng) {
  PFormField r(dim, degree);
  for (int i = 0; i < r.ncomp(); ++i) r.comp(i) = random_polynomial(dim, max_degree, rng);
  return r;
}

} // namespace hodgelab
