#include "hodgelab/smooth_ops.hpp"

#include "hodgelab/errors.hpp"

namespace hodgelab {

const char* const kConventionLedger = "conventions-v1";

namespace {

void require_degree(int degree, int dim, const char* what) {
  if (degree < 0 || degree > dim)
    throw DegreeError(std::string(what) + ": degree " + std::to_string(degree) +
                      " invalid in dimension " + std::to_string(dim));
}

} // namespace

FormValue ext_d(const FormJet1& w) {
  require_degree(w.degree, w.dim, "d");
  if (w.degree == w.dim) throw DegreeError("d of a top-degree form");
  const auto& out = MultiIndexTable::get(w.dim, w.degree + 1);
  const auto& in = MultiIndexTable::get(w.dim, w.degree);
  FormValue r(w.dim, w.degree + 1);
  for (int k = 0; k < out.count(); ++k) {
    const IndexTuple& K = out.tuple(k);
    double s = 0.0;
    for (int a = 0; a <= w.degree; ++a) {
      IndexTuple J{};
      int m = 0;
      for (int i = 0; i <= w.degree; ++i)
        if (i != a) J[m++] = K[i];
      int slot = in.slot_of(J); // K with one entry removed is already increasing
      double sign = (a % 2 == 0) ? 1.0 : -1.0;
      s += sign * w.der(slot, K[a]);
    }
    r.c(k) = s;
  }
  return r;
}

FormJet1 ext_d_jet(const FormJet2& w) {
  require_degree(w.degree, w.dim, "d");
  if (w.degree == w.dim) throw DegreeError("d of a top-degree form");
  const auto& out = MultiIndexTable::get(w.dim, w.degree + 1);
  const auto& in = MultiIndexTable::get(w.dim, w.degree);
  FormJet1 r;
  r.dim = w.dim;
  r.degree = w.degree + 1;
  r.val = Eigen::VectorXd::Zero(out.count());
  r.der = Eigen::MatrixXd::Zero(out.count(), w.dim);
  for (int k = 0; k < out.count(); ++k) {
    const IndexTuple& K = out.tuple(k);
    for (int a = 0; a <= w.degree; ++a) {
      IndexTuple J{};
      int m = 0;
      for (int i = 0; i <= w.degree; ++i)
        if (i != a) J[m++] = K[i];
      int slot = in.slot_of(J);
      double sign = (a % 2 == 0) ? 1.0 : -1.0;
      const Jet2& comp = w.comps[slot];
      r.val(k) += sign * comp.g(K[a]);
      for (int B = 0; B < w.dim; ++B) r.der(k, B) += sign * comp.h(K[a], B);
    }
  }
  return r;
}

FormValue codiff_f(const FormJet1& w, const Jet2& f) {
  require_degree(w.degree, w.dim, "delta_f");
  if (w.degree == 0) throw DegreeError("delta_f of a 0-form");
  const auto& out = MultiIndexTable::get(w.dim, w.degree - 1);
  const auto& in = MultiIndexTable::get(w.dim, w.degree);
  FormValue r(w.dim, w.degree - 1);
  for (int j = 0; j < out.count(); ++j) {
    const IndexTuple& J = out.tuple(j);
    double s = 0.0;
    for (int A = 0; A < w.dim; ++A) {
      IndexTuple AJ{};
      AJ[0] = A;
      for (int i = 0; i < w.degree - 1; ++i) AJ[i + 1] = J[i];
      SignedSlot sl = in.lookup(AJ);
      if (sl.sign == 0) continue;
      s += sl.sign * (-w.der(sl.slot, A) + f.g(A) * w.val(sl.slot));
    }
    r.c(j) = s;
  }
  return r;
}

FormJet1 codiff_f_jet(const FormJet2& w, const Jet2& f) {
  require_degree(w.degree, w.dim, "delta_f");
  if (w.degree == 0) throw DegreeError("delta_f of a 0-form");
  const auto& out = MultiIndexTable::get(w.dim, w.degree - 1);
  const auto& in = MultiIndexTable::get(w.dim, w.degree);
  FormJet1 r;
  r.dim = w.dim;
  r.degree = w.degree - 1;
  r.val = Eigen::VectorXd::Zero(out.count());
  r.der = Eigen::MatrixXd::Zero(out.count(), w.dim);
  for (int j = 0; j < out.count(); ++j) {
    const IndexTuple& J = out.tuple(j);
    for (int A = 0; A < w.dim; ++A) {
      IndexTuple AJ{};
      AJ[0] = A;
      for (int i = 0; i < w.degree - 1; ++i) AJ[i + 1] = J[i];
      SignedSlot sl = in.lookup(AJ);
      if (sl.sign == 0) continue;
      const Jet2& comp = w.comps[sl.slot];
      r.val(j) += sl.sign * (-comp.g(A) + f.g(A) * comp.v);
      for (int B = 0; B < w.dim; ++B)
        r.der(j, B) += sl.sign * (-comp.h(A, B) + f.h(A, B) * comp.v + f.g(A) * comp.g(B));
    }
  }
  return r;
}

FormValue hodge_laplacian_f(const FormJet2& w, const Jet2& f) {
  require_degree(w.degree, w.dim, "hodge_laplacian_f");
  FormValue result(w.dim, w.degree);
  if (w.degree > 0) result += ext_d(codiff_f_jet(w, f));
  if (w.degree < w.dim) result += codiff_f(ext_d_jet(w), f);
  return result;
}

FormValue rough_laplacian_f(const FormJet2& w, const Jet2& f) {
  require_degree(w.degree, w.dim, "rough_laplacian_f");
  FormValue r(w.dim, w.degree);
  for (size_t i = 0; i < w.comps.size(); ++i)
    r.c(i) = -w.comps[i].h.trace() + f.g.dot(w.comps[i].g);
  return r;
}

Jet2 norm2_jet(const FormJet2& w) {
  Jet2 s = Jet2::constant(w.dim, 0.0);
  for (const Jet2& comp : w.comps) {
    s.v += comp.v * comp.v;
    s.g += 2.0 * comp.v * comp.g;
    Eigen::MatrixXd outer = comp.g * comp.g.transpose();
    s.h += 2.0 * (outer + comp.v * comp.h);
  }
  return s;
}

FormValue induced_op(const Eigen::MatrixXd& T, const FormValue& w) {
  const auto& tab = MultiIndexTable::get(w.dim, w.degree);
  FormValue r(w.dim, w.degree);
  for (int i = 0; i < tab.count(); ++i) {
    const IndexTuple& I = tab.tuple(i);
    double s = 0.0;
    for (int a = 0; a < w.degree; ++a) {
      for (int B = 0; B < w.dim; ++B) {
        double t = T(B, I[a]); // component B of T(e_{I_a})
        if (t == 0.0) continue;
        IndexTuple mod = I;
        mod[a] = B;
        s += t * w.coeff(mod);
      }
    }
    r.c(i) = s;
  }
  return r;
}

FormValue contract(const Eigen::VectorXd& X, const FormValue& w) {
  require_degree(w.degree, w.dim, "contract");
  if (w.degree == 0) throw DegreeError("interior product with a 0-form");
  const auto& out = MultiIndexTable::get(w.dim, w.degree - 1);
  FormValue r(w.dim, w.degree - 1);
  for (int j = 0; j < out.count(); ++j) {
    const IndexTuple& J = out.tuple(j);
    double s = 0.0;
    for (int A = 0; A < w.dim; ++A) {
      IndexTuple AJ{};
      AJ[0] = A;
      for (int i = 0; i < w.degree - 1; ++i) AJ[i + 1] = J[i];
      s += X(A) * w.coeff(AJ);
    }
    r.c(j) = s;
  }
  return r;
}

FormJet1 contract_jet(const Eigen::VectorXd& Xval, const Eigen::MatrixXd& Xder,
                      const FormJet2& w) {
  require_degree(w.degree, w.dim, "contract");
  if (w.degree == 0) throw DegreeError("interior product with a 0-form");
  const auto& out = MultiIndexTable::get(w.dim, w.degree - 1);
  const auto& in = MultiIndexTable::get(w.dim, w.degree);
  FormJet1 r;
  r.dim = w.dim;
  r.degree = w.degree - 1;
  r.val = Eigen::VectorXd::Zero(out.count());
  r.der = Eigen::MatrixXd::Zero(out.count(), w.dim);
  for (int j = 0; j < out.count(); ++j) {
    const IndexTuple& J = out.tuple(j);
    for (int A = 0; A < w.dim; ++A) {
      IndexTuple AJ{};
      AJ[0] = A;
      for (int i = 0; i < w.degree - 1; ++i) AJ[i + 1] = J[i];
      SignedSlot sl = in.lookup(AJ);
      if (sl.sign == 0) continue;
      const Jet2& comp = w.comps[sl.slot];
      r.val(j) += sl.sign * Xval(A) * comp.v;
      for (int B = 0; B < w.dim; ++B)
        r.der(j, B) += sl.sign * (Xder(A, B) * comp.v + Xval(A) * comp.g(B));
    }
  }
  return r;
}

FormValue dir_deriv(const Eigen::VectorXd& X, const FormJet1& w) {
  FormValue r(w.dim, w.degree);
  r.c = w.der * X;
  return r;
}

FormValue wedge1(const Eigen::VectorXd& a, const FormValue& w) {
  require_degree(w.degree, w.dim, "wedge");
  if (w.degree == w.dim) throw DegreeError("wedge of a 1-form with a top-degree form");
  const auto& out = MultiIndexTable::get(w.dim, w.degree + 1);
  FormValue r(w.dim, w.degree + 1);
  for (int k = 0; k < out.count(); ++k) {
    const IndexTuple& K = out.tuple(k);
    double s = 0.0;
    for (int j = 0; j <= w.degree; ++j) {
      IndexTuple rest{};
      int m = 0;
      for (int i = 0; i <= w.degree; ++i)
        if (i != j) rest[m++] = K[i];
      double sign = (j % 2 == 0) ? 1.0 : -1.0;
      s += sign * a(K[j]) * w.coeff(rest);
    }
    r.c(k) = s;
  }
  return r;
}

FormJet1 wedge1_jet(const Eigen::VectorXd& aval, const Eigen::MatrixXd& ader,
                    const FormJet2& w) {
  require_degree(w.degree, w.dim, "wedge");
  if (w.degree == w.dim) throw DegreeError("wedge of a 1-form with a top-degree form");
  const auto& out = MultiIndexTable::get(w.dim, w.degree + 1);
  const auto& in = MultiIndexTable::get(w.dim, w.degree);
  FormJet1 r;
  r.dim = w.dim;
  r.degree = w.degree + 1;
  r.val = Eigen::VectorXd::Zero(out.count());
  r.der = Eigen::MatrixXd::Zero(out.count(), w.dim);
  for (int k = 0; k < out.count(); ++k) {
    const IndexTuple& K = out.tuple(k);
    for (int j = 0; j <= w.degree; ++j) {
      IndexTuple rest{};
      int m = 0;
      for (int i = 0; i <= w.degree; ++i)
        if (i != j) rest[m++] = K[i];
      int slot = in.slot_of(rest);
      double sign = (j % 2 == 0) ? 1.0 : -1.0;
      const Jet2& comp = w.comps[slot];
      r.val(k) += sign * aval(K[j]) * comp.v;
      for (int B = 0; B < w.dim; ++B)
        r.der(k, B) += sign * (ader(K[j], B) * comp.v + aval(K[j]) * comp.g(B));
    }
  }
  return r;
}

FormValue star(const FormValue& w) {
  require_degree(w.degree, w.dim, "star");
  const auto& in = MultiIndexTable::get(w.dim, w.degree);
  const auto& out = MultiIndexTable::get(w.dim, w.dim - w.degree);
  FormValue r(w.dim, w.dim - w.degree);
  for (int i = 0; i < in.count(); ++i) {
    int cs = in.complement_slot(i, out);
    r.c(cs) = in.star_sign(i) * w.c(i);
  }
  return r;
}

double eval_on_vectors(const FormValue& w, const Eigen::MatrixXd& vectors) {
  // vectors: dim x p, column j = j-th argument
  const int p = w.degree;
  if (p == 0) return w.c.size() ? w.c(0) : 0.0;
  if (static_cast<int>(vectors.cols()) != p) throw Error("eval_on_vectors: arity mismatch");
  const auto& tab = MultiIndexTable::get(w.dim, p);
  double s = 0.0;
  Eigen::MatrixXd minor(p, p);
  for (int i = 0; i < tab.count(); ++i) {
    if (w.c(i) == 0.0) continue;
    const IndexTuple& I = tab.tuple(i);
    for (int r = 0; r < p; ++r)
      for (int c = 0; c < p; ++c) minor(r, c) = vectors(I[r], c);
    s += w.c(i) * minor.determinant();
  }
  return s;
}

FormValue restrict_to_frame(const FormValue& w, const Eigen::MatrixXd& frame) {
  const int n = static_cast<int>(frame.cols());
  const int p = w.degree;
  if (p > n) {
    FormValue r;
    r.dim = n;
    r.degree = p;
    r.c = Eigen::VectorXd();
    return r;
  }
  const auto& tab = MultiIndexTable::get(n, p);
  FormValue r(n, p);
  Eigen::MatrixXd args(w.dim, p);
  for (int s = 0; s < tab.count(); ++s) {
    const IndexTuple& A = tab.tuple(s);
    for (int c = 0; c < p; ++c) args.col(c) = frame.col(A[c]);
    r.c(s) = eval_on_vectors(w, args);
  }
  return r;
}

FormValue normal_contraction(const FormValue& w, const Eigen::VectorXd& normal,
                             const Eigen::MatrixXd& frame) {
  const int n = static_cast<int>(frame.cols());
  const int p = w.degree;
  if (p == 0 || p - 1 > n) {
    FormValue r;
    r.dim = n;
    r.degree = p - 1;
    r.c = Eigen::VectorXd();
    if (p - 1 == 0 && p != 0) r = FormValue(n, 0); // cannot happen: p-1>n && p-1==0 => n<0
    if (p == 0) { r.degree = -1; }
    return r;
  }
  const auto& tab = MultiIndexTable::get(n, p - 1);
  FormValue r(n, p - 1);
  Eigen::MatrixXd args(w.dim, p);
  args.col(0) = normal;
  for (int s = 0; s < tab.count(); ++s) {
    const IndexTuple& A = tab.tuple(s);
    for (int c = 0; c < p - 1; ++c) args.col(c + 1) = frame.col(A[c]);
    r.c(s) = eval_on_vectors(w, args);
  }
  return r;
}

} // namespace hodgelab
