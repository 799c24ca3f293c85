#include "hodgelab/whitney.hpp"

#include "hodgelab/errors.hpp"
#include "hodgelab/multiindex.hpp"
#include "hodgelab/quadrature.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/QR>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>

namespace hodgelab {

namespace {

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

// all (p+1)-subsets of {0..k}, lexicographic
std::vector<std::vector<int>> vertex_subsets(int k, int p) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(cur.size()) == p + 1) {
      out.push_back(cur);
      return;
    }
    for (int v = start; v <= k; ++v) {
      cur.push_back(v);
      rec(v + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

// wedge of p covectors (columns of G) as a FormValue over R^dim
FormValue covector_wedge(const Eigen::MatrixXd& G) {
  const int dim = static_cast<int>(G.rows());
  const int p = static_cast<int>(G.cols());
  FormValue out(dim, p);
  const MultiIndexTable& table = MultiIndexTable::get(dim, p);
  for (int s = 0; s < table.count(); ++s) {
    const IndexTuple I = table.tuple(s);
    Eigen::MatrixXd minor(p, p);
    for (int r = 0; r < p; ++r)
      for (int c = 0; c < p; ++c) minor(r, c) = G(I[r], c);
    out.c[s] = minor.determinant();
  }
  return out;
}

Eigen::VectorXd barycentric(const Eigen::VectorXd& ref_point) {
  const int k = static_cast<int>(ref_point.size());
  Eigen::VectorXd lambda(k + 1);
  lambda[0] = 1.0 - ref_point.sum();
  lambda.tail(k) = ref_point;
  return lambda;
}

} // namespace

int simplex_index(const SimplicialComplex& K, int p, const std::vector<int>& tuple) {
  const auto& list = K.simplices[p];
  if (p == K.top_dim) {  // top cells keep generator order, not lexicographic
    auto it = std::find(list.begin(), list.end(), tuple);
    return it == list.end() ? -1 : static_cast<int>(it - list.begin());
  }
  auto it = std::lower_bound(list.begin(), list.end(), tuple);
  if (it == list.end() || *it != tuple) return -1;
  return static_cast<int>(it - list.begin());
}

CellFrame cell_frame(const SimplicialComplex& K, int cell) {
  const int k = K.top_dim;
  CellFrame fr;
  fr.ambient = K.simplex_coords(k, cell);
  Eigen::MatrixXd E(K.ambient_dim, k);
  for (int a = 0; a < k; ++a) E.col(a) = fr.ambient.col(a + 1) - fr.ambient.col(0);
  if (K.ambient_dim == k) {
    fr.tangent = Eigen::MatrixXd::Identity(k, k);
    fr.edges = E;
  } else {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(E);
    fr.tangent = qr.householderQ() * Eigen::MatrixXd::Identity(K.ambient_dim, k);
    fr.edges = fr.tangent.transpose() * E;
  }
  const double det = fr.edges.determinant();
  fr.volume = std::abs(det) / factorial(k);
  if (fr.volume < 1e-14)
    throw SingularCell("cell " + std::to_string(cell) + " has volume " +
                       std::to_string(fr.volume));
  fr.bgrad.resize(k, k + 1);
  const Eigen::MatrixXd MinvT = fr.edges.inverse().transpose();
  fr.bgrad.rightCols(k) = MinvT;
  fr.bgrad.col(0) = -MinvT.rowwise().sum();
  return fr;
}

FormValue whitney_basis(const CellFrame& fr, const std::vector<int>& S,
                        const Eigen::VectorXd& lambda) {
  const int k = static_cast<int>(fr.bgrad.rows());
  const int p = static_cast<int>(S.size()) - 1;
  if (p == 0) {
    FormValue out(k, 0);
    out.c[0] = lambda[S[0]];
    return out;
  }
  FormValue out(k, p);
  const double pf = factorial(p);
  Eigen::MatrixXd G(k, p);
  for (int a = 0; a <= p; ++a) {
    int col = 0;
    for (int b = 0; b <= p; ++b)
      if (b != a) G.col(col++) = fr.bgrad.col(S[b]);
    const double sign = (a % 2 == 0) ? 1.0 : -1.0;
    out = out + covector_wedge(G) * (pf * sign * lambda[S[a]]);
  }
  return out;
}

WeightedComplex assemble(const SimplicialComplex& K, const ScalarField& f, int quad_order) {
  if (quad_order < 2) throw DomainError("assemble: quadrature order must be >= 2");
  if (f.valid() && f.max_coordinate() >= K.ambient_dim)
    throw DomainError("assemble: weight uses coordinates beyond the ambient dimension");
  const int k = K.top_dim;
  WeightedComplex W;
  W.mesh = K;
  W.weight = f;
  W.quad_order = quad_order;
  W.mass.resize(k + 1);

  const QuadratureRule rule = quad_ref_simplex(k, quad_order);
  std::vector<std::vector<std::vector<int>>> subsets(k + 1);
  for (int p = 0; p <= k; ++p) subsets[p] = vertex_subsets(k, p);

  std::vector<std::vector<Eigen::Triplet<double>>> trip(k + 1);
  for (int cell = 0; cell < K.count(k); ++cell) {
    const CellFrame fr = cell_frame(K, cell);
    const double jac = fr.volume * factorial(k);
    const auto& tuple = K.simplices[k][cell];

    // weighted quadrature nodes
    std::vector<Eigen::VectorXd> lambdas(rule.size());
    std::vector<double> wq(rule.size());
    for (int q = 0; q < rule.size(); ++q) {
      lambdas[q] = barycentric(rule.points[q]);
      const Eigen::VectorXd x = fr.ambient * lambdas[q];
      wq[q] = rule.weights[q] * jac * std::exp(-f.value(x));
    }

    for (int p = 0; p <= k; ++p) {
      const auto& subs = subsets[p];
      const int nb = static_cast<int>(subs.size());
      std::vector<int> gidx(nb);
      for (int a = 0; a < nb; ++a) {
        if (p == k) {
          gidx[a] = cell;
          continue;
        }
        std::vector<int> t(subs[a].size());
        for (std::size_t i = 0; i < subs[a].size(); ++i) t[i] = tuple[subs[a][i]];
        gidx[a] = simplex_index(K, p, t);
      }
      Eigen::MatrixXd block = Eigen::MatrixXd::Zero(nb, nb);
      std::vector<FormValue> vals;
      vals.reserve(nb);
      for (int q = 0; q < rule.size(); ++q) {
        vals.clear();
        for (int a = 0; a < nb; ++a) vals.push_back(whitney_basis(fr, subs[a], lambdas[q]));
        for (int a = 0; a < nb; ++a)
          for (int b = a; b < nb; ++b) block(a, b) += wq[q] * inner(vals[a], vals[b]);
      }
      for (int a = 0; a < nb; ++a)
        for (int b = a; b < nb; ++b) {
          trip[p].emplace_back(gidx[a], gidx[b], block(a, b));
          if (a != b) trip[p].emplace_back(gidx[b], gidx[a], block(a, b));
        }
    }
  }

  for (int p = 0; p <= k; ++p) {
    W.mass[p].resize(K.count(p), K.count(p));
    W.mass[p].setFromTriplets(trip[p].begin(), trip[p].end());
    Eigen::SparseMatrix<double> t = W.mass[p].transpose();
    W.mass[p] = 0.5 * (W.mass[p] + t);
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(W.mass[p]);
    if (llt.info() != Eigen::Success)
      throw NotSPD("assemble: mass matrix of degree " + std::to_string(p) +
                   " is not positive definite");
  }
  return W;
}

Eigen::SparseMatrix<double> stiffness(const WeightedComplex& W, int p) {
  if (p < 0 || p >= W.mesh.top_dim)
    throw DegreeError("stiffness: degree must be below the top dimension");
  const auto& d = W.mesh.coboundary[p];
  return d.transpose() * W.mass[p + 1] * d;
}

Eigen::VectorXd spd_solve(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& b) {
  if (A.rows() <= 4000) {
    Eigen::LLT<Eigen::MatrixXd> llt{Eigen::MatrixXd(A)};
    if (llt.info() != Eigen::Success) throw NotSPD("spd_solve: Cholesky failed");
    return llt.solve(b);
  }
  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
  cg.setTolerance(1e-12);
  cg.setMaxIterations(20 * A.rows());
  cg.compute(A);
  Eigen::VectorXd x = cg.solve(b);
  if (cg.info() != Eigen::Success)
    throw ConvergenceFailure("spd_solve: conjugate gradients stalled at error " +
                             std::to_string(cg.error()));
  return x;
}

Eigen::VectorXd spsd_least_squares(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  if (A.rows() <= 4000) {
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
    return cod.solve(b);
  }
  // consistent singular system: CG iterates stay in the range component
  Eigen::ConjugateGradient<Eigen::MatrixXd, Eigen::Lower | Eigen::Upper> cg;
  cg.setTolerance(1e-12);
  cg.setMaxIterations(20 * A.rows());
  cg.compute(A);
  return cg.solveWithGuess(b, Eigen::VectorXd::Zero(b.size()).eval());
}

Cochain discrete_delta_f(const WeightedComplex& W, const Cochain& c) {
  const int p = c.degree;
  if (p < 1 || p > W.mesh.top_dim)
    throw DegreeError("discrete_delta_f: degree must be in 1..top");
  const Eigen::VectorXd rhs =
      W.mesh.coboundary[p - 1].transpose() * (W.mass[p] * c.coeffs);
  return Cochain{p - 1, spd_solve(W.mass[p - 1], rhs)};
}

HodgeParts hodge_decompose(const WeightedComplex& W, const Cochain& c) {
  const SimplicialComplex& K = W.mesh;
  for (const auto& cf : K.facet_cells_)
    if (cf.size() == 1)
      throw DomainError("hodge_decompose: complex must be closed");
  const int p = c.degree;
  const int n = K.count(p);
  HodgeParts out;
  out.exact = Cochain{p, Eigen::VectorXd::Zero(n)};
  out.coexact = Cochain{p, Eigen::VectorXd::Zero(n)};

  if (p > 0) {
    const auto& D = K.coboundary[p - 1];
    const Eigen::MatrixXd A = Eigen::MatrixXd(D.transpose() * W.mass[p] * D);
    const Eigen::VectorXd rhs = D.transpose() * (W.mass[p] * c.coeffs);
    out.exact.coeffs = D * spsd_least_squares(A, rhs);
  }
  if (p < K.top_dim) {
    const auto& D = K.coboundary[p];
    const Eigen::MatrixXd U = Eigen::MatrixXd(D.transpose() * W.mass[p + 1]);
    Eigen::LLT<Eigen::MatrixXd> mp(Eigen::MatrixXd(W.mass[p]));
    if (mp.info() != Eigen::Success) throw NotSPD("hodge_decompose: mass not SPD");
    const Eigen::MatrixXd A = U.transpose() * mp.solve(U);
    const Eigen::VectorXd rhs = U.transpose() * c.coeffs;
    const Eigen::VectorXd b = spsd_least_squares(A, rhs);
    out.coexact.coeffs = mp.solve(U * b);
  }
  out.harmonic = Cochain{p, c.coeffs - out.exact.coeffs - out.coexact.coeffs};
  return out;
}

int harmonic_dim(const WeightedComplex& W, int p) {
  const SimplicialComplex& K = W.mesh;
  if (p < 0 || p > K.top_dim) throw DegreeError("harmonic_dim: bad degree");
  const int n = K.count(p);
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  if (p < K.top_dim) {
    const auto& D = K.coboundary[p];
    L += Eigen::MatrixXd(D.transpose() * W.mass[p + 1] * D);
  }
  if (p > 0) {
    const Eigen::MatrixXd U =
        Eigen::MatrixXd(K.coboundary[p - 1].transpose() * W.mass[p]);
    Eigen::LLT<Eigen::MatrixXd> m(Eigen::MatrixXd(W.mass[p - 1]));
    if (m.info() != Eigen::Success) throw NotSPD("harmonic_dim: mass not SPD");
    L += U.transpose() * m.solve(U);
  }
  L = 0.5 * (L + L.transpose()).eval();

  const Eigen::VectorXd ev = [&] {
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(
        L, Eigen::MatrixXd(W.mass[p]), Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
    if (es.info() != Eigen::Success)
      throw ConvergenceFailure("harmonic_dim: eigensolver failed");
    return es.eigenvalues();
  }();

  const double lmax = std::max(ev.cwiseAbs().maxCoeff(), 0.0);
  if (lmax == 0.0) return n;  // identically zero pencil: everything harmonic
  double first_nonzero = lmax;
  for (int i = 0; i < n; ++i)
    if (ev[i] > 1e-8 * lmax) { first_nonzero = ev[i]; break; }
  const double eps_h = 1e-8 * first_nonzero;
  int count = 0;
  while (count < n && ev[count] < eps_h) ++count;
  if (count < n) {
    const double last_zero = count > 0 ? std::max(ev[count - 1], 1e-300) : 0.0;
    const bool thin_gap = (count > 0 && ev[count] < 10.0 * last_zero) ||
                          (count == 0 && ev[0] < 10.0 * eps_h && ev[0] >= eps_h);
    if (thin_gap)
      throw ThresholdAmbiguous("harmonic_dim: no clear spectral gap at eps=" +
                               std::to_string(eps_h));
  }
  return count;
}

Cochain de_rham_interpolate(const SimplicialComplex& K, const PFormField& omega,
                            int quad_order) {
  const int p = omega.degree();
  if (omega.dim() != K.ambient_dim)
    throw DomainError("de_rham_interpolate: form dimension mismatch");
  if (p > K.top_dim) throw DegreeError("de_rham_interpolate: degree above top dimension");
  const int order = std::max(quad_order, 4);

  Cochain out{p, Eigen::VectorXd::Zero(K.count(p))};
  if (p == 0) {
    for (int v = 0; v < K.count(0); ++v)
      out.coeffs[v] = omega.value(K.vertices.col(v)).c[0];
    return out;
  }
  const QuadratureRule rule = quad_ref_simplex(p, order);
  for (int i = 0; i < K.count(p); ++i) {
    const Eigen::MatrixXd X = K.simplex_coords(p, i);
    Eigen::MatrixXd E(K.ambient_dim, p);
    for (int a = 0; a < p; ++a) E.col(a) = X.col(a + 1) - X.col(0);
    // the affine-parameter integral over the reference simplex is exactly
    // the integral of the form over the oriented simplex
    std::vector<double> terms(rule.size());
    for (int q = 0; q < rule.size(); ++q) {
      const Eigen::VectorXd lam = barycentric(rule.points[q]);
      const Eigen::VectorXd x = X * lam;
      terms[q] = rule.weights[q] * eval_on_vectors(omega.value(x), E);
    }
    out.coeffs[i] = pairwise_sum(terms);
  }
  return out;
}

FormValue whitney_value(const SimplicialComplex& K, const Cochain& c, int cell,
                        const Eigen::VectorXd& lambda) {
  const int k = K.top_dim;
  const int p = c.degree;
  const CellFrame fr = cell_frame(K, cell);
  const auto subs = vertex_subsets(k, p);
  const auto& tuple = K.simplices[k][cell];
  FormValue out(k, p);
  for (const auto& S : subs) {
    int gi = cell;
    if (p < k) {
      std::vector<int> t(S.size());
      for (std::size_t i = 0; i < S.size(); ++i) t[i] = tuple[S[i]];
      gi = simplex_index(K, p, t);
    }
    out = out + whitney_basis(fr, S, lambda) * c.coeffs[gi];
  }
  return out;
}

int locate_cell(const SimplicialComplex& K, const Eigen::VectorXd& x,
                Eigen::VectorXd* lambda_out) {
  Eigen::VectorXd q = x;
  if (K.periodic)
    for (int d = 0; d < K.ambient_dim; ++d)
      q[d] -= K.periods[d] * std::floor(q[d] / K.periods[d]);

  int best = -1;
  double best_score = 1e300;
  Eigen::VectorXd best_lambda;
  for (int c = 0; c < K.count(K.top_dim); ++c) {
    const CellFrame fr = cell_frame(K, c);
    const Eigen::VectorXd rel = q - fr.ambient.col(0);
    const Eigen::VectorXd y = fr.tangent.transpose() * rel;
    const double off_plane = (rel - fr.tangent * y).norm();
    const Eigen::VectorXd lam_tail = fr.edges.partialPivLu().solve(y);
    Eigen::VectorXd lam(K.top_dim + 1);
    lam[0] = 1.0 - lam_tail.sum();
    lam.tail(K.top_dim) = lam_tail;
    const double inside_defect = std::max(0.0, -lam.minCoeff());
    const double score = off_plane + inside_defect;
    if (inside_defect < 1e-9 && score < best_score) {
      best = c;
      best_score = score;
      best_lambda = lam;
    }
  }
  if (best >= 0 && lambda_out) *lambda_out = best_lambda;
  return best;
}

FormValue whitney_reconstruct(const WeightedComplex& W, const Cochain& c,
                              const Eigen::VectorXd& x) {
  Eigen::VectorXd lam;
  const int cell = locate_cell(W.mesh, x, &lam);
  if (cell < 0) throw DomainError("whitney_reconstruct: point is not on the complex");
  return whitney_value(W.mesh, c, cell, lam);
}

} // namespace hodgelab
