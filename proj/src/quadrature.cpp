#include "hodgelab/quadrature.hpp"

#include <cmath>

#include "hodgelab/errors.hpp"

namespace hodgelab {

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  // Newton iteration on Legendre polynomials from the Chebyshev initial guess.
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const double pi = std::acos(-1.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      // evaluate P_n and P'_n by recurrence
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
}

namespace {

// Gauss nodes mapped to [a, b].
void gauss_on(double a, double b, int n, std::vector<double>& x, std::vector<double>& w) {
  gauss_legendre(n, x, w);
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    x[i] = mid + half * x[i];
    w[i] *= half;
  }
}

int radial_points(int order) { return order / 2 + 2; }
int azimuth_points(int order) { return 2 * order + 4; }

void check_order(int order) {
  if (order < 1 || order > 20) throw DomainError("quadrature order must lie in [1, 20]");
}

// Polar rule on an annulus r in [r0, r1] in dimension 2 or 3; r0 = 0 gives the ball.
QuadratureRule radial_rule(double r0, double r1, int dim, int order) {
  check_order(order);
  if (!(r1 > r0) || r0 < 0.0) throw DomainError("invalid radial bounds");
  QuadratureRule rule;
  rule.exactness = order;
  std::vector<double> rx, rw;
  gauss_on(r0, r1, radial_points(order) + order / 2 + 1, rx, rw);
  const double pi = std::acos(-1.0);
  if (dim == 2) {
    int m = azimuth_points(order);
    for (size_t i = 0; i < rx.size(); ++i) {
      for (int j = 0; j < m; ++j) {
        double th = 2.0 * pi * j / m;
        Eigen::VectorXd p(2);
        p << rx[i] * std::cos(th), rx[i] * std::sin(th);
        rule.points.push_back(p);
        rule.weights.push_back(rw[i] * rx[i] * 2.0 * pi / m);
      }
    }
    return rule;
  }
  if (dim == 3) {
    int nu = order + 2;
    std::vector<double> ux, uw;
    gauss_legendre(nu, ux, uw); // u = cos(theta) in [-1, 1]
    int m = azimuth_points(order);
    for (size_t i = 0; i < rx.size(); ++i) {
      for (int k = 0; k < nu; ++k) {
        double st = std::sqrt(std::max(0.0, 1.0 - ux[k] * ux[k]));
        for (int j = 0; j < m; ++j) {
          double ph = 2.0 * pi * j / m;
          Eigen::VectorXd p(3);
          p << rx[i] * st * std::cos(ph), rx[i] * st * std::sin(ph), rx[i] * ux[k];
          rule.points.push_back(p);
          rule.weights.push_back(rw[i] * rx[i] * rx[i] * uw[k] * 2.0 * pi / m);
        }
      }
    }
    return rule;
  }
  throw UnsupportedDimension("radial quadrature only in dimension 2 or 3");
}

} // namespace

QuadratureRule quad_interval(double a, double b, int order) {
  check_order(order);
  QuadratureRule rule;
  rule.exactness = order;
  std::vector<double> x, w;
  gauss_on(a, b, order / 2 + 1, x, w);
  for (size_t i = 0; i < x.size(); ++i) {
    Eigen::VectorXd p(1);
    p << x[i];
    rule.points.push_back(p);
    rule.weights.push_back(w[i]);
  }
  return rule;
}

QuadratureRule quad_box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi, int order) {
  check_order(order);
  const int d = static_cast<int>(lo.size());
  if (d < 1 || d > 3) throw UnsupportedDimension("box quadrature only in dimension 1..3");
  std::vector<std::vector<double>> xs(d), ws(d);
  for (int i = 0; i < d; ++i) gauss_on(lo(i), hi(i), order / 2 + 1, xs[i], ws[i]);
  QuadratureRule rule;
  rule.exactness = order;
  std::vector<int> idx(d, 0);
  while (true) {
    Eigen::VectorXd p(d);
    double w = 1.0;
    for (int i = 0; i < d; ++i) {
      p(i) = xs[i][idx[i]];
      w *= ws[i][idx[i]];
    }
    rule.points.push_back(p);
    rule.weights.push_back(w);
    int i = 0;
    for (; i < d; ++i) {
      if (++idx[i] < static_cast<int>(xs[i].size())) break;
      idx[i] = 0;
    }
    if (i == d) break;
  }
  return rule;
}

QuadratureRule quad_ball(double radius, int dim, int order) {
  if (dim == 1) return quad_interval(-radius, radius, order);
  return radial_rule(0.0, radius, dim, order);
}

QuadratureRule quad_annulus(double r0, double r1, int dim, int order) {
  if (!(r0 > 0.0)) throw DomainError("annulus inner radius must be positive");
  return radial_rule(r0, r1, dim, order);
}

QuadratureRule quad_sphere(double radius, int dim, int order) {
  check_order(order);
  QuadratureRule rule;
  rule.exactness = order;
  const double pi = std::acos(-1.0);
  if (dim == 2) {
    // circle of given radius
    int m = azimuth_points(order);
    for (int j = 0; j < m; ++j) {
      double th = 2.0 * pi * j / m;
      Eigen::VectorXd p(2);
      p << radius * std::cos(th), radius * std::sin(th);
      rule.points.push_back(p);
      rule.weights.push_back(radius * 2.0 * pi / m);
    }
    return rule;
  }
  if (dim == 3) {
    int nu = order + 2;
    std::vector<double> ux, uw;
    gauss_legendre(nu, ux, uw);
    int m = azimuth_points(order);
    for (int k = 0; k < nu; ++k) {
      double st = std::sqrt(std::max(0.0, 1.0 - ux[k] * ux[k]));
      for (int j = 0; j < m; ++j) {
        double ph = 2.0 * pi * j / m;
        Eigen::VectorXd p(3);
        p << radius * st * std::cos(ph), radius * st * std::sin(ph), radius * ux[k];
        rule.points.push_back(p);
        rule.weights.push_back(radius * radius * uw[k] * 2.0 * pi / m);
      }
    }
    return rule;
  }
  throw UnsupportedDimension("sphere quadrature only for ambient dimension 2 or 3");
}

QuadratureRule quad_ref_simplex(int k, int order) {
  check_order(order);
  if (k < 1 || k > 3) throw UnsupportedDimension("simplex quadrature only in dimension 1..3");
  // Duffy transform from [0,1]^k: t1 = u1, t_j = u_j * (1 - t1 - ... - t_{j-1}).
  // The Jacobian is polynomial, so Gauss with order+k points per axis is exact
  // for total degree <= order.
  int n = order / 2 + 1 + k;
  std::vector<double> x, w;
  gauss_on(0.0, 1.0, n, x, w);
  QuadratureRule rule;
  rule.exactness = order;
  std::vector<int> idx(k, 0);
  while (true) {
    Eigen::VectorXd t(k);
    double jac = 1.0, remaining = 1.0;
    for (int i = 0; i < k; ++i) {
      t(i) = x[idx[i]] * remaining;
      jac *= remaining;
      remaining -= t(i);
    }
    double wt = jac;
    for (int i = 0; i < k; ++i) wt *= w[idx[i]];
    rule.points.push_back(t);
    rule.weights.push_back(wt);
    int i = 0;
    for (; i < k; ++i) {
      if (++idx[i] < n) break;
      idx[i] = 0;
    }
    if (i == k) break;
  }
  return rule;
}

double pairwise_sum(std::vector<double>& terms) {
  // In-place pairwise reduction; deterministic for a fixed term order.
  size_t n = terms.size();
  if (n == 0) return 0.0;
  while (n > 1) {
    size_t half = (n + 1) / 2;
    for (size_t i = 0; i < n / 2; ++i) terms[i] = terms[2 * i] + terms[2 * i + 1];
    if (n % 2 == 1) terms[n / 2] = terms[n - 1];
    n = half;
  }
  return terms[0];
}

double integrate(const QuadratureRule& rule,
                 const std::function<double(const Eigen::VectorXd&)>& integrand) {
  std::vector<double> terms(rule.points.size());
  for (size_t i = 0; i < rule.points.size(); ++i)
    terms[i] = rule.weights[i] * integrand(rule.points[i]);
  return pairwise_sum(terms);
}

double integrate_weighted(const QuadratureRule& rule,
                          const std::function<double(const Eigen::VectorXd&)>& integrand,
                          const ScalarField& weight_f) {
  std::vector<double> terms(rule.points.size());
  for (size_t i = 0; i < rule.points.size(); ++i)
    terms[i] = rule.weights[i] * integrand(rule.points[i]) *
               std::exp(-weight_f.value(rule.points[i]));
  return pairwise_sum(terms);
}

} // namespace hodgelab
