#pragma once

// Forward-mode second-order jets: value, gradient and (symmetric) Hessian of
// a scalar quantity with respect to the evaluation point. Arithmetic on Jet2
// propagates all three exactly, so expression trees evaluated on coordinate
// seeds yield machine-precision derivatives up to order two.

#include <Eigen/Dense>
#include <cmath>

#include "hodgelab/errors.hpp"

namespace hodgelab {

struct Jet2 {
  double v = 0.0;
  Eigen::VectorXd g; // dim
  Eigen::MatrixXd h; // dim x dim, symmetric

  Jet2() = default;
  Jet2(double value, Eigen::VectorXd grad, Eigen::MatrixXd hess)
      : v(value), g(std::move(grad)), h(std::move(hess)) {}

  int dim() const { return static_cast<int>(g.size()); }

  static Jet2 constant(int dim, double c) {
    return {c, Eigen::VectorXd::Zero(dim), Eigen::MatrixXd::Zero(dim, dim)};
  }
  static Jet2 coordinate(int dim, int i, double xi) {
    Jet2 j = constant(dim, xi);
    j.g(i) = 1.0;
    return j;
  }

  Jet2& operator+=(const Jet2& o) { v += o.v; g += o.g; h += o.h; return *this; }
  Jet2& operator-=(const Jet2& o) { v -= o.v; g -= o.g; h -= o.h; return *this; }
};

inline Jet2 operator+(Jet2 a, const Jet2& b) { a += b; return a; }
inline Jet2 operator-(Jet2 a, const Jet2& b) { a -= b; return a; }
inline Jet2 operator-(Jet2 a) { a.v = -a.v; a.g = -a.g; a.h = -a.h; return a; }
inline Jet2 operator*(const Jet2& a, double s) { return {a.v * s, a.g * s, a.h * s}; }
inline Jet2 operator*(double s, const Jet2& a) { return a * s; }
inline Jet2 operator+(const Jet2& a, double s) { Jet2 r = a; r.v += s; return r; }
inline Jet2 operator+(double s, const Jet2& a) { return a + s; }
inline Jet2 operator-(const Jet2& a, double s) { return a + (-s); }
inline Jet2 operator-(double s, const Jet2& a) { return (-a) + s; }

inline Jet2 operator*(const Jet2& a, const Jet2& b) {
  Eigen::MatrixXd cross = a.g * b.g.transpose();
  return {a.v * b.v,
          a.g * b.v + b.g * a.v,
          a.h * b.v + b.h * a.v + cross + cross.transpose()};
}

// Composition with a scalar function given its value and first two
// derivatives at a.v: g(a) has gradient g'(a) a' and Hessian
// g''(a) a'⊗a' + g'(a) a''.
inline Jet2 chain(const Jet2& a, double f, double df, double d2f) {
  return {f, df * a.g, d2f * (a.g * a.g.transpose()) + df * a.h};
}

inline Jet2 inverse(const Jet2& a) {
  if (a.v == 0.0) throw DomainError("division by zero in field evaluation");
  double iv = 1.0 / a.v;
  return chain(a, iv, -iv * iv, 2.0 * iv * iv * iv);
}

inline Jet2 operator/(const Jet2& a, const Jet2& b) { return a * inverse(b); }
inline Jet2 operator/(const Jet2& a, double s) { return a * (1.0 / s); }
inline Jet2 operator/(double s, const Jet2& a) { return inverse(a) * s; }

inline Jet2 exp(const Jet2& a) {
  double e = std::exp(a.v);
  return chain(a, e, e, e);
}
inline Jet2 sin(const Jet2& a) {
  double s = std::sin(a.v), c = std::cos(a.v);
  return chain(a, s, c, -s);
}
inline Jet2 cos(const Jet2& a) {
  double s = std::sin(a.v), c = std::cos(a.v);
  return chain(a, c, -s, -c);
}
inline Jet2 sqrt(const Jet2& a) {
  if (a.v <= 0.0) throw DomainError("sqrt of a non-positive value in field evaluation");
  double r = std::sqrt(a.v);
  return chain(a, r, 0.5 / r, -0.25 / (r * a.v));
}

// pow with a constant exponent. Integer exponents are valid on all of R
// (negative bases allowed); fractional exponents require a positive base.
inline Jet2 pow(const Jet2& a, double e) {
  double re = std::round(e);
  bool integral = (re == e) && std::abs(e) < 1e9;
  if (integral) {
    long n = static_cast<long>(re);
    if (n == 0) return Jet2::constant(a.dim(), 1.0);
    if (a.v == 0.0 && n < 0) throw DomainError("zero base with negative exponent");
    if (a.v == 0.0) {
      // derivative formulas below would produce 0^negative; handle directly
      double f = 0.0, df = (n == 1) ? 1.0 : 0.0, d2 = (n == 2) ? 2.0 : 0.0;
      return chain(a, f, df, d2);
    }
    double f = std::pow(a.v, static_cast<double>(n));
    double df = static_cast<double>(n) * f / a.v;
    double d2 = static_cast<double>(n) * (static_cast<double>(n) - 1.0) * f / (a.v * a.v);
    return chain(a, f, df, d2);
  }
  if (a.v <= 0.0) throw DomainError("fractional power of a non-positive base");
  double f = std::pow(a.v, e);
  return chain(a, f, e * f / a.v, e * (e - 1.0) * f / (a.v * a.v));
}

} // namespace hodgelab
