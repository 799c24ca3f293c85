#pragma once

// Quadrature rules for the flat domains and their boundaries, plus reference
// simplex rules used by the finite element assembly.
//
//  - interval/box: tensor Gauss-Legendre
//  - ball/annulus (dim 2,3): radial Gauss x angular rules with the polar /
//    spherical Jacobian folded into the weights
//  - circle/sphere boundaries: uniform azimuth (trapezoid, exact for
//    trigonometric polynomials) x Gauss in cos(theta)
//  - simplex: Duffy-collapsed tensor Gauss (exact for total degree <= order)
//
// Weights always integrate the plain Lebesgue/surface measure; weighted
// integrals multiply by exp(-f) at the nodes.

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "hodgelab/expr.hpp"

namespace hodgelab {

struct QuadratureRule {
  std::vector<Eigen::VectorXd> points;
  std::vector<double> weights;
  int exactness = 0; // guaranteed polynomial exactness (total degree)

  int size() const { return static_cast<int>(points.size()); }
};

// Nodes/weights on [-1, 1], exact for degree <= 2n-1.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

QuadratureRule quad_interval(double a, double b, int order);
QuadratureRule quad_box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi, int order);
QuadratureRule quad_ball(double radius, int dim, int order);
QuadratureRule quad_annulus(double r0, double r1, int dim, int order);
QuadratureRule quad_sphere(double radius, int dim, int order); // dim = ambient dim (2 or 3)

// Reference simplex {x_i >= 0, sum x_i <= 1} in dimension k (1..3).
QuadratureRule quad_ref_simplex(int k, int order);

// Pairwise (fixed-order, deterministic) summation of w_i * g(x_i) * exp(-f(x_i)).
double integrate_weighted(const QuadratureRule& rule,
                          const std::function<double(const Eigen::VectorXd&)>& integrand,
                          const ScalarField& weight_f);

double integrate(const QuadratureRule& rule,
                 const std::function<double(const Eigen::VectorXd&)>& integrand);

double pairwise_sum(std::vector<double>& terms);

} // namespace hodgelab
