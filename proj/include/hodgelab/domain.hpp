#pragma once

// Flat compact domains with boundary used by the identity laboratory:
// balls, boxes and annuli in R^1..R^3. The boundary geometry follows the
// fixed orientation ledger:
//   * N is the INNER unit normal,
//   * the shape operator is S(X) = -nabla_X N on the boundary tangent space,
//   * on the unit sphere (boundary of the unit ball) every principal
//     curvature is +1 and H = +1; the inner boundary sphere of an annulus
//     has principal curvatures -1/r with respect to the inner normal of M.

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "hodgelab/quadrature.hpp"

namespace hodgelab {

struct BoundaryPoint {
  Eigen::VectorXd x;      // position on the boundary
  Eigen::VectorXd normal; // inner unit normal N
  Eigen::MatrixXd frame;  // dim x (dim-1), orthonormal tangent frame
  double eta = 0.0;       // common principal curvature (all our faces are umbilic)
  double mean = 0.0;      // H = average principal curvature (= eta here)
  int component = 0;      // boundary component id
};

class FlatDomain {
public:
  enum class Kind : std::uint8_t { Ball, Box, Annulus };

  static FlatDomain ball(double radius, int dim);
  static FlatDomain box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi);
  static FlatDomain annulus(double r0, double r1, int dim);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  double radius() const { return r1_; }
  double inner_radius() const { return r0_; }

  QuadratureRule interior_rule(int order) const;
  QuadratureRule boundary_rule(int order) const;

  bool contains(const Eigen::VectorXd& x, double tol = 1e-12) const;

  // Boundary geometry at x; throws NotOnBoundary beyond tol.
  BoundaryPoint boundary_point(const Eigen::VectorXd& x, double tol = 1e-9) const;

  // A deterministic interior sample cloud (for hypothesis sampling).
  std::vector<Eigen::VectorXd> interior_samples(int count, std::uint64_t seed) const;

  std::string describe() const;

private:
  Kind kind_ = Kind::Ball;
  int dim_ = 2;
  double r0_ = 0.0, r1_ = 1.0;
  Eigen::VectorXd lo_, hi_;
};

// Orthonormal tangent frame completing the unit normal n, built by
// Gram-Schmidt over the seed axes e_1, e_2, ... in fixed order (deterministic).
Eigen::MatrixXd tangent_frame(const Eigen::VectorXd& n);

} // namespace hodgelab
