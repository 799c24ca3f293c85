#include "hodgelab/domain.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "hodgelab/errors.hpp"

namespace hodgelab {

Eigen::MatrixXd tangent_frame(const Eigen::VectorXd& n) {
  const int d = static_cast<int>(n.size());
  Eigen::MatrixXd frame(d, d - 1);
  int col = 0;
  for (int axis = 0; axis < d && col < d - 1; ++axis) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
    v(axis) = 1.0;
    v -= v.dot(n) * n;
    for (int j = 0; j < col; ++j) v -= v.dot(frame.col(j)) * frame.col(j);
    double len = v.norm();
    if (len < 1e-8) continue; // axis (numerically) parallel to the span so far
    frame.col(col++) = v / len;
  }
  if (col != d - 1) throw Error("tangent frame construction failed");
  return frame;
}

FlatDomain FlatDomain::ball(double radius, int dim) {
  if (!(radius > 0.0)) throw Error("ball radius must be positive");
  if (dim < 1 || dim > 3) throw UnsupportedDimension("ball domain only in dimension 1..3");
  FlatDomain d;
  d.kind_ = Kind::Ball;
  d.dim_ = dim;
  d.r1_ = radius;
  return d;
}

FlatDomain FlatDomain::box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
  const int dim = static_cast<int>(lo.size());
  if (dim < 1 || dim > 3 || hi.size() != dim)
    throw UnsupportedDimension("box domain only in dimension 1..3");
  for (int i = 0; i < dim; ++i)
    if (!(hi(i) > lo(i))) throw Error("box bounds must satisfy lo < hi");
  FlatDomain d;
  d.kind_ = Kind::Box;
  d.dim_ = dim;
  d.lo_ = lo;
  d.hi_ = hi;
  return d;
}

FlatDomain FlatDomain::annulus(double r0, double r1, int dim) {
  if (!(r0 > 0.0) || !(r1 > r0)) throw Error("annulus radii must satisfy 0 < r0 < r1");
  if (dim < 2 || dim > 3) throw UnsupportedDimension("annulus domain only in dimension 2 or 3");
  FlatDomain d;
  d.kind_ = Kind::Annulus;
  d.dim_ = dim;
  d.r0_ = r0;
  d.r1_ = r1;
  return d;
}

QuadratureRule FlatDomain::interior_rule(int order) const {
  switch (kind_) {
    case Kind::Ball: return quad_ball(r1_, dim_, order);
    case Kind::Box: return quad_box(lo_, hi_, order);
    case Kind::Annulus: return quad_annulus(r0_, r1_, dim_, order);
  }
  throw Error("unreachable");
}

QuadratureRule FlatDomain::boundary_rule(int order) const {
  if (kind_ == Kind::Ball) {
    if (dim_ == 1) {
      QuadratureRule r;
      r.exactness = 1000;
      Eigen::VectorXd a(1), b(1);
      a << -r1_;
      b << r1_;
      r.points = {a, b};
      r.weights = {1.0, 1.0}; // counting measure on the two endpoints
      return r;
    }
    return quad_sphere(r1_, dim_, order);
  }
  if (kind_ == Kind::Annulus) {
    QuadratureRule outer = quad_sphere(r1_, dim_, order);
    QuadratureRule inner = quad_sphere(r0_, dim_, order);
    outer.points.insert(outer.points.end(), inner.points.begin(), inner.points.end());
    outer.weights.insert(outer.weights.end(), inner.weights.begin(), inner.weights.end());
    return outer;
  }
  // box: tensor Gauss per face
  QuadratureRule rule;
  rule.exactness = order;
  for (int axis = 0; axis < dim_; ++axis) {
    for (int side = 0; side < 2; ++side) {
      double coord = side == 0 ? lo_(axis) : hi_(axis);
      if (dim_ == 1) {
        Eigen::VectorXd p(1);
        p << coord;
        rule.points.push_back(p);
        rule.weights.push_back(1.0);
        continue;
      }
      // face = box in the remaining axes
      Eigen::VectorXd flo(dim_ - 1), fhi(dim_ - 1);
      std::vector<int> rest;
      for (int i = 0; i < dim_; ++i)
        if (i != axis) rest.push_back(i);
      for (size_t i = 0; i < rest.size(); ++i) {
        flo(i) = lo_(rest[i]);
        fhi(i) = hi_(rest[i]);
      }
      QuadratureRule face = quad_box(flo, fhi, order);
      for (int q = 0; q < face.size(); ++q) {
        Eigen::VectorXd p(dim_);
        p(axis) = coord;
        for (size_t i = 0; i < rest.size(); ++i) p(rest[i]) = face.points[q](i);
        rule.points.push_back(p);
        rule.weights.push_back(face.weights[q]);
      }
    }
  }
  return rule;
}

bool FlatDomain::contains(const Eigen::VectorXd& x, double tol) const {
  if (x.size() != dim_) return false;
  switch (kind_) {
    case Kind::Ball: return x.norm() <= r1_ + tol;
    case Kind::Annulus: {
      double r = x.norm();
      return r >= r0_ - tol && r <= r1_ + tol;
    }
    case Kind::Box:
      for (int i = 0; i < dim_; ++i)
        if (x(i) < lo_(i) - tol || x(i) > hi_(i) + tol) return false;
      return true;
  }
  return false;
}

BoundaryPoint FlatDomain::boundary_point(const Eigen::VectorXd& x, double tol) const {
  if (x.size() != dim_) throw NotOnBoundary("point has wrong dimension");
  BoundaryPoint bp;
  bp.x = x;
  if (kind_ == Kind::Ball || kind_ == Kind::Annulus) {
    double r = x.norm();
    bool outer = std::abs(r - r1_) <= tol;
    bool inner = kind_ == Kind::Annulus && std::abs(r - r0_) <= tol;
    if (!outer && !inner) throw NotOnBoundary("point is not on a boundary sphere");
    if (dim_ == 1) {
      bp.normal = -x / r; // points toward the origin = into the interval
      bp.frame = Eigen::MatrixXd(1, 0);
      bp.eta = bp.mean = 0.0;
      bp.component = 0;
      return bp;
    }
    if (outer) {
      bp.normal = -x / r;        // inner normal of M
      bp.eta = 1.0 / r1_;        // S = -grad N = +Id/r on the outer sphere
      bp.component = 0;
    } else {
      bp.normal = x / r;         // inner normal points away from the hole
      bp.eta = -1.0 / r0_;
      bp.component = 1;
    }
    bp.mean = bp.eta;
    bp.frame = tangent_frame(bp.normal);
    return bp;
  }
  // box
  int axis = -1, side = 0;
  for (int i = 0; i < dim_ && axis < 0; ++i) {
    if (std::abs(x(i) - lo_(i)) <= tol) { axis = i; side = 0; }
    else if (std::abs(x(i) - hi_(i)) <= tol) { axis = i; side = 1; }
  }
  if (axis < 0) throw NotOnBoundary("point is not on a box face");
  bp.normal = Eigen::VectorXd::Zero(dim_);
  bp.normal(axis) = side == 0 ? 1.0 : -1.0; // into the box
  bp.eta = bp.mean = 0.0;
  bp.component = 2 * axis + side;
  if (dim_ == 1) bp.frame = Eigen::MatrixXd(1, 0);
  else bp.frame = tangent_frame(bp.normal);
  return bp;
}

std::vector<Eigen::VectorXd> FlatDomain::interior_samples(int count, std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<Eigen::VectorXd> pts;
  pts.reserve(count);
  while (static_cast<int>(pts.size()) < count) {
    Eigen::VectorXd x(dim_);
    if (kind_ == Kind::Box) {
      for (int i = 0; i < dim_; ++i) x(i) = lo_(i) + (unif(rng) * 0.5 + 0.5) * (hi_(i) - lo_(i));
      pts.push_back(x);
      continue;
    }
    for (int i = 0; i < dim_; ++i) x(i) = unif(rng) * r1_;
    double r = x.norm();
    if (r > r1_ * 0.999) continue;
    if (kind_ == Kind::Annulus && r < r0_ * 1.001) continue;
    pts.push_back(x);
  }
  return pts;
}

std::string FlatDomain::describe() const {
  std::ostringstream out;
  switch (kind_) {
    case Kind::Ball: out << "ball(R=" << r1_ << ", dim=" << dim_ << ")"; break;
    case Kind::Annulus:
      out << "annulus(r=" << r0_ << ", R=" << r1_ << ", dim=" << dim_ << ")";
      break;
    case Kind::Box: {
      out << "box(";
      for (int i = 0; i < dim_; ++i)
        out << (i ? " x " : "") << "[" << lo_(i) << "," << hi_(i) << "]";
      out << ")";
      break;
    }
  }
  return out.str();
}

} // namespace hodgelab
