#pragma once

// Closed-form scalar fields as immutable expression trees. Fields are built
// either programmatically (operator overloads, deriv, subst) or parsed from
// the text grammar:
//
//   expr   := term (('+'|'-') term)*
//   term   := unary (('*'|'/') unary)*
//   unary  := ('+'|'-') unary | power
//   power  := primary ('^' unary)?          exponent must fold to a constant
//   primary:= number | x1..xD | r2 | exp(e) | sin(e) | cos(e) | sqrt(e)
//           | pow(e, const) | '(' expr ')'
//
// `r2` is the squared Euclidean norm of the evaluation point. Unknown
// identifiers and coordinates beyond the ambient dimension are rejected.

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include "hodgelab/jet.hpp"

namespace hodgelab {

class ScalarField {
public:
  ScalarField() = default; // empty field; evaluating it throws

  static ScalarField constant(double c);
  static ScalarField coordinate(int i); // zero-based
  static ScalarField r2();

  bool valid() const { return node_ != nullptr; }

  double value(const Eigen::VectorXd& x) const;
  Jet2 jet(const Eigen::VectorXd& x) const;

  // Exact symbolic partial derivative with respect to coordinate i.
  ScalarField deriv(int i) const;

  // Substitute coordinate i -> args[i]; classic composition f(X_1,...,X_D).
  ScalarField subst(const std::vector<ScalarField>& args) const;

  // True when no coordinate (or r2) node appears.
  bool is_constant() const;

  // Largest coordinate index used, -1 for constants; r2 reports -2 meaning
  // "all coordinates of the evaluation point".
  int max_coordinate() const;

  std::string to_string() const;

  friend ScalarField operator+(const ScalarField&, const ScalarField&);
  friend ScalarField operator-(const ScalarField&, const ScalarField&);
  friend ScalarField operator*(const ScalarField&, const ScalarField&);
  friend ScalarField operator/(const ScalarField&, const ScalarField&);
  friend ScalarField operator-(const ScalarField&);
  friend ScalarField pow(const ScalarField&, double);
  friend ScalarField exp(const ScalarField&);
  friend ScalarField sin(const ScalarField&);
  friend ScalarField cos(const ScalarField&);
  friend ScalarField sqrt(const ScalarField&);

  struct Node;
  using NodePtr = std::shared_ptr<const Node>;
  explicit ScalarField(NodePtr n) : node_(std::move(n)) {}
  const NodePtr& node() const { return node_; }

private:
  NodePtr node_;
};

inline ScalarField operator+(const ScalarField& a, double b) { return a + ScalarField::constant(b); }
inline ScalarField operator+(double a, const ScalarField& b) { return ScalarField::constant(a) + b; }
inline ScalarField operator-(const ScalarField& a, double b) { return a - ScalarField::constant(b); }
inline ScalarField operator-(double a, const ScalarField& b) { return ScalarField::constant(a) - b; }
inline ScalarField operator*(const ScalarField& a, double b) { return a * ScalarField::constant(b); }
inline ScalarField operator*(double a, const ScalarField& b) { return ScalarField::constant(a) * b; }
inline ScalarField operator/(const ScalarField& a, double b) { return a / ScalarField::constant(b); }
inline ScalarField operator/(double a, const ScalarField& b) { return ScalarField::constant(a) / b; }

// Parse a field string over coordinates x1..x<dim>. Throws ParseError with
// line/column on malformed input or out-of-range coordinates.
ScalarField parse_field(const std::string& text, int dim);

} // namespace hodgelab
