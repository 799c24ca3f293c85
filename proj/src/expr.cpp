#include "hodgelab/expr.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

#include "hodgelab/errors.hpp"
#include "hodgelab/multiindex.hpp"

namespace hodgelab {

enum class Op { Const, Coord, R2, Add, Sub, Mul, Div, Neg, Pow, Exp, Sin, Cos, Sqrt };

struct ScalarField::Node {
  Op op;
  double c = 0.0; // Const value, or Pow exponent
  int coord = -1;
  NodePtr a, b;
};

namespace {

using Node = ScalarField::Node;
using NodePtr = ScalarField::NodePtr;

NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr, double c = 0.0, int coord = -1) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->c = c;
  n->coord = coord;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

NodePtr konst(double c) { return make(Op::Const, nullptr, nullptr, c); }

bool is_const(const NodePtr& n, double v) { return n->op == Op::Const && n->c == v; }

// Light simplification keeps symbolic derivatives from ballooning.
NodePtr add(NodePtr a, NodePtr b) {
  if (a->op == Op::Const && b->op == Op::Const) return konst(a->c + b->c);
  if (is_const(a, 0.0)) return b;
  if (is_const(b, 0.0)) return a;
  return make(Op::Add, std::move(a), std::move(b));
}
NodePtr sub(NodePtr a, NodePtr b) {
  if (a->op == Op::Const && b->op == Op::Const) return konst(a->c - b->c);
  if (is_const(b, 0.0)) return a;
  if (is_const(a, 0.0)) return make(Op::Neg, std::move(b));
  return make(Op::Sub, std::move(a), std::move(b));
}
NodePtr mul(NodePtr a, NodePtr b) {
  if (a->op == Op::Const && b->op == Op::Const) return konst(a->c * b->c);
  if (is_const(a, 0.0) || is_const(b, 0.0)) return konst(0.0);
  if (is_const(a, 1.0)) return b;
  if (is_const(b, 1.0)) return a;
  return make(Op::Mul, std::move(a), std::move(b));
}
NodePtr divide(NodePtr a, NodePtr b) {
  if (is_const(a, 0.0) && !is_const(b, 0.0)) return konst(0.0);
  if (is_const(b, 1.0)) return a;
  return make(Op::Div, std::move(a), std::move(b));
}
NodePtr neg(NodePtr a) {
  if (a->op == Op::Const) return konst(-a->c);
  if (a->op == Op::Neg) return a->a;
  return make(Op::Neg, std::move(a));
}

double eval_value(const Node* n, const Eigen::VectorXd& x) {
  switch (n->op) {
    case Op::Const: return n->c;
    case Op::Coord:
      if (n->coord >= x.size())
        throw DomainError("coordinate x" + std::to_string(n->coord + 1) +
                          " unavailable in dimension " + std::to_string(x.size()));
      return x(n->coord);
    case Op::R2: return x.squaredNorm();
    case Op::Add: return eval_value(n->a.get(), x) + eval_value(n->b.get(), x);
    case Op::Sub: return eval_value(n->a.get(), x) - eval_value(n->b.get(), x);
    case Op::Mul: return eval_value(n->a.get(), x) * eval_value(n->b.get(), x);
    case Op::Div: {
      double d = eval_value(n->b.get(), x);
      if (d == 0.0) throw DomainError("division by zero in field evaluation");
      return eval_value(n->a.get(), x) / d;
    }
    case Op::Neg: return -eval_value(n->a.get(), x);
    case Op::Pow: {
      Jet2 j = pow(Jet2::constant(0, eval_value(n->a.get(), x)), n->c);
      return j.v;
    }
    case Op::Exp: return std::exp(eval_value(n->a.get(), x));
    case Op::Sin: return std::sin(eval_value(n->a.get(), x));
    case Op::Cos: return std::cos(eval_value(n->a.get(), x));
    case Op::Sqrt: {
      double v = eval_value(n->a.get(), x);
      if (v <= 0.0) throw DomainError("sqrt of a non-positive value in field evaluation");
      return std::sqrt(v);
    }
  }
  throw Error("unreachable field op");
}

Jet2 eval_jet(const Node* n, const Eigen::VectorXd& x) {
  const int d = static_cast<int>(x.size());
  switch (n->op) {
    case Op::Const: return Jet2::constant(d, n->c);
    case Op::Coord:
      if (n->coord >= d)
        throw DomainError("coordinate x" + std::to_string(n->coord + 1) +
                          " unavailable in dimension " + std::to_string(d));
      return Jet2::coordinate(d, n->coord, x(n->coord));
    case Op::R2: {
      Jet2 j(x.squaredNorm(), 2.0 * x, 2.0 * Eigen::MatrixXd::Identity(d, d));
      return j;
    }
    case Op::Add: return eval_jet(n->a.get(), x) + eval_jet(n->b.get(), x);
    case Op::Sub: return eval_jet(n->a.get(), x) - eval_jet(n->b.get(), x);
    case Op::Mul: return eval_jet(n->a.get(), x) * eval_jet(n->b.get(), x);
    case Op::Div: return eval_jet(n->a.get(), x) / eval_jet(n->b.get(), x);
    case Op::Neg: return -eval_jet(n->a.get(), x);
    case Op::Pow: return pow(eval_jet(n->a.get(), x), n->c);
    case Op::Exp: return exp(eval_jet(n->a.get(), x));
    case Op::Sin: return sin(eval_jet(n->a.get(), x));
    case Op::Cos: return cos(eval_jet(n->a.get(), x));
    case Op::Sqrt: return sqrt(eval_jet(n->a.get(), x));
  }
  throw Error("unreachable field op");
}

NodePtr diff(const NodePtr& n, int i) {
  switch (n->op) {
    case Op::Const: return konst(0.0);
    case Op::Coord: return konst(n->coord == i ? 1.0 : 0.0);
    case Op::R2: return mul(konst(2.0), make(Op::Coord, nullptr, nullptr, 0.0, i));
    case Op::Add: return add(diff(n->a, i), diff(n->b, i));
    case Op::Sub: return sub(diff(n->a, i), diff(n->b, i));
    case Op::Mul: return add(mul(diff(n->a, i), n->b), mul(n->a, diff(n->b, i)));
    case Op::Div:
      return divide(sub(mul(diff(n->a, i), n->b), mul(n->a, diff(n->b, i))),
                    mul(n->b, n->b));
    case Op::Neg: return neg(diff(n->a, i));
    case Op::Pow:
      if (n->c == 0.0) return konst(0.0);
      return mul(mul(konst(n->c), make(Op::Pow, n->a, nullptr, n->c - 1.0)), diff(n->a, i));
    case Op::Exp: return mul(make(Op::Exp, n->a), diff(n->a, i));
    case Op::Sin: return mul(make(Op::Cos, n->a), diff(n->a, i));
    case Op::Cos: return neg(mul(make(Op::Sin, n->a), diff(n->a, i)));
    case Op::Sqrt:
      return divide(diff(n->a, i), mul(konst(2.0), make(Op::Sqrt, n->a)));
  }
  throw Error("unreachable field op");
}

NodePtr substitute(const NodePtr& n, const std::vector<NodePtr>& args) {
  switch (n->op) {
    case Op::Const: return n;
    case Op::Coord:
      if (n->coord >= static_cast<int>(args.size()))
        throw DomainError("substitution misses coordinate x" + std::to_string(n->coord + 1));
      return args[n->coord];
    case Op::R2: {
      // r2 expands to the sum of squared substituted coordinates
      NodePtr s = konst(0.0);
      for (const auto& a : args) s = add(s, mul(a, a));
      return s;
    }
    case Op::Neg: return neg(substitute(n->a, args));
    case Op::Pow: return make(Op::Pow, substitute(n->a, args), nullptr, n->c);
    case Op::Exp: return make(Op::Exp, substitute(n->a, args));
    case Op::Sin: return make(Op::Sin, substitute(n->a, args));
    case Op::Cos: return make(Op::Cos, substitute(n->a, args));
    case Op::Sqrt: return make(Op::Sqrt, substitute(n->a, args));
    case Op::Add: return add(substitute(n->a, args), substitute(n->b, args));
    case Op::Sub: return sub(substitute(n->a, args), substitute(n->b, args));
    case Op::Mul: return mul(substitute(n->a, args), substitute(n->b, args));
    case Op::Div: return divide(substitute(n->a, args), substitute(n->b, args));
  }
  throw Error("unreachable field op");
}

bool node_is_constant(const Node* n) {
  switch (n->op) {
    case Op::Const: return true;
    case Op::Coord:
    case Op::R2: return false;
    case Op::Neg:
    case Op::Pow:
    case Op::Exp:
    case Op::Sin:
    case Op::Cos:
    case Op::Sqrt: return node_is_constant(n->a.get());
    default: return node_is_constant(n->a.get()) && node_is_constant(n->b.get());
  }
}

int node_max_coord(const Node* n) {
  switch (n->op) {
    case Op::Const: return -1;
    case Op::Coord: return n->coord;
    case Op::R2: return -2;
    case Op::Neg:
    case Op::Pow:
    case Op::Exp:
    case Op::Sin:
    case Op::Cos:
    case Op::Sqrt: return node_max_coord(n->a.get());
    default: {
      int a = node_max_coord(n->a.get()), b = node_max_coord(n->b.get());
      if (a == -2 || b == -2) return -2;
      return a > b ? a : b;
    }
  }
}

void print_node(const Node* n, std::ostringstream& out) {
  switch (n->op) {
    case Op::Const: out << n->c; return;
    case Op::Coord: out << "x" << (n->coord + 1); return;
    case Op::R2: out << "r2"; return;
    case Op::Add: out << "("; print_node(n->a.get(), out); out << " + "; print_node(n->b.get(), out); out << ")"; return;
    case Op::Sub: out << "("; print_node(n->a.get(), out); out << " - "; print_node(n->b.get(), out); out << ")"; return;
    case Op::Mul: out << "("; print_node(n->a.get(), out); out << "*"; print_node(n->b.get(), out); out << ")"; return;
    case Op::Div: out << "("; print_node(n->a.get(), out); out << "/"; print_node(n->b.get(), out); out << ")"; return;
    case Op::Neg: out << "(-"; print_node(n->a.get(), out); out << ")"; return;
    case Op::Pow: out << "pow("; print_node(n->a.get(), out); out << ", " << n->c << ")"; return;
    case Op::Exp: out << "exp("; print_node(n->a.get(), out); out << ")"; return;
    case Op::Sin: out << "sin("; print_node(n->a.get(), out); out << ")"; return;
    case Op::Cos: out << "cos("; print_node(n->a.get(), out); out << ")"; return;
    case Op::Sqrt: out << "sqrt("; print_node(n->a.get(), out); out << ")"; return;
  }
}

} // namespace

ScalarField ScalarField::constant(double c) { return ScalarField(konst(c)); }
ScalarField ScalarField::coordinate(int i) {
  if (i < 0) throw DomainError("negative coordinate index");
  return ScalarField(make(Op::Coord, nullptr, nullptr, 0.0, i));
}
ScalarField ScalarField::r2() { return ScalarField(make(Op::R2)); }

double ScalarField::value(const Eigen::VectorXd& x) const {
  if (!node_) throw Error("evaluating an empty scalar field");
  return eval_value(node_.get(), x);
}

Jet2 ScalarField::jet(const Eigen::VectorXd& x) const {
  if (!node_) throw Error("evaluating an empty scalar field");
  return eval_jet(node_.get(), x);
}

ScalarField ScalarField::deriv(int i) const {
  if (!node_) throw Error("differentiating an empty scalar field");
  return ScalarField(diff(node_, i));
}

ScalarField ScalarField::subst(const std::vector<ScalarField>& args) const {
  if (!node_) throw Error("substituting into an empty scalar field");
  std::vector<NodePtr> a;
  a.reserve(args.size());
  for (const auto& f : args) {
    if (!f.valid()) throw Error("substituting an empty scalar field");
    a.push_back(f.node());
  }
  return ScalarField(substitute(node_, a));
}

bool ScalarField::is_constant() const { return node_ && node_is_constant(node_.get()); }
int ScalarField::max_coordinate() const { return node_ ? node_max_coord(node_.get()) : -1; }

std::string ScalarField::to_string() const {
  if (!node_) return "<empty>";
  std::ostringstream out;
  out.precision(17);
  print_node(node_.get(), out);
  return out.str();
}

ScalarField operator+(const ScalarField& a, const ScalarField& b) { return ScalarField(add(a.node_, b.node_)); }
ScalarField operator-(const ScalarField& a, const ScalarField& b) { return ScalarField(sub(a.node_, b.node_)); }
ScalarField operator*(const ScalarField& a, const ScalarField& b) { return ScalarField(mul(a.node_, b.node_)); }
ScalarField operator/(const ScalarField& a, const ScalarField& b) { return ScalarField(divide(a.node_, b.node_)); }
ScalarField operator-(const ScalarField& a) { return ScalarField(neg(a.node_)); }
ScalarField pow(const ScalarField& a, double e) { return ScalarField(make(Op::Pow, a.node_, nullptr, e)); }
ScalarField exp(const ScalarField& a) { return ScalarField(make(Op::Exp, a.node_)); }
ScalarField sin(const ScalarField& a) { return ScalarField(make(Op::Sin, a.node_)); }
ScalarField cos(const ScalarField& a) { return ScalarField(make(Op::Cos, a.node_)); }
ScalarField sqrt(const ScalarField& a) { return ScalarField(make(Op::Sqrt, a.node_)); }

// ---------------------------------------------------------------------------
// Parser

namespace {

struct Lexer {
  const std::string& s;
  size_t i = 0;
  int line = 1, col = 1;

  explicit Lexer(const std::string& text) : s(text) {}

  void advance(size_t n) {
    for (size_t k = 0; k < n && i < s.size(); ++k, ++i) {
      if (s[i] == '\n') { ++line; col = 1; } else { ++col; }
    }
  }
  void skip_ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) advance(1);
  }
  bool eof() { skip_ws(); return i >= s.size(); }
  char peek() { skip_ws(); return i < s.size() ? s[i] : '\0'; }
  bool accept(char c) {
    if (peek() == c) { advance(1); return true; }
    return false;
  }
  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, line, col); }
};

struct Parser {
  Lexer lx;
  int dim;

  Parser(const std::string& text, int d) : lx(text), dim(d) {}

  NodePtr parse() {
    if (lx.eof()) lx.fail("empty field expression");
    NodePtr e = expr();
    if (!lx.eof()) lx.fail("unexpected trailing input");
    return e;
  }

  NodePtr expr() {
    NodePtr e = term();
    while (true) {
      if (lx.accept('+')) e = add(e, term());
      else if (lx.accept('-')) e = sub(e, term());
      else return e;
    }
  }

  NodePtr term() {
    NodePtr e = unary();
    while (true) {
      if (lx.accept('*')) e = mul(e, unary());
      else if (lx.accept('/')) e = divide(e, unary());
      else return e;
    }
  }

  NodePtr unary() {
    if (lx.accept('-')) return neg(unary());
    if (lx.accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (lx.accept('^')) {
      int l = lx.line, c = lx.col;
      NodePtr e = unary(); // right associative
      if (!node_is_constant(e.get()))
        throw ParseError("exponent must be a constant expression", l, c);
      return make(Op::Pow, base, nullptr, eval_value(e.get(), Eigen::VectorXd()));
    }
    return base;
  }

  NodePtr primary() {
    char c = lx.peek();
    if (c == '(') {
      lx.advance(1);
      NodePtr e = expr();
      if (!lx.accept(')')) lx.fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    if (c == '\0') lx.fail("unexpected end of input");
    lx.fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr number() {
    lx.skip_ws();
    size_t start = lx.i;
    const std::string& s = lx.s;
    size_t j = start;
    while (j < s.size() && (std::isdigit(static_cast<unsigned char>(s[j])) || s[j] == '.')) ++j;
    if (j < s.size() && (s[j] == 'e' || s[j] == 'E')) {
      size_t k = j + 1;
      if (k < s.size() && (s[k] == '+' || s[k] == '-')) ++k;
      if (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) {
        ++k;
        while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
        j = k;
      }
    }
    std::string tok = s.substr(start, j - start);
    try {
      size_t used = 0;
      double v = std::stod(tok, &used);
      if (used != tok.size()) lx.fail("malformed number '" + tok + "'");
      lx.advance(j - start);
      return konst(v);
    } catch (const std::logic_error&) {
      lx.fail("malformed number '" + tok + "'");
    }
  }

  NodePtr identifier() {
    lx.skip_ws();
    int l = lx.line, c0 = lx.col;
    size_t start = lx.i;
    const std::string& s = lx.s;
    size_t j = start;
    while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
    std::string name = s.substr(start, j - start);
    lx.advance(j - start);

    if (name.size() == 2 && name[0] == 'x' && std::isdigit(static_cast<unsigned char>(name[1]))) {
      int idx = name[1] - '0';
      if (idx < 1 || idx > dim)
        throw ParseError("coordinate '" + name + "' out of range for dimension " +
                         std::to_string(dim), l, c0);
      return make(Op::Coord, nullptr, nullptr, 0.0, idx - 1);
    }
    if (name == "r2") return make(Op::R2);

    auto unary_fn = [&](Op op) {
      if (!lx.accept('(')) lx.fail("expected '(' after '" + name + "'");
      NodePtr a = expr();
      if (!lx.accept(')')) lx.fail("expected ')'");
      return make(op, a);
    };
    if (name == "exp") return unary_fn(Op::Exp);
    if (name == "sin") return unary_fn(Op::Sin);
    if (name == "cos") return unary_fn(Op::Cos);
    if (name == "sqrt") return unary_fn(Op::Sqrt);
    if (name == "pow") {
      if (!lx.accept('(')) lx.fail("expected '(' after 'pow'");
      NodePtr a = expr();
      if (!lx.accept(',')) lx.fail("expected ',' in pow(base, exponent)");
      int l2 = lx.line, c2 = lx.col;
      NodePtr e = expr();
      if (!lx.accept(')')) lx.fail("expected ')'");
      if (!node_is_constant(e.get()))
        throw ParseError("pow exponent must be a constant expression", l2, c2);
      return make(Op::Pow, a, nullptr, eval_value(e.get(), Eigen::VectorXd()));
    }
    throw ParseError("unknown identifier '" + name + "'", l, c0);
  }
};

} // namespace

ScalarField parse_field(const std::string& text, int dim) {
  if (dim < 1 || dim > kMaxDim) throw UnsupportedDimension("parse_field: dimension out of range");
  Parser p(text, dim);
  return ScalarField(p.parse());
}

} // namespace hodgelab
