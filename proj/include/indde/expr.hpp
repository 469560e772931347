#pragma once

// Closed-form scalar expressions in a single variable.
//
// Grammar (whitespace is insignificant):
//
//   expr    = term { ("+" | "-") term } ;
//   term    = unary { ("*" | "/") unary } ;
//   unary   = ("-" | "+") unary | power ;
//   power   = primary [ "^" unary ] ;
//   primary = number | "pi" | variable
//           | function "(" expr ")"
//           | "pow" "(" expr "," expr ")"
//           | "(" expr ")" ;
//   variable = "t" | "x" | "k" ;
//   function = "abs" | "sin" | "cos" | "tanh" | "arctan" | "atan"
//            | "exp" | "satlin" ;
//
// Exponents must be variable-free and integer valued. An expression may
// mention at most one distinct variable.

#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace indde {

enum class Var { t, x, k };

char to_char(Var v);

enum class UnaryOp { neg, abs, sin, cos, tanh, arctan, exp, satlin };
enum class BinaryOp { add, sub, mul, div, pow };

class Expr {
 public:
  struct Node;

  /// The zero constant.
  Expr();

  static Expr constant(double value);
  static Expr variable(Var v);
  static Expr unary(UnaryOp op, Expr operand);
  static Expr binary(BinaryOp op, Expr lhs, Expr rhs);

  /// Sum/product builders that fold variable-free operands into a constant.
  static Expr sum(const Expr& a, const Expr& b);
  static Expr product(const Expr& a, const Expr& b);

  /// The variable this expression mentions, if any.
  std::optional<Var> variable() const;

  bool is_constant() const { return !variable().has_value(); }
  bool is_zero() const;

  /// Value of a variable-free expression.
  double constant_value() const;

  /// Evaluates with `value` bound to the expression's own variable.
  double operator()(double value) const;

  /// Evaluates with an explicit binding; throws wrong_variable when the
  /// expression is over a different variable.
  double eval(Var v, double value) const;

  /// Canonical text that parses back to a structurally identical tree.
  std::string print() const;

  const Node& node() const { return *node_; }

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

Expr parse(std::string_view text);

/// Parses and requires the expression to be constant or over `expected`.
Expr parse_over(std::string_view text, Var expected);

double eval(const Expr& e, double value);

/// Largest |e| on a uniform grid over [lo, hi], followed by golden-section
/// refinement around the best grid cells. A lower bound on the true
/// supremum, accurate to O(grid_step^2) for smooth expressions.
double sup_abs(const Expr& e, double lo, double hi, double grid_step);

/// Largest absolute difference quotient between adjacent grid points.
double lipschitz_estimate(const Expr& e, double lo, double hi, double grid_step);

}  // namespace indde
