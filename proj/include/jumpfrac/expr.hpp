#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace jumpfrac {

/// Closed interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double v) const noexcept { return v >= lo && v <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Scalar coefficient expression in the variable `x` (and optionally `z`,
/// for two-variable jump coefficients).
///
/// Grammar:
///   expr   := term (('+' | '-') term)*
///   term   := unary (('*' | '/') unary)*
///   unary  := '-' unary | primary
///   primary:= number | ident | call | '(' expr ')'
///   call   := fn '(' expr (',' expr)* ')'
/// with fn one of sin cos exp tanh abs sign (1 argument), min max (2),
/// clamp (3) and pow(expr, literal).
///
/// An Expr is immutable once parsed and may be evaluated concurrently.
class Expr {
public:
  struct Node;
  struct Program;

  /// Throws ParseError with a 1-based column.
  static Expr parse(std::string_view text, bool allow_z = false);
  static Expr constant(double value);

  /// IEEE-754 evaluation. Throws NumericalError on division by zero or on
  /// any non-finite intermediate value.
  double eval(double x, double z = 0.0) const;

  /// Canonical text: minimal parentheses, shortest round-trip literals.
  std::string to_string() const;

  std::optional<double> constant_value() const noexcept;
  bool is_constant() const noexcept { return constant_value().has_value(); }
  bool uses_x() const noexcept;
  bool uses_z() const noexcept;

  /// Structural equality through the canonical form.
  friend bool operator==(const Expr& a, const Expr& b) { return a.to_string() == b.to_string(); }

private:
  explicit Expr(std::shared_ptr<const Node> root);

  std::shared_ptr<const Node> root_;
  std::shared_ptr<const Program> program_;
};

Expr parse_expr(std::string_view text);
double eval_expr(const Expr& e, double x);

/// Largest adjacent difference quotient on a uniform n-point grid of
/// [lo, hi]. A lower bound on the true Lipschitz constant.
double estimate_lipschitz(const Expr& e, double lo, double hi, std::size_t n);

/// True iff every evaluation on the uniform n-point grid of [lo, hi] lies in
/// the closed band.
bool check_range(const Expr& e, double lo, double hi, Interval band, std::size_t n);

}  // namespace jumpfrac
