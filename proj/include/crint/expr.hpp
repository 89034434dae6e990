#pragma once

// Immutable expression trees over the phase-space variables x1, p1, x2, p2.

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

namespace crint {

/// Phase-space variables in storage order (x1, p1, x2, p2).
enum class Var : std::uint8_t { x1 = 0, p1 = 1, x2 = 2, p2 = 3 };

inline constexpr std::array<Var, 4> kAllVars = {Var::x1, Var::p1, Var::x2, Var::p2};

constexpr std::size_t index(Var v) noexcept { return static_cast<std::size_t>(v); }
std::string_view name(Var v) noexcept;

/// A point of R^4; (x1, p1) and (x2, p2) are conjugate pairs.
struct PhasePoint {
  double x1 = 0.0;
  double p1 = 0.0;
  double x2 = 0.0;
  double p2 = 0.0;

  double operator[](Var v) const noexcept;
  double& operator[](Var v) noexcept;

  std::array<double, 4> to_array() const noexcept { return {x1, p1, x2, p2}; }
  static PhasePoint from_array(const std::array<double, 4>& a) noexcept {
    return {a[0], a[1], a[2], a[3]};
  }

  bool is_finite() const noexcept;

  friend bool operator==(const PhasePoint&, const PhasePoint&) = default;
};

std::string to_string(const PhasePoint& pt);

enum class UnaryFn : std::uint8_t { neg, sin, cos, exp, ln, sinh, cosh };
enum class BinaryOp : std::uint8_t { add, sub, mul, div };

std::string_view name(UnaryFn fn) noexcept;

class Expr {
 public:
  enum class Kind : std::uint8_t { constant, variable, unary, binary, power };

  /// The constant 0.
  Expr();

  static Expr constant(double value);
  static Expr variable(Var v);
  static Expr unary(UnaryFn fn, Expr child);
  static Expr binary(BinaryOp op, Expr lhs, Expr rhs);
  static Expr power(Expr base, int exponent);

  Kind kind() const noexcept;

  // Accessors; each is only meaningful for the matching kind.
  double value() const;
  Var var() const;
  UnaryFn fn() const;
  BinaryOp op() const;
  int exponent() const;
  const Expr& child() const;  // unary operand or power base
  const Expr& lhs() const;
  const Expr& rhs() const;

  /// True if the variable occurs anywhere in the tree.
  bool depends_on(Var v) const noexcept;
  /// True if no variable occurs in the tree.
  bool is_constant_valued() const noexcept;
  bool is_zero() const noexcept { return kind() == Kind::constant && value() == 0.0; }
  bool is_one() const noexcept { return kind() == Kind::constant && value() == 1.0; }

  std::size_t node_count() const noexcept;

  /// Identity of the underlying node; used as a cache key.
  const void* id() const noexcept { return node_.get(); }

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& base, int exponent);

bool structurally_equal(const Expr& a, const Expr& b);

/// Parses the expression grammar; throws ParseError.
Expr parse(std::string_view text);

/// Renders with the minimal parentheses needed for `parse` to rebuild the
/// same tree. Constants print with 17 significant digits.
std::string to_string(const Expr& e);

/// Exact recursive evaluation; throws DomainError naming the failing subtree.
double eval(const Expr& e, const PhasePoint& pt);

/// Symbolic partial derivative (lightly simplified).
Expr differentiate(const Expr& e, Var v);

/// Constant folding plus removal of neutral and absorbing elements and
/// double negation. Not a canonical form.
Expr simplify(const Expr& e);

/// Replaces every occurrence of `v` with `replacement`.
Expr substitute(const Expr& e, Var v, const Expr& replacement);

}  // namespace crint
