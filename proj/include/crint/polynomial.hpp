#pragma once

#include <array>
#include <map>

#include "crint/expr.hpp"

namespace crint {

/// Sparse real polynomial in (x1, p1, x2, p2). Used by the symbolic
/// invariant builder; coefficients are doubles, so equality is approximate.
class Polynomial {
 public:
  using Monomial = std::array<int, 4>;  // exponents, ordered as Var

  Polynomial() = default;
  static Polynomial constant(double c);
  static Polynomial variable(Var v);

  /// Converts a polynomial expression. Subtrees without variables are folded
  /// to constants; anything else that is not +, -, *, non-negative integer
  /// power or division by a constant throws UnsupportedClassError.
  static Polynomial from_expr(const Expr& e);

  const std::map<Monomial, double>& terms() const noexcept { return terms_; }
  bool depends_on(Var v) const noexcept;
  double max_abs_coefficient() const noexcept;

  Polynomial derivative(Var v) const;
  /// Term-wise antiderivative with zero integration constant.
  Polynomial antiderivative(Var v) const;

  /// Drops coefficients with |c| <= threshold.
  Polynomial pruned(double threshold) const;

  double evaluate(const PhasePoint& pt) const;
  Expr to_expr() const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(double s, Polynomial a);

 private:
  void add_term(const Monomial& m, double c);

  std::map<Monomial, double> terms_;
};

}  // namespace crint
