#include "crint/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "crint/errors.hpp"

namespace crint {

Polynomial Polynomial::constant(double c) {
  Polynomial p;
  p.add_term({0, 0, 0, 0}, c);
  return p;
}

Polynomial Polynomial::variable(Var v) {
  Polynomial p;
  Monomial m{0, 0, 0, 0};
  m[index(v)] = 1;
  p.add_term(m, 1.0);
  return p;
}

void Polynomial::add_term(const Monomial& m, double c) {
  if (c == 0.0) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

Polynomial Polynomial::from_expr(const Expr& e) {
  if (e.is_constant_valued()) return constant(eval(e, PhasePoint{}));
  switch (e.kind()) {
    case Expr::Kind::constant:
      return constant(e.value());
    case Expr::Kind::variable:
      return variable(e.var());
    case Expr::Kind::unary:
      if (e.fn() == UnaryFn::neg) return -1.0 * from_expr(e.child());
      break;
    case Expr::Kind::binary:
      switch (e.op()) {
        case BinaryOp::add: return from_expr(e.lhs()) + from_expr(e.rhs());
        case BinaryOp::sub: return from_expr(e.lhs()) - from_expr(e.rhs());
        case BinaryOp::mul: return from_expr(e.lhs()) * from_expr(e.rhs());
        case BinaryOp::div:
          if (e.rhs().is_constant_valued()) {
            const double d = eval(e.rhs(), PhasePoint{});
            if (d == 0.0) throw DomainError("division by zero", to_string(e));
            return (1.0 / d) * from_expr(e.lhs());
          }
          break;
      }
      break;
    case Expr::Kind::power:
      if (e.exponent() >= 0) {
        Polynomial base = from_expr(e.child());
        Polynomial result = constant(1.0);
        for (int n = e.exponent(); n > 0; n >>= 1) {
          if (n & 1) result = result * base;
          if (n > 1) base = base * base;
        }
        return result;
      }
      break;
  }
  throw UnsupportedClassError("'" + to_string(e) + "' is not a polynomial in x1, p1, x2, p2");
}

bool Polynomial::depends_on(Var v) const noexcept {
  for (const auto& [m, c] : terms_) {
    if (m[index(v)] != 0) return true;
  }
  return false;
}

double Polynomial::max_abs_coefficient() const noexcept {
  double m = 0.0;
  for (const auto& [mono, c] : terms_) m = std::max(m, std::fabs(c));
  return m;
}

Polynomial Polynomial::derivative(Var v) const {
  Polynomial out;
  const std::size_t i = index(v);
  for (const auto& [mono, c] : terms_) {
    if (mono[i] == 0) continue;
    Monomial m = mono;
    const double k = m[i];
    --m[i];
    out.add_term(m, k * c);
  }
  return out;
}

Polynomial Polynomial::antiderivative(Var v) const {
  Polynomial out;
  const std::size_t i = index(v);
  for (const auto& [mono, c] : terms_) {
    Monomial m = mono;
    ++m[i];
    out.add_term(m, c / m[i]);
  }
  return out;
}

Polynomial Polynomial::pruned(double threshold) const {
  Polynomial out;
  for (const auto& [m, c] : terms_) {
    if (std::fabs(c) > threshold) out.terms_.emplace(m, c);
  }
  return out;
}

double Polynomial::evaluate(const PhasePoint& pt) const {
  double sum = 0.0;
  for (const auto& [m, c] : terms_) {
    double t = c;
    for (Var v : kAllVars) t *= std::pow(pt[v], m[index(v)]);
    sum += t;
  }
  return sum;
}

Expr Polynomial::to_expr() const {
  if (terms_.empty()) return Expr::constant(0.0);
  // Highest total degree first.
  std::vector<std::pair<Monomial, double>> ordered(terms_.rbegin(), terms_.rend());
  std::stable_sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
    return a.first[0] + a.first[1] + a.first[2] + a.first[3] >
           b.first[0] + b.first[1] + b.first[2] + b.first[3];
  });

  Expr sum;
  bool first = true;
  for (const auto& [m, c] : ordered) {
    Expr product;
    bool has_factor = false;
    const double magnitude = std::fabs(c);
    if (magnitude != 1.0) {
      product = Expr::constant(magnitude);
      has_factor = true;
    }
    for (Var v : {Var::x1, Var::x2, Var::p1, Var::p2}) {
      const int n = m[index(v)];
      if (n == 0) continue;
      Expr factor = n == 1 ? Expr::variable(v) : pow(Expr::variable(v), n);
      product = has_factor ? product * factor : factor;
      has_factor = true;
    }
    if (!has_factor) product = Expr::constant(magnitude);

    if (first) {
      sum = c < 0.0 ? -product : product;
      first = false;
    } else {
      sum = c < 0.0 ? sum - product : sum + product;
    }
  }
  return sum;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial out;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      Polynomial::Monomial m;
      for (std::size_t i = 0; i < 4; ++i) m[i] = ma[i] + mb[i];
      out.add_term(m, ca * cb);
    }
  }
  return out;
}

Polynomial operator*(double s, Polynomial a) {
  if (s == 0.0) return {};
  for (auto& [m, c] : a.terms_) c *= s;
  return a;
}

}  // namespace crint
