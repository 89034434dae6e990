#include "crint/expr.hpp"

#include <cassert>
#include <cmath>
#include <cstdio>

#include "crint/errors.hpp"

namespace crint {

std::string_view name(Var v) noexcept {
  switch (v) {
    case Var::x1: return "x1";
    case Var::p1: return "p1";
    case Var::x2: return "x2";
    case Var::p2: return "p2";
  }
  return "?";
}

std::string_view name(UnaryFn fn) noexcept {
  switch (fn) {
    case UnaryFn::neg: return "-";
    case UnaryFn::sin: return "sin";
    case UnaryFn::cos: return "cos";
    case UnaryFn::exp: return "exp";
    case UnaryFn::ln: return "ln";
    case UnaryFn::sinh: return "sinh";
    case UnaryFn::cosh: return "cosh";
  }
  return "?";
}

double PhasePoint::operator[](Var v) const noexcept {
  switch (v) {
    case Var::x1: return x1;
    case Var::p1: return p1;
    case Var::x2: return x2;
    case Var::p2: return p2;
  }
  return 0.0;
}

double& PhasePoint::operator[](Var v) noexcept {
  switch (v) {
    case Var::x1: return x1;
    case Var::p1: return p1;
    case Var::x2: return x2;
    case Var::p2: break;
  }
  return p2;
}

bool PhasePoint::is_finite() const noexcept {
  return std::isfinite(x1) && std::isfinite(p1) && std::isfinite(x2) && std::isfinite(p2);
}

namespace {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string to_string(const PhasePoint& pt) {
  return "(" + format_number(pt.x1) + ", " + format_number(pt.p1) + ", " +
         format_number(pt.x2) + ", " + format_number(pt.p2) + ")";
}

struct Expr::Node {
  Kind kind = Kind::constant;
  double value = 0.0;
  Var var = Var::x1;
  UnaryFn fn = UnaryFn::neg;
  BinaryOp op = BinaryOp::add;
  int exponent = 0;
  Expr a{std::shared_ptr<const Node>{}};
  Expr b{std::shared_ptr<const Node>{}};
  std::uint8_t mask = 0;  // bit i set if variable i occurs
  std::size_t count = 1;
};

Expr::Expr() {
  static const auto zero = std::make_shared<const Node>();
  node_ = zero;
}

Expr Expr::constant(double value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::constant;
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::variable(Var v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::variable;
  n->var = v;
  n->mask = static_cast<std::uint8_t>(1u << index(v));
  return Expr(std::move(n));
}

Expr Expr::unary(UnaryFn fn, Expr child) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::unary;
  n->fn = fn;
  n->mask = child.node_->mask;
  n->count = 1 + child.node_->count;
  n->a = std::move(child);
  return Expr(std::move(n));
}

Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::binary;
  n->op = op;
  n->mask = lhs.node_->mask | rhs.node_->mask;
  n->count = 1 + lhs.node_->count + rhs.node_->count;
  n->a = std::move(lhs);
  n->b = std::move(rhs);
  return Expr(std::move(n));
}

Expr Expr::power(Expr base, int exponent) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::power;
  n->exponent = exponent;
  n->mask = base.node_->mask;
  n->count = 1 + base.node_->count;
  n->a = std::move(base);
  return Expr(std::move(n));
}

Expr::Kind Expr::kind() const noexcept { return node_->kind; }
double Expr::value() const { return node_->value; }
Var Expr::var() const { return node_->var; }
UnaryFn Expr::fn() const { return node_->fn; }
BinaryOp Expr::op() const { return node_->op; }
int Expr::exponent() const { return node_->exponent; }
const Expr& Expr::child() const { return node_->a; }
const Expr& Expr::lhs() const { return node_->a; }
const Expr& Expr::rhs() const { return node_->b; }

bool Expr::depends_on(Var v) const noexcept { return (node_->mask >> index(v)) & 1u; }
bool Expr::is_constant_valued() const noexcept { return node_->mask == 0; }
std::size_t Expr::node_count() const noexcept { return node_->count; }

Expr operator+(const Expr& a, const Expr& b) { return Expr::binary(BinaryOp::add, a, b); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::binary(BinaryOp::sub, a, b); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::binary(BinaryOp::mul, a, b); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::binary(BinaryOp::div, a, b); }
Expr operator-(const Expr& a) { return Expr::unary(UnaryFn::neg, a); }
Expr pow(const Expr& base, int exponent) { return Expr::power(base, exponent); }

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.id() == b.id()) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Expr::Kind::constant:
      return a.value() == b.value() && std::signbit(a.value()) == std::signbit(b.value());
    case Expr::Kind::variable:
      return a.var() == b.var();
    case Expr::Kind::unary:
      return a.fn() == b.fn() && structurally_equal(a.child(), b.child());
    case Expr::Kind::binary:
      return a.op() == b.op() && structurally_equal(a.lhs(), b.lhs()) &&
             structurally_equal(a.rhs(), b.rhs());
    case Expr::Kind::power:
      return a.exponent() == b.exponent() && structurally_equal(a.child(), b.child());
  }
  return false;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

// Binding strength used to decide where parentheses are needed.
enum Level { kSum = 1, kProduct = 2, kNegation = 3, kPower = 4, kAtom = 5 };

int level(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::constant:
      return std::signbit(e.value()) ? kNegation : kAtom;
    case Expr::Kind::variable:
      return kAtom;
    case Expr::Kind::unary:
      return e.fn() == UnaryFn::neg ? kNegation : kAtom;
    case Expr::Kind::binary:
      return (e.op() == BinaryOp::add || e.op() == BinaryOp::sub) ? kSum : kProduct;
    case Expr::Kind::power:
      return kPower;
  }
  return kAtom;
}

void emit(const Expr& e, std::string& out);

void emit_at_least(const Expr& e, int min_level, std::string& out) {
  if (level(e) < min_level) {
    out += '(';
    emit(e, out);
    out += ')';
  } else {
    emit(e, out);
  }
}

void emit(const Expr& e, std::string& out) {
  switch (e.kind()) {
    case Expr::Kind::constant:
      if (std::signbit(e.value())) {
        out += '-';
        out += format_number(-e.value());
      } else {
        out += format_number(e.value());
      }
      return;
    case Expr::Kind::variable:
      out += name(e.var());
      return;
    case Expr::Kind::unary:
      if (e.fn() == UnaryFn::neg) {
        out += '-';
        emit_at_least(e.child(), kNegation, out);
      } else {
        out += name(e.fn());
        out += '(';
        emit(e.child(), out);
        out += ')';
      }
      return;
    case Expr::Kind::binary: {
      const bool additive = e.op() == BinaryOp::add || e.op() == BinaryOp::sub;
      emit_at_least(e.lhs(), additive ? kSum : kProduct, out);
      switch (e.op()) {
        case BinaryOp::add: out += " + "; break;
        case BinaryOp::sub: out += " - "; break;
        case BinaryOp::mul: out += '*'; break;
        case BinaryOp::div: out += '/'; break;
      }
      emit_at_least(e.rhs(), additive ? kProduct : kNegation, out);
      return;
    }
    case Expr::Kind::power:
      emit_at_least(e.child(), kAtom, out);
      out += '^';
      if (e.exponent() < 0) {
        out += "(" + std::to_string(e.exponent()) + ")";
      } else {
        out += std::to_string(e.exponent());
      }
      return;
  }
}

}  // namespace

std::string to_string(const Expr& e) {
  std::string out;
  emit(e, out);
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

double apply(UnaryFn fn, double x) {
  switch (fn) {
    case UnaryFn::neg: return -x;
    case UnaryFn::sin: return std::sin(x);
    case UnaryFn::cos: return std::cos(x);
    case UnaryFn::exp: return std::exp(x);
    case UnaryFn::ln: return std::log(x);
    case UnaryFn::sinh: return std::sinh(x);
    case UnaryFn::cosh: return std::cosh(x);
  }
  return x;
}

double apply(BinaryOp op, double a, double b) {
  switch (op) {
    case BinaryOp::add: return a + b;
    case BinaryOp::sub: return a - b;
    case BinaryOp::mul: return a * b;
    case BinaryOp::div: return a / b;
  }
  return a;
}

[[noreturn]] void domain_failure(const std::string& what, const Expr& e) {
  const std::string text = to_string(e);
  throw DomainError(what + " in '" + text + "'", text);
}

double eval_node(const Expr& e, const PhasePoint& pt) {
  switch (e.kind()) {
    case Expr::Kind::constant:
      return e.value();
    case Expr::Kind::variable:
      return pt[e.var()];
    case Expr::Kind::unary: {
      const double x = eval_node(e.child(), pt);
      if (e.fn() == UnaryFn::ln && !(x > 0.0)) {
        domain_failure("ln of non-positive value " + format_number(x), e);
      }
      const double r = apply(e.fn(), x);
      if (!std::isfinite(r)) domain_failure("non-finite value", e);
      return r;
    }
    case Expr::Kind::binary: {
      const double a = eval_node(e.lhs(), pt);
      const double b = eval_node(e.rhs(), pt);
      if (e.op() == BinaryOp::div && b == 0.0) domain_failure("division by zero", e);
      const double r = apply(e.op(), a, b);
      if (!std::isfinite(r)) domain_failure("non-finite value", e);
      return r;
    }
    case Expr::Kind::power: {
      const double x = eval_node(e.child(), pt);
      if (x == 0.0 && e.exponent() < 0) domain_failure("zero raised to a negative power", e);
      const double r = std::pow(x, e.exponent());
      if (!std::isfinite(r)) domain_failure("non-finite value", e);
      return r;
    }
  }
  return 0.0;
}

}  // namespace

double eval(const Expr& e, const PhasePoint& pt) { return eval_node(e, pt); }

// ---------------------------------------------------------------------------
// Simplification

namespace {

Expr make_neg(const Expr& a) {
  if (a.kind() == Expr::Kind::constant) return Expr::constant(-a.value());
  if (a.kind() == Expr::Kind::unary && a.fn() == UnaryFn::neg) return a.child();
  return -a;
}

Expr make_add(const Expr& a, const Expr& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.kind() == Expr::Kind::constant && b.kind() == Expr::Kind::constant) {
    return Expr::constant(a.value() + b.value());
  }
  return a + b;
}

Expr make_sub(const Expr& a, const Expr& b) {
  if (b.is_zero()) return a;
  if (a.is_zero()) return make_neg(b);
  if (a.kind() == Expr::Kind::constant && b.kind() == Expr::Kind::constant) {
    return Expr::constant(a.value() - b.value());
  }
  return a - b;
}

Expr make_mul(const Expr& a, const Expr& b) {
  if (a.is_zero() || b.is_zero()) return Expr::constant(0.0);
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  if (a.kind() == Expr::Kind::constant && b.kind() == Expr::Kind::constant) {
    return Expr::constant(a.value() * b.value());
  }
  if (a.kind() == Expr::Kind::constant && a.value() == -1.0) return make_neg(b);
  if (b.kind() == Expr::Kind::constant && b.value() == -1.0) return make_neg(a);
  return a * b;
}

Expr make_div(const Expr& a, const Expr& b) {
  if (b.is_one()) return a;
  if (a.is_zero() && !b.is_zero()) return Expr::constant(0.0);
  if (a.kind() == Expr::Kind::constant && b.kind() == Expr::Kind::constant && b.value() != 0.0) {
    const double r = a.value() / b.value();
    if (std::isfinite(r)) return Expr::constant(r);
  }
  return a / b;
}

Expr make_pow(const Expr& base, int n) {
  if (n == 0) return Expr::constant(1.0);
  if (n == 1) return base;
  if (base.kind() == Expr::Kind::constant && !(base.value() == 0.0 && n < 0)) {
    const double r = std::pow(base.value(), n);
    if (std::isfinite(r)) return Expr::constant(r);
  }
  return pow(base, n);
}

Expr make_unary(UnaryFn fn, const Expr& a) {
  if (fn == UnaryFn::neg) return make_neg(a);
  if (a.kind() == Expr::Kind::constant && !(fn == UnaryFn::ln && !(a.value() > 0.0))) {
    const double r = apply(fn, a.value());
    if (std::isfinite(r)) return Expr::constant(r);
  }
  return Expr::unary(fn, a);
}

Expr make_binary(BinaryOp op, const Expr& a, const Expr& b) {
  switch (op) {
    case BinaryOp::add: return make_add(a, b);
    case BinaryOp::sub: return make_sub(a, b);
    case BinaryOp::mul: return make_mul(a, b);
    case BinaryOp::div: return make_div(a, b);
  }
  return a;
}

}  // namespace

Expr simplify(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::constant:
    case Expr::Kind::variable:
      return e;
    case Expr::Kind::unary:
      return make_unary(e.fn(), simplify(e.child()));
    case Expr::Kind::binary:
      return make_binary(e.op(), simplify(e.lhs()), simplify(e.rhs()));
    case Expr::Kind::power:
      return make_pow(simplify(e.child()), e.exponent());
  }
  return e;
}

Expr substitute(const Expr& e, Var v, const Expr& replacement) {
  if (!e.depends_on(v)) return e;
  switch (e.kind()) {
    case Expr::Kind::constant:
      return e;
    case Expr::Kind::variable:
      return e.var() == v ? replacement : e;
    case Expr::Kind::unary:
      return Expr::unary(e.fn(), substitute(e.child(), v, replacement));
    case Expr::Kind::binary:
      return Expr::binary(e.op(), substitute(e.lhs(), v, replacement),
                          substitute(e.rhs(), v, replacement));
    case Expr::Kind::power:
      return Expr::power(substitute(e.child(), v, replacement), e.exponent());
  }
  return e;
}

// ---------------------------------------------------------------------------
// Differentiation

namespace {

Expr derive(const Expr& e, Var v) {
  if (!e.depends_on(v)) return Expr::constant(0.0);
  switch (e.kind()) {
    case Expr::Kind::constant:
      return Expr::constant(0.0);
    case Expr::Kind::variable:
      return Expr::constant(e.var() == v ? 1.0 : 0.0);
    case Expr::Kind::unary: {
      const Expr& u = e.child();
      const Expr du = derive(u, v);
      switch (e.fn()) {
        case UnaryFn::neg: return make_neg(du);
        case UnaryFn::sin: return make_mul(make_unary(UnaryFn::cos, u), du);
        case UnaryFn::cos: return make_neg(make_mul(make_unary(UnaryFn::sin, u), du));
        case UnaryFn::exp: return make_mul(e, du);
        case UnaryFn::ln: return make_div(du, u);
        case UnaryFn::sinh: return make_mul(make_unary(UnaryFn::cosh, u), du);
        case UnaryFn::cosh: return make_mul(make_unary(UnaryFn::sinh, u), du);
      }
      break;
    }
    case Expr::Kind::binary: {
      const Expr& a = e.lhs();
      const Expr& b = e.rhs();
      const Expr da = derive(a, v);
      const Expr db = derive(b, v);
      switch (e.op()) {
        case BinaryOp::add: return make_add(da, db);
        case BinaryOp::sub: return make_sub(da, db);
        case BinaryOp::mul: return make_add(make_mul(da, b), make_mul(a, db));
        case BinaryOp::div:
          if (!b.depends_on(v)) return make_div(da, b);
          return make_div(make_sub(make_mul(da, b), make_mul(a, db)), make_pow(b, 2));
      }
      break;
    }
    case Expr::Kind::power: {
      const int n = e.exponent();
      const Expr& u = e.child();
      return make_mul(make_mul(Expr::constant(n), make_pow(u, n - 1)), derive(u, v));
    }
  }
  return Expr::constant(0.0);
}

}  // namespace

Expr differentiate(const Expr& e, Var v) { return simplify(derive(e, v)); }

}  // namespace crint
