#include "crint/expr.hpp"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "crint/errors.hpp"
#include "fixtures.hpp"
#include "random_expr.hpp"

namespace crint {
namespace {

using fixtures::random_points;

Expr c(double v) { return Expr::constant(v); }
Expr var(Var v) { return Expr::variable(v); }

ParseError::Kind parse_error_kind(std::string_view text) {
  try {
    (void)parse(text);
  } catch (const ParseError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no parse error for " << text;
  return ParseError::Kind::syntax;
}

std::size_t parse_error_offset(std::string_view text) {
  try {
    (void)parse(text);
  } catch (const ParseError& e) {
    return e.offset();
  }
  ADD_FAILURE() << "no parse error for " << text;
  return 0;
}

TEST(Parse, SingleVariable) {
  const Expr e = parse("x1");
  ASSERT_EQ(e.kind(), Expr::Kind::variable);
  EXPECT_EQ(e.var(), Var::x1);
}

TEST(Parse, ExampleOneStructure) {
  const Expr p1 = var(Var::p1), p2 = var(Var::p2), x1 = var(Var::x1), x2 = var(Var::x2);
  const Expr expected =
      (c(1) / c(2)) * (((pow(p1, 2) - pow(p2, 2)) - pow(x1, 2)) + pow(x2, 2));
  const Expr e = parse(fixtures::kExample1);
  EXPECT_TRUE(structurally_equal(e, expected)) << to_string(e);
  ASSERT_EQ(e.kind(), Expr::Kind::binary);
  EXPECT_EQ(e.op(), BinaryOp::mul);
  EXPECT_EQ(e.lhs().op(), BinaryOp::div);
}

TEST(Parse, ExampleTwoStructure) {
  const Expr expected =
      Expr::unary(UnaryFn::exp, var(Var::p1)) * Expr::unary(UnaryFn::cos, var(Var::p2)) +
      Expr::unary(UnaryFn::exp, -var(Var::x1)) * Expr::unary(UnaryFn::sin, var(Var::x2));
  const Expr e = parse(fixtures::kExample2);
  EXPECT_TRUE(structurally_equal(e, expected)) << to_string(e);
  EXPECT_EQ(e.op(), BinaryOp::add);
}

TEST(Parse, RejectsRationalExponent) {
  EXPECT_EQ(parse_error_kind("x1^(1/2)"), ParseError::Kind::non_integer_exponent);
  EXPECT_EQ(parse_error_offset("x1^(1/2)"), 3u);
  EXPECT_EQ(parse_error_kind("x1^0.5"), ParseError::Kind::non_integer_exponent);
  EXPECT_EQ(parse_error_kind("x1^p1"), ParseError::Kind::non_integer_exponent);
}

TEST(Parse, ReportsSyntaxErrorsWithOffsets) {
  EXPECT_EQ(parse_error_kind("x1 + * p1"), ParseError::Kind::syntax);
  EXPECT_EQ(parse_error_offset("x1 + * p1"), 5u);
  EXPECT_EQ(parse_error_kind("(x1 + p1"), ParseError::Kind::syntax);
  EXPECT_EQ(parse_error_offset("(x1 + p1"), 8u);
  EXPECT_EQ(parse_error_kind("x1 p1"), ParseError::Kind::syntax);
  EXPECT_EQ(parse_error_offset("x1 p1"), 3u);
  EXPECT_EQ(parse_error_kind(""), ParseError::Kind::syntax);
  EXPECT_EQ(parse_error_kind("sin x1"), ParseError::Kind::syntax);
}

TEST(Parse, ReportsUnknownIdentifiers) {
  EXPECT_EQ(parse_error_kind("y1"), ParseError::Kind::unknown_identifier);
  EXPECT_EQ(parse_error_offset("x1 + tan(p1)"), 5u);
  EXPECT_EQ(parse_error_kind("x1 + tan(p1)"), ParseError::Kind::unknown_identifier);
  EXPECT_EQ(parse_error_kind("x3"), ParseError::Kind::unknown_identifier);
}

TEST(Parse, Precedence) {
  const PhasePoint pt{3.0, 2.0, 0.0, 0.0};
  EXPECT_EQ(eval(parse("-x1^2"), pt), -9.0);
  EXPECT_EQ(eval(parse("2^3^2"), pt), 512.0);
  EXPECT_EQ(eval(parse("x1^-1"), pt), 1.0 / 3.0);
  EXPECT_EQ(eval(parse("2*-x1"), pt), -6.0);
  EXPECT_EQ(eval(parse("x1 - p1 - 1"), pt), 0.0);
  EXPECT_EQ(eval(parse("x1 / p1 / 2"), pt), 0.75);
  EXPECT_EQ(eval(parse("1 + 2 * x1 ^ 2"), pt), 19.0);
  EXPECT_EQ(eval(parse("--x1"), pt), 3.0);
}

TEST(Parse, NumbersAndPi) {
  EXPECT_EQ(parse("0.1").value(), 0.1);
  EXPECT_EQ(parse("2.5e-3").value(), 2.5e-3);
  EXPECT_EQ(parse(".5").value(), 0.5);
  EXPECT_EQ(parse("1E2").value(), 100.0);
  EXPECT_EQ(parse("pi").value(), std::numbers::pi);
}

TEST(Eval, ExampleOneAtPoint) {
  EXPECT_EQ(eval(parse(fixtures::kExample1), {1, 2, 3, 4}), -2.0);
}

TEST(Eval, ZeroExpression) {
  for (const PhasePoint& pt : random_points(10, 7)) EXPECT_EQ(eval(parse("0"), pt), 0.0);
}

TEST(Eval, DomainErrorsNameTheSubtree) {
  try {
    (void)eval(parse("p1 + ln(x1)"), {0, 1, 1, 1});
    FAIL() << "expected a domain error";
  } catch (const DomainError& e) {
    EXPECT_EQ(e.subtree(), "ln(x1)");
  }
  EXPECT_THROW((void)eval(parse("1/x1"), {0, 1, 1, 1}), DomainError);
  EXPECT_THROW((void)eval(parse("x1^-2"), {0, 1, 1, 1}), DomainError);
  EXPECT_THROW((void)eval(parse("exp(exp(x1))"), {10, 0, 0, 0}), DomainError);
}

TEST(Differentiate, PowerRule) {
  const Expr d = differentiate(parse("x1^2"), Var::x1);
  for (const PhasePoint& pt : random_points(20, 3)) EXPECT_DOUBLE_EQ(eval(d, pt), 2.0 * pt.x1);
}

TEST(Differentiate, ExampleOneSecondPartialIsConstant) {
  const Expr d = differentiate(differentiate(parse(fixtures::kExample1), Var::x1), Var::x1);
  ASSERT_EQ(d.kind(), Expr::Kind::constant) << to_string(d);
  EXPECT_EQ(d.value(), -1.0);
}

TEST(Differentiate, ExponentialTimesSine) {
  const Expr d = differentiate(parse("exp(-x1)*sin(x2)"), Var::x2);
  for (const PhasePoint& pt : random_points(20, 4)) {
    EXPECT_NEAR(eval(d, pt), std::exp(-pt.x1) * std::cos(pt.x2), 1e-15);
  }
}

TEST(Differentiate, EveryFunction) {
  const PhasePoint pt{0.7, -0.3, 0.2, 0.9};
  struct Case {
    const char* text;
    double expected;  // d/dx1 at pt, by hand
  };
  const double x = pt.x1;
  const Case cases[] = {
      {"sin(x1)", std::cos(x)},
      {"cos(x1)", -std::sin(x)},
      {"exp(2*x1)", 2 * std::exp(2 * x)},
      {"ln(x1)", 1 / x},
      {"sinh(x1)", std::cosh(x)},
      {"cosh(x1)", std::sinh(x)},
      {"1/x1", -1 / (x * x)},
      {"x1^-3", -3 / (x * x * x * x)},
      {"x1^0", 0.0},
      {"p1/x1", 0.3 / (x * x)},
  };
  for (const Case& k : cases) {
    EXPECT_NEAR(eval(differentiate(parse(k.text), Var::x1), pt), k.expected, 1e-14) << k.text;
  }
}

TEST(Simplify, RemovesNeutralAndAbsorbingElements) {
  EXPECT_TRUE(structurally_equal(simplify(c(0) * var(Var::x1) + var(Var::p1)), var(Var::p1)));
  EXPECT_TRUE(structurally_equal(simplify(c(1) * (var(Var::x2) - c(0))), var(Var::x2)));
  EXPECT_TRUE(structurally_equal(simplify(-(-var(Var::x1))), var(Var::x1)));
  EXPECT_TRUE(structurally_equal(simplify(pow(var(Var::p2), 1)), var(Var::p2)));
  const Expr folded = simplify(parse("(1/2)*(3 + 1)"));
  ASSERT_EQ(folded.kind(), Expr::Kind::constant);
  EXPECT_EQ(folded.value(), 2.0);
}

TEST(Simplify, KeepsDomainErrorsUnfolded) {
  const Expr e = simplify(parse("ln(0 - 1) + x1"));
  EXPECT_THROW((void)eval(e, {}), DomainError);
  EXPECT_THROW((void)eval(simplify(parse("1/0")), {}), DomainError);
}

TEST(Substitute, ReplacesVariable) {
  const Expr e = substitute(parse("x1*p2 + p2^2"), Var::p2, -var(Var::p2));
  EXPECT_DOUBLE_EQ(eval(e, {2, 0, 0, 3}), -6.0 + 9.0);
}

// ---------------------------------------------------------------------------
// Properties

TEST(ExprProperty, SimplifyPreservesValue) {
  fixtures::ExprGenerator gen(11, /*singular=*/true);
  const auto pts = random_points(100, 12, -2.0, 2.0);
  int compared = 0;
  for (int i = 0; i < 100; ++i) {
    const Expr e = gen(4);
    const Expr s = simplify(e);
    const PhasePoint& pt = pts[i];
    double expected = 0.0;
    try {
      expected = eval(e, pt);
    } catch (const DomainError&) {
      continue;
    }
    ++compared;
    EXPECT_LE(fixtures::relative_error(eval(s, pt), expected), 1e-14)
        << to_string(e) << " vs " << to_string(s);
  }
  EXPECT_GT(compared, 60);
}

TEST(ExprProperty, PrintThenParseRoundTrips) {
  fixtures::ExprGenerator gen(21, /*singular=*/true);
  for (int i = 0; i < 200; ++i) {
    const std::string text = to_string(gen(5));
    const Expr first = parse(text);
    const Expr again = parse(to_string(first));
    EXPECT_TRUE(structurally_equal(first, again)) << text << "\n" << to_string(first);
  }
  for (std::string_view text : {fixtures::kExample1, fixtures::kExample2, fixtures::kExample3,
                                std::string_view("-x1^2 - -p1*(x2/-p2)^-3 + pi")}) {
    const Expr first = parse(text);
    EXPECT_TRUE(structurally_equal(first, parse(to_string(first)))) << text;
  }
}

TEST(ExprProperty, DifferentiationIsLinear) {
  fixtures::ExprGenerator gen(31);
  const auto pts = random_points(100, 32);
  const double a = 1.75, b = -0.625;
  for (int i = 0; i < 100; ++i) {
    const Expr e1 = gen(3), e2 = gen(3);
    const Var v = kAllVars[i % 4];
    const Expr lhs = differentiate(c(a) * e1 + c(b) * e2, v);
    const double combined = a * eval(differentiate(e1, v), pts[i]) +
                            b * eval(differentiate(e2, v), pts[i]);
    EXPECT_LE(fixtures::relative_error(eval(lhs, pts[i]), combined), 1e-12);
  }
}

TEST(ExprProperty, SymbolicMatchesCentralDifference) {
  fixtures::ExprGenerator gen(41);
  const auto pts = random_points(100, 42);
  const double step = 1e-6;
  for (int i = 0; i < 100; ++i) {
    const Expr e = gen(3);
    const Var v = kAllVars[i % 4];
    PhasePoint plus = pts[i], minus = pts[i];
    plus[v] += step;
    minus[v] -= step;
    const double numeric = (eval(e, plus) - eval(e, minus)) / (2 * step);
    const double symbolic = eval(differentiate(e, v), pts[i]);
    EXPECT_LE(std::fabs(symbolic - numeric), 1e-6 * (1.0 + std::fabs(symbolic)))
        << to_string(e) << " d/d" << name(v);
  }
}

TEST(ExprProperty, MixedPartialsCommute) {
  fixtures::ExprGenerator gen(51);
  const auto pts = random_points(100, 52);
  for (int i = 0; i < 100; ++i) {
    const Expr e = gen(3);
    const Var a = kAllVars[i % 4], b = kAllVars[(i / 4 + 1 + i) % 4];
    const double ab = eval(differentiate(differentiate(e, a), b), pts[i]);
    const double ba = eval(differentiate(differentiate(e, b), a), pts[i]);
    EXPECT_LE(fixtures::relative_error(ab, ba), 1e-10) << to_string(e);
  }
}

}  // namespace
}  // namespace crint
