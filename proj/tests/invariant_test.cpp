#include "crint/invariant.hpp"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "crint/errors.hpp"
#include "fixtures.hpp"

namespace crint {
namespace {

using fixtures::random_points;

const PhasePoint kOrigin{};

TEST(CrGradient, ExampleOne) {
  EXPECT_EQ(cr_gradient_of_I(parse(fixtures::kExample1), {1, 2, 3, 4}),
            (GradientVec{-3, -4, -1, -2}));
}

TEST(CrGradient, ExampleTwoAtOrigin) {
  EXPECT_EQ(cr_gradient_of_I(parse(fixtures::kExample2), kOrigin), (GradientVec{-1, 0, 0, -1}));
}

TEST(CrGradient, VanishesAtCriticalPoint) {
  EXPECT_EQ(cr_gradient_of_I(parse(fixtures::kExample1), kOrigin), GradientVec{});
}

TEST(CrGradient, MatchesClosedFormGradients) {
  // Hand-differentiated closed forms.
  const Expr h1 = parse(fixtures::kExample1), h2 = parse(fixtures::kExample2);
  for (const PhasePoint& q : random_points(50, 1)) {
    EXPECT_EQ(cr_gradient_of_I(h1, q), (GradientVec{-q.x2, -q.p2, -q.x1, -q.p1}));
    const GradientVec g = cr_gradient_of_I(h2, q);
    EXPECT_NEAR(g.dx1, -std::exp(-q.x1) * std::cos(q.x2), 1e-15);
    EXPECT_NEAR(g.dp1, -std::exp(q.p1) * std::sin(q.p2), 1e-15);
    EXPECT_NEAR(g.dx2, -std::exp(-q.x1) * std::sin(q.x2), 1e-15);
    EXPECT_NEAR(g.dp2, -std::exp(q.p1) * std::cos(q.p2), 1e-15);
  }
}

TEST(BuildInvariant, ExampleOneGolden) {
  const InvariantFn inv = build_invariant(parse(fixtures::kExample1), kOrigin);
  EXPECT_NEAR(inv({1, 2, 3, 4}), -11.0, 1e-8);
  EXPECT_EQ(inv.backend(), InvariantFn::Backend::line_integral);
}

TEST(BuildInvariant, ExampleTwoGolden) {
  const InvariantFn inv = build_invariant(parse(fixtures::kExample2), kOrigin);
  EXPECT_NEAR(inv({0, 0, std::numbers::pi / 2, 0}), -1.0, 1e-8);
}

TEST(BuildInvariant, VanishesAtBase) {
  const PhasePoint base{0.3, -0.7, 0.1, 0.5};
  for (std::string_view text : {fixtures::kExample1, fixtures::kExample2, fixtures::kExample3}) {
    EXPECT_EQ(build_invariant(parse(text), base)(base), 0.0) << text;
  }
}

TEST(BuildInvariant, MatchesClosedForms) {
  const InvariantFn i1 = build_invariant(parse(fixtures::kExample1), kOrigin);
  const InvariantFn i2 = build_invariant(parse(fixtures::kExample2), kOrigin);
  const InvariantFn i3 = build_invariant(parse(fixtures::kExample3), kOrigin);
  const double c2 = -fixtures::example2_invariant(kOrigin);
  for (const PhasePoint& pt : random_points(100, 2)) {
    EXPECT_NEAR(i1(pt), fixtures::example1_invariant(pt), 1e-8);
    EXPECT_NEAR(i2(pt), fixtures::example2_invariant(pt) + c2, 1e-8);
    EXPECT_NEAR(i3(pt), fixtures::example3_invariant(pt), 1e-8);
  }
}

TEST(BuildInvariant, RefusesConstantHamiltonian) {
  EXPECT_THROW((void)build_invariant(parse("3"), kOrigin), DegenerateInputError);
}

TEST(BuildInvariant, RejectsBadQuadrature) {
  EXPECT_THROW((void)build_invariant(parse(fixtures::kExample1), kOrigin, {.segments = 0}),
               UsageError);
  EXPECT_THROW((void)build_invariant(parse(fixtures::kExample1), kOrigin,
                                     {.segments = 4, .abs_tolerance = 0.0}),
               UsageError);
}

TEST(BuildInvariant, PathThroughSingularity) {
  const InvariantFn inv = build_invariant(parse("x1*ln(x1) + p1^2"), {1, 0, 0, 0});
  EXPECT_NO_THROW((void)inv({2, 0.5, 0.1, 0.1}));
  try {
    (void)inv({-1, 0, 0, 0});
    FAIL() << "expected a path domain error";
  } catch (const PathDomainError& e) {
    EXPECT_NE(std::string(e.what()).find("different base point"), std::string::npos);
  }
}

TEST(BuildInvariant, ErrorEstimateIsSmallForSmoothIntegrand) {
  const InvariantFn inv = build_invariant(parse(fixtures::kExample2), kOrigin);
  EXPECT_LE(inv.error_estimate({0.9, -0.8, 0.7, -0.6}), inv.quadrature().abs_tolerance);
}

TEST(ClosedFormBackend, NormalizesAtBase) {
  const PhasePoint base{0.5, 0.5, 0.5, 0.5};
  const Expr h = parse(fixtures::kExample2);
  const InvariantFn inv = InvariantFn::closed_form(h, parse(fixtures::kExample2Invariant), base);
  EXPECT_EQ(inv(base), 0.0);
  EXPECT_EQ(inv.error_estimate(base), 0.0);
  const InvariantFn quad = build_invariant(h, base);
  for (const PhasePoint& pt : random_points(20, 3)) EXPECT_NEAR(inv(pt), quad(pt), 1e-10);
}

TEST(PathIndependence, ExampleOne) {
  EXPECT_LE(path_independence_residual(parse(fixtures::kExample1), kOrigin, {1, 1, 1, 1},
                                       {1, 0, 0, 0}),
            1e-9);
}

TEST(PathIndependence, OscillatorIsNotExact) {
  EXPECT_GT(path_independence_residual(parse(fixtures::kOscillator), kOrigin, {1, 0, 1, 0},
                                       {1, 0, 0, 0}),
            1e-3);
}

TEST(PathIndependence, ClosedLoop) {
  const PhasePoint a{0.2, 0.1, -0.4, 0.3};
  EXPECT_LE(path_independence_residual(parse(fixtures::kExample2), a, a, {1, -1, 0.5, 0}), 1e-10);
}

TEST(SymbolicInvariant, ExampleOne) {
  const Expr inv = symbolic_invariant(parse(fixtures::kExample1));
  for (const PhasePoint& pt : random_points(100, 4)) {
    EXPECT_NEAR(eval(inv, pt), fixtures::example1_invariant(pt), 1e-14);
  }
}

TEST(SymbolicInvariant, ExampleThree) {
  const Expr inv = symbolic_invariant(parse(fixtures::kExample3));
  for (const PhasePoint& pt : random_points(100, 5, -2, 2)) {
    EXPECT_LE(fixtures::relative_error(eval(inv, pt), fixtures::example3_invariant(pt)), 1e-9);
  }
}

TEST(SymbolicInvariant, Linear) {
  EXPECT_TRUE(structurally_equal(symbolic_invariant(parse("x1")), parse("x2")));
}

TEST(SymbolicInvariant, GradientMatchesCrGradient) {
  for (std::string_view text : {fixtures::kExample1, fixtures::kExample3,
                                std::string_view("x1^3 - 3*x1*x2^2 + p1*p2 + 2*x1")}) {
    const Expr h = parse(text);
    const Expr inv = symbolic_invariant(h);
    for (const PhasePoint& pt : random_points(100, 6)) {
      const GradientVec expected = cr_gradient_of_I(h, pt);
      const GradientVec actual = gradient(inv, pt);
      for (Var v : kAllVars) EXPECT_NEAR(actual[v], expected[v], 1e-9) << text;
    }
    EXPECT_EQ(eval(inv, kOrigin), 0.0);
  }
}

TEST(SymbolicInvariant, NonPolynomialIsUnsupported) {
  EXPECT_THROW((void)symbolic_invariant(parse(fixtures::kExample2)), UnsupportedClassError);
  EXPECT_THROW((void)symbolic_invariant(parse("x1/p1")), UnsupportedClassError);
}

TEST(SymbolicInvariant, ViolatedConditionsAreNotExact) {
  EXPECT_THROW((void)symbolic_invariant(parse(fixtures::kOscillator)), NonExactError);
}

TEST(SymbolicInvariant, ConstantIsDegenerate) {
  EXPECT_THROW((void)symbolic_invariant(parse("2 + 0*x1")), DegenerateInputError);
}

TEST(Quadrature, ExactForExampleThreeWithOneSegment) {
  const QuadratureSetting one{.segments = 1};
  const InvariantFn inv = build_invariant(parse(fixtures::kExample3), kOrigin, one);
  for (const PhasePoint& pt : random_points(20, 7, -2, 2)) {
    EXPECT_LE(fixtures::relative_error(inv(pt), fixtures::example3_invariant(pt)), 1e-12);
  }
}

// ---------------------------------------------------------------------------
// Properties

TEST(InvariantProperty, FiniteDifferenceGradientMatchesCr) {
  const double step = 1e-5;
  for (std::string_view text : {fixtures::kExample1, fixtures::kExample2, fixtures::kExample3}) {
    const Expr h = parse(text);
    const InvariantFn inv = build_invariant(h, kOrigin);
    for (const PhasePoint& pt : random_points(50, 8)) {
      const GradientVec expected = cr_gradient_of_I(h, pt);
      for (Var v : kAllVars) {
        PhasePoint plus = pt, minus = pt;
        plus[v] += step;
        minus[v] -= step;
        const double fd = (inv(plus) - inv(minus)) / (2 * step);
        EXPECT_LE(std::fabs(fd - expected[v]), 1e-5 * std::max(1.0, std::fabs(expected[v])))
            << text << " d/d" << name(v);
      }
    }
  }
}

TEST(InvariantProperty, BaseShiftIsConstant) {
  for (std::string_view text : {fixtures::kExample1, fixtures::kExample2, fixtures::kExample3}) {
    const Expr h = parse(text);
    const InvariantFn a = build_invariant(h, kOrigin);
    const InvariantFn b = build_invariant(h, {0.5, -0.25, 0.75, 0.1});
    const auto pts = random_points(50, 9);
    const double shift = a(pts.front()) - b(pts.front());
    for (const PhasePoint& pt : pts) EXPECT_NEAR(a(pt) - b(pt), shift, 1e-8) << text;
  }
}

TEST(InvariantProperty, SymbolicMatchesLineIntegral) {
  for (std::string_view text : {fixtures::kExample1, fixtures::kExample3}) {
    const Expr h = parse(text);
    const Expr sym = symbolic_invariant(h);
    const InvariantFn quad = build_invariant(h, kOrigin);
    for (const PhasePoint& pt : random_points(100, 10)) EXPECT_NEAR(eval(sym, pt), quad(pt), 1e-8);
  }
}

TEST(InvariantProperty, QuadratureConverges) {
  // Far from the base the integrand varies enough for low segment counts to
  // show truncation error above rounding.
  const Expr h = parse(fixtures::kExample2);
  const PhasePoint pt{-5, 5, 5, 5};
  const double exact = fixtures::example2_invariant(pt) - fixtures::example2_invariant(kOrigin);
  double previous = 0.0;
  for (int k : {1, 2, 4}) {
    const double error =
        std::fabs(build_invariant(h, kOrigin, {.segments = k})(pt) - exact);
    if (k > 1) {
      EXPECT_GE(previous / error, 4.0) << "segments " << k;
    }
    previous = error;
  }
}

}  // namespace
}  // namespace crint
