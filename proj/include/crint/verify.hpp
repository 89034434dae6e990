#pragma once

// Dynamical checks on a Hamiltonian and its constructed invariant: flow
// integration with conservation monitoring, Poisson brackets, functional
// independence, and agreement with the complexified Hamilton equations.

#include <array>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "crint/deriv.hpp"
#include "crint/expr.hpp"

namespace crint {

using ScalarField = std::function<double(const PhasePoint&)>;

/// Time derivative (dx1, dp1, dx2, dp2)/dt = (H_p1, -H_x1, H_p2, -H_x2).
std::array<double, 4> hamilton_rhs(const Derivatives& h, const PhasePoint& pt);
std::array<double, 4> hamilton_rhs(const Expr& h, const PhasePoint& pt);

enum class Method { rk4, leapfrog };
std::string_view name(Method m) noexcept;

struct TrajectorySample {
  double t = 0.0;
  PhasePoint pt;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  double step = 0.0;
  Method method = Method::rk4;
  double max_dH = 0.0;
  std::optional<double> max_dI;  // present when an invariant was supplied
  bool truncated = false;        // the flow left the domain before T
  std::string truncation_reason;
};

/// Integrates Hamilton's equations from `pt0` over [0, T] with uniform step
/// `h`; the number of steps is ceil(T / h), so the last sample may overshoot
/// T by less than one step. RK4 accumulates the state with compensated
/// summation. Leapfrog (kick-drift-kick) requires H = T(p) + V(x).
///
/// Throws UsageError for T <= 0, h <= 0, h > T, or leapfrog on a
/// non-separable H. A domain exit truncates the trajectory and sets the flag.
Trajectory integrate_flow(const Expr& h, const PhasePoint& pt0, double T, double step,
                          Method method = Method::rk4, const ScalarField& invariant = {});

/// Standard Poisson bracket sum_k (F_xk G_pk - G_xk F_pk) of two gradients.
double poisson_bracket(const GradientVec& f, const GradientVec& g) noexcept;

inline constexpr double kBracketDifferenceStep = 1e-5;

/// |{H, I}| with I's gradient from central differences of `invariant`.
double bracket_residual(const Derivatives& h, const ScalarField& invariant, const PhasePoint& pt,
                        double fd_step = kBracketDifferenceStep);
double bracket_residual(const Expr& h, const ScalarField& invariant, const PhasePoint& pt,
                        double fd_step = kBracketDifferenceStep);

/// |{H, I}| with I's gradient from the Cauchy-Riemann substitution. This is
/// an algebraic identity and vanishes up to rounding.
double cr_bracket_residual(const Derivatives& h, const PhasePoint& pt);

enum class Independence { independent, indeterminate };
std::string_view name(Independence v) noexcept;

/// Column pairs of the 2x4 gradient matrix, in the order minors are stored.
inline constexpr std::array<std::array<Var, 2>, 6> kMinorColumns = {{
    {Var::x1, Var::p1},
    {Var::x1, Var::x2},
    {Var::x1, Var::p2},
    {Var::p1, Var::x2},
    {Var::p1, Var::p2},
    {Var::x2, Var::p2},
}};

struct IndependenceResult {
  Independence verdict = Independence::indeterminate;
  std::optional<PhasePoint> witness;
  double minor = 0.0;                // largest-magnitude signed minor at the witness
  std::array<Var, 2> columns{};      // its column pair
  std::array<double, 6> minors{};    // all minors at the witness, kMinorColumns order
};

inline constexpr double kIndependenceTolerance = 1e-8;

/// Looks for a 2x2 minor of the stacked gradients [grad H; grad I] with
/// |minor| > tol, grad I from the Cauchy-Riemann relations. Reports the
/// largest minor found. Throws UsageError for an empty point list.
IndependenceResult independence_check(const Expr& h, const std::vector<PhasePoint>& pts,
                                      double tol = kIndependenceTolerance);

/// Complex coordinates z = x1 + i x2 and w = p1 - i p2, so that the chart
/// components are x = x1, y = x2, p = p1, q = -p2.
struct ComplexPoint {
  std::complex<double> z;
  std::complex<double> w;
};

struct ComplexChart {
  static ComplexPoint to_complex(const PhasePoint& pt) noexcept;
  static PhasePoint from_complex(const ComplexPoint& c) noexcept;
  /// Euclidean distance between the real components of two chart points.
  static double distance(const ComplexPoint& a, const ComplexPoint& b) noexcept;
};

/// Integrates both the real Hamilton flow and the complexified flow
/// dz/dt = dF/dw, dw/dt = -dF/dz (F analytic with Re F = H under the chart)
/// with RK4, and returns the largest chart distance between them. T = 0
/// returns 0.
double complex_flow_residual(const Expr& h, const PhasePoint& pt0, double T, double step);

}  // namespace crint
