#pragma once

// Hamiltonians used across the test suites, with closed forms of their
// invariants written directly in C++ so that they do not go through the
// parser or the quadrature they are used to check.

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "crint/expr.hpp"

namespace crint::fixtures {

// Separable, hyperbolic in both degrees of freedom.
inline constexpr std::string_view kExample1 = "(1/2)*(p1^2 - p2^2 - x1^2 + x2^2)";
// Separable with exponential and trigonometric parts.
inline constexpr std::string_view kExample2 = "exp(p1)*cos(p2) + exp(-x1)*sin(x2)";
// Non-separable degree-8 polynomial.
inline constexpr std::string_view kExample3 =
    "(1/4)*(x1^4 - 6*x1^2*x2^2 + x2^4)*(p1^4 - 6*p1^2*p2^2 + p2^4)"
    " + 4*x1*x2*(x1^2 - x2^2)*p1*p2*(p1^2 - p2^2)";
// Isotropic oscillator; fails both Laplacian conditions with residual 2.
inline constexpr std::string_view kOscillator = "(1/2)*(p1^2 + p2^2 + x1^2 + x2^2)";

inline constexpr std::string_view kExample2Invariant = "exp(-x1)*cos(x2) - exp(p1)*sin(p2)";

inline double example1_hamiltonian(const PhasePoint& q) {
  return 0.5 * (q.p1 * q.p1 - q.p2 * q.p2 - q.x1 * q.x1 + q.x2 * q.x2);
}

inline double example1_invariant(const PhasePoint& q) { return -(q.x1 * q.x2 + q.p1 * q.p2); }

inline double example2_invariant(const PhasePoint& q) {
  return std::exp(-q.x1) * std::cos(q.x2) - std::exp(q.p1) * std::sin(q.p2);
}

// Example 3 invariant exactly as it appears in the source material. It does
// not satisfy the Cauchy-Riemann relations with Example 3's H.
inline double example3_invariant_as_printed(const PhasePoint& q) {
  return (q.x1 * q.p1 + q.x2 * q.p2) * (q.x2 * q.p1 + q.x1 * q.p2) *
         ((q.x1 + q.x2) * q.p1 - (q.x1 - q.x2) * q.p2) *
         ((q.x1 - q.x2) * q.p1 + (q.x1 + q.x2) * q.p2);
}

// Same product with the sign of x1*p2 in the second factor flipped; this is
// the invariant the Cauchy-Riemann relations produce (checked symbolically).
inline double example3_invariant(const PhasePoint& q) {
  return (q.x1 * q.p1 + q.x2 * q.p2) * (q.x2 * q.p1 - q.x1 * q.p2) *
         ((q.x1 + q.x2) * q.p1 - (q.x1 - q.x2) * q.p2) *
         ((q.x1 - q.x2) * q.p1 + (q.x1 + q.x2) * q.p2);
}

inline std::vector<PhasePoint> random_points(std::size_t n, std::uint64_t seed, double lo = -1.0,
                                             double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<PhasePoint> pts(n);
  for (auto& q : pts) q = {u(rng), u(rng), u(rng), u(rng)};
  return pts;
}

inline double relative_error(double actual, double expected) {
  return std::fabs(actual - expected) / std::max(1.0, std::fabs(expected));
}

}  // namespace crint::fixtures
