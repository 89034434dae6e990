#pragma once

// Second-order integrability test for two-degree-of-freedom Hamiltonians.
//
// H is certified when, everywhere on the sample domain,
//
//   H_x1x1 + H_x2x2 = 0        H_p1p1 + H_p2p2 = 0
//   H_x1p2 + H_x2p1 = 0        H_x1p1 - H_x2p2 = 0
//
// in which case u(x, y, p, q) = H(x, p, y, -q) is the real part of a function
// analytic in (x + iy, p + iq), and the imaginary part is a second constant
// of motion. A satisfied verdict is sampled evidence, not a proof; a violated
// verdict means "not certified", never "not integrable".

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "crint/deriv.hpp"
#include "crint/expr.hpp"

namespace crint {

struct Interval {
  double lo = -1.0;
  double hi = 1.0;
};

struct SampleDomain {
  std::array<Interval, 4> bounds{};  // ordered (x1, p1, x2, p2)
  std::size_t samples = 200;
  std::uint64_t seed = 42;

  /// Throws UsageError unless lo < hi everywhere and samples >= 1.
  void validate() const;
  /// `samples` points drawn uniformly from the box, reproducible from `seed`.
  std::vector<PhasePoint> draw() const;
  /// Draws `count` points with the same box and seed.
  std::vector<PhasePoint> draw(std::size_t count) const;
};

enum class Condition : std::uint8_t { laplacian_x, laplacian_p, mixed_sum, mixed_difference };

inline constexpr std::array<Condition, 4> kAllConditions = {
    Condition::laplacian_x, Condition::laplacian_p, Condition::mixed_sum,
    Condition::mixed_difference};

std::string_view name(Condition c) noexcept;

/// Residuals ordered as `Condition`.
using Residuals = std::array<double, 4>;

enum class Verdict : std::uint8_t { satisfied, violated };
std::string_view name(Verdict v) noexcept;

enum class ToleranceMode : std::uint8_t {
  absolute,           // |r| <= tol
  relative_fallback,  // |r| <= tol * max(1, local Hessian norm)
};

struct ConditionReport {
  Residuals max_abs{};     // per-condition max |residual| over the samples
  Residuals max_scaled{};  // |residual| / max(1, Frobenius norm of the Hessian)
  std::array<PhasePoint, 4> worst_points{};
  PhasePoint worst_point{};  // sample with the largest residual of any condition
  Verdict verdict = Verdict::violated;
  double tolerance = 0.0;
  ToleranceMode mode = ToleranceMode::absolute;
  std::size_t samples = 0;

  /// Human-readable caveat attached to every report.
  static constexpr std::string_view kEvidenceNote =
      "sampled evidence: a satisfied verdict is not a symbolic proof, and a violated "
      "verdict means the Hamiltonian is not certified by this test";
};

Residuals condition_residuals(const Derivatives& d, const PhasePoint& pt);
Residuals condition_residuals(const Expr& h, const PhasePoint& pt);

/// The same four conditions written for u(x, y, p, q) = H(x, p, y, -q):
///
///   u_xx + u_yy,  u_pp + u_qq,  u_xp + u_yq,  u_xq - u_yp
///
/// computed by substituting p2 -> -p2 in H and differentiating symbolically,
/// then evaluating at the mapped point (x, y, p, q) = (x1, x2, p1, -p2).
Residuals chart_condition_residuals(const Expr& h, const PhasePoint& pt);

/// Reorders chart residuals into `Condition` order. Under the chart
/// u_xp + u_yq = H_x1p1 - H_x2p2 and u_xq - u_yp = -(H_x1p2 + H_x2p1).
Residuals chart_to_condition_order(const Residuals& chart);

/// Samples the four residuals over `dom`. Throws UsageError for tol <= 0,
/// DegenerateInputError when every first partial vanishes at every sample,
/// and DomainError (naming the sample point) when a sample is outside the
/// domain of H's second partials.
ConditionReport check_conditions(const Expr& h, const SampleDomain& dom, double tol,
                                 ToleranceMode mode = ToleranceMode::absolute);

/// H = T(p1, p2) + V(x1, x2).
struct SeparableParts {
  Expr kinetic;    // T, momenta only
  Expr potential;  // V, coordinates only
};

/// Splits the top-level sum of H into momentum-only and coordinate-only
/// terms. Returns nullopt when some term mixes both.
std::optional<SeparableParts> split_separable(const Expr& h);

/// Checks that T and V are harmonic in their own two variables. Mixed
/// conditions are identically zero for this form and are reported as 0.
/// Throws SeparationError if T mentions a coordinate or V a momentum.
ConditionReport check_separable_harmonic(const SeparableParts& parts, const SampleDomain& dom,
                                         double tol);

}  // namespace crint
