#pragma once

// Construction of the second constant of motion I.
//
// When H passes the integrability test, the one-form whose components are
//
//   I_x1 = -H_x2,   I_p1 = H_p2,   I_x2 = H_x1,   I_p2 = -H_p1
//
// is exact, and I is recovered by integrating it along any path. The free
// additive constant is fixed by requiring I(base) = 0.

#include <optional>
#include <vector>

#include "crint/deriv.hpp"
#include "crint/expr.hpp"

namespace crint {

/// Composite Gauss-Legendre rule, 8 nodes per segment.
struct QuadratureSetting {
  static constexpr int kNodesPerSegment = 8;

  int segments = 16;
  double abs_tolerance = 1e-10;

  /// Throws UsageError unless segments >= 1 and abs_tolerance > 0.
  void validate() const;
};

/// Gradient of I dictated by the Cauchy-Riemann relations, at `pt`.
GradientVec cr_gradient_of_I(const Derivatives& h, const PhasePoint& pt);
GradientVec cr_gradient_of_I(const Expr& h, const PhasePoint& pt);

/// Integral of the Cauchy-Riemann one-form along the polyline through
/// `vertices`. Throws PathDomainError if a quadrature node is outside the
/// domain of H's first partials.
double line_integral(const Derivatives& h, const std::vector<PhasePoint>& vertices,
                     const QuadratureSetting& q);

class InvariantFn {
 public:
  enum class Backend { line_integral, closed_form };

  /// Evaluates I by quadrature along the straight segment base -> pt.
  static InvariantFn line_integral(const Expr& h, const PhasePoint& base,
                                   const QuadratureSetting& q = {});
  /// Wraps a known closed form, shifted so that the value at `base` is zero.
  static InvariantFn closed_form(const Expr& h, const Expr& invariant, const PhasePoint& base);

  double operator()(const PhasePoint& pt) const { return value(pt); }
  double value(const PhasePoint& pt) const;

  /// |Q(K) - Q(2K)| for the line-integral backend, 0 for a closed form.
  double error_estimate(const PhasePoint& pt) const;

  Backend backend() const noexcept { return backend_; }
  const Expr& hamiltonian() const noexcept { return derivatives_.function(); }
  const PhasePoint& base() const noexcept { return base_; }
  /// Additive constant c with value(pt) = raw(pt) + c and value(base) = 0.
  double normalization() const noexcept { return normalization_; }
  const QuadratureSetting& quadrature() const noexcept { return quadrature_; }
  const std::optional<Expr>& closed_form_expr() const noexcept { return closed_form_; }

 private:
  InvariantFn(Derivatives d, PhasePoint base, Backend backend)
      : derivatives_(std::move(d)), base_(base), backend_(backend) {}

  Derivatives derivatives_;
  PhasePoint base_;
  Backend backend_;
  QuadratureSetting quadrature_{};
  std::optional<Expr> closed_form_;
  double normalization_ = 0.0;
};

/// Line-integral invariant with I(base) = 0. Refuses constant Hamiltonians
/// (DegenerateInputError). Conditions are the caller's responsibility.
InvariantFn build_invariant(const Expr& h, const PhasePoint& base,
                            const QuadratureSetting& q = {});

/// |integral along a -> b  -  integral along a -> waypoint -> b|.
double path_independence_residual(const Expr& h, const PhasePoint& a, const PhasePoint& b,
                                  const PhasePoint& waypoint, const QuadratureSetting& q = {});

/// Closed-form I with I(0, 0, 0, 0) = 0 for polynomial H, built by term-wise
/// antidifferentiation: integrate I_x1 in x1, then fix the remainder against
/// I_x2, I_p1 and I_p2 in turn. Throws UnsupportedClassError for
/// non-polynomial input and NonExactError when a remainder still depends on
/// an already integrated variable.
Expr symbolic_invariant(const Expr& h);

}  // namespace crint
