#pragma once

// First and second partial derivatives of a scalar field on phase space.
//
// Symbolic derivatives are authoritative. `numeric_second_partial` is an
// independent central-difference estimate kept for cross-checking.

#include <array>
#include <memory>

#include "crint/expr.hpp"

namespace crint {

/// Partials of a scalar field at a point, ordered (x1, p1, x2, p2).
struct GradientVec {
  double dx1 = 0.0;
  double dp1 = 0.0;
  double dx2 = 0.0;
  double dp2 = 0.0;

  double operator[](Var v) const noexcept;
  double& operator[](Var v) noexcept;
  double max_abs() const noexcept;

  friend bool operator==(const GradientVec&, const GradientVec&) = default;
};

/// Lazily built derivative expressions of one Hamiltonian. Each partial is
/// computed at most once and is safe to read from several threads. Copies
/// share the same cache.
class Derivatives {
 public:
  explicit Derivatives(Expr h);

  const Expr& function() const noexcept;
  const Expr& first(Var v) const;
  /// d/d`vj` of d/d`vi`; both orders are kept so symmetry can be checked.
  const Expr& second(Var vi, Var vj) const;

 private:
  struct Cache;
  std::shared_ptr<Cache> cache_;
};

GradientVec gradient(const Derivatives& d, const PhasePoint& pt);
GradientVec gradient(const Expr& h, const PhasePoint& pt);

double second_partial(const Derivatives& d, const PhasePoint& pt, Var vi, Var vj);
double second_partial(const Expr& h, const PhasePoint& pt, Var vi, Var vj);

inline constexpr double kDefaultDifferenceStep = 1e-4;

/// Central-difference estimate of d^2 h / d vi d vj. Throws UsageError for a
/// non-positive step and DomainError if a stencil point leaves the domain.
double numeric_second_partial(const Expr& h, const PhasePoint& pt, Var vi, Var vj,
                              double step = kDefaultDifferenceStep);

}  // namespace crint
