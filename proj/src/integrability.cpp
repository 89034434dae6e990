#include "crint/integrability.hpp"

#include <cmath>
#include <random>

#include "crint/errors.hpp"

namespace crint {

std::string_view name(Condition c) noexcept {
  switch (c) {
    case Condition::laplacian_x: return "laplacian_x";
    case Condition::laplacian_p: return "laplacian_p";
    case Condition::mixed_sum: return "mixed_sum";
    case Condition::mixed_difference: return "mixed_difference";
  }
  return "?";
}

std::string_view name(Verdict v) noexcept {
  return v == Verdict::satisfied ? "satisfied" : "violated";
}

void SampleDomain::validate() const {
  for (Var v : kAllVars) {
    const Interval& iv = bounds[index(v)];
    if (!(iv.lo < iv.hi) || !std::isfinite(iv.lo) || !std::isfinite(iv.hi)) {
      throw UsageError("sample interval for " + std::string(name(v)) + " must satisfy lo < hi");
    }
  }
  if (samples < 1) throw UsageError("sample count must be at least 1");
}

std::vector<PhasePoint> SampleDomain::draw() const { return draw(samples); }

std::vector<PhasePoint> SampleDomain::draw(std::size_t count) const {
  validate();
  std::mt19937_64 rng(seed);
  std::vector<PhasePoint> pts;
  pts.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    PhasePoint pt;
    for (Var v : kAllVars) {
      const Interval& iv = bounds[index(v)];
      pt[v] = std::uniform_real_distribution<double>(iv.lo, iv.hi)(rng);
    }
    pts.push_back(pt);
  }
  return pts;
}

Residuals condition_residuals(const Derivatives& d, const PhasePoint& pt) {
  auto h = [&](Var a, Var b) { return second_partial(d, pt, a, b); };
  return {h(Var::x1, Var::x1) + h(Var::x2, Var::x2), h(Var::p1, Var::p1) + h(Var::p2, Var::p2),
          h(Var::x1, Var::p2) + h(Var::x2, Var::p1), h(Var::x1, Var::p1) - h(Var::x2, Var::p2)};
}

Residuals condition_residuals(const Expr& h, const PhasePoint& pt) {
  return condition_residuals(Derivatives(h), pt);
}

Residuals chart_condition_residuals(const Expr& h, const PhasePoint& pt) {
  // Slots hold the chart variables: x in x1, y in x2, p in p1, q in p2.
  const Var x = Var::x1, y = Var::x2, p = Var::p1, q = Var::p2;
  const Derivatives u(substitute(h, Var::p2, -Expr::variable(Var::p2)));
  const PhasePoint mapped{pt.x1, pt.p1, pt.x2, -pt.p2};
  auto d2 = [&](Var a, Var b) { return second_partial(u, mapped, a, b); };
  return {d2(x, x) + d2(y, y), d2(p, p) + d2(q, q), d2(x, p) + d2(y, q), d2(x, q) - d2(y, p)};
}

Residuals chart_to_condition_order(const Residuals& chart) {
  return {chart[0], chart[1], -chart[3], chart[2]};
}

namespace {

struct ResidualExprs {
  std::array<Expr, 4> residual;
  std::array<Expr, 8> hessian_entries;
};

ResidualExprs residual_expressions(const Derivatives& d) {
  auto s = [&](Var a, Var b) { return d.second(a, b); };
  ResidualExprs r;
  r.residual = {simplify(s(Var::x1, Var::x1) + s(Var::x2, Var::x2)),
                simplify(s(Var::p1, Var::p1) + s(Var::p2, Var::p2)),
                simplify(s(Var::x1, Var::p2) + s(Var::x2, Var::p1)),
                simplify(s(Var::x1, Var::p1) - s(Var::x2, Var::p2))};
  r.hessian_entries = {s(Var::x1, Var::x1), s(Var::x2, Var::x2), s(Var::p1, Var::p1),
                       s(Var::p2, Var::p2), s(Var::x1, Var::p2), s(Var::x2, Var::p1),
                       s(Var::x1, Var::p1), s(Var::x2, Var::p2)};
  return r;
}

template <std::size_t N>
ConditionReport sample_residuals(const std::array<Expr, 4>& residual,
                                 const std::array<Expr, N>& hessian_entries,
                                 const SampleDomain& dom, double tol, ToleranceMode mode,
                                 const Derivatives* degeneracy_probe) {
  if (!(tol > 0.0)) throw UsageError("tolerance must be positive");
  dom.validate();

  ConditionReport report;
  report.tolerance = tol;
  report.mode = mode;
  report.samples = dom.samples;

  bool any_nonzero_gradient = degeneracy_probe == nullptr;
  double worst = -1.0;
  bool first = true;
  for (const PhasePoint& pt : dom.draw()) {
    try {
      double frob = 0.0;
      for (const Expr& e : hessian_entries) {
        const double v = eval(e, pt);
        frob += v * v;
      }
      const double scale = std::max(1.0, std::sqrt(frob));
      for (std::size_t c = 0; c < 4; ++c) {
        const double r = std::fabs(eval(residual[c], pt));
        if (first || r > report.max_abs[c]) {
          report.max_abs[c] = r;
          report.worst_points[c] = pt;
        }
        report.max_scaled[c] = std::max(report.max_scaled[c], r / scale);
        if (r > worst) {
          worst = r;
          report.worst_point = pt;
        }
      }
      first = false;
      if (!any_nonzero_gradient && gradient(*degeneracy_probe, pt).max_abs() > 0.0) {
        any_nonzero_gradient = true;
      }
    } catch (const DomainError& e) {
      throw DomainError("sample point " + to_string(pt) + " is outside the domain: " + e.what(),
                        e.subtree());
    }
  }
  if (!any_nonzero_gradient) {
    throw DegenerateInputError(
        "Hamiltonian is constant on the sample domain (all first partials vanish)");
  }

  const Residuals& measured = mode == ToleranceMode::absolute ? report.max_abs : report.max_scaled;
  bool ok = true;
  for (double r : measured) ok = ok && r <= tol;
  report.verdict = ok ? Verdict::satisfied : Verdict::violated;
  return report;
}

}  // namespace

ConditionReport check_conditions(const Expr& h, const SampleDomain& dom, double tol,
                                 ToleranceMode mode) {
  const Derivatives d(h);
  if (d.function().is_constant_valued()) {
    throw DegenerateInputError("Hamiltonian " + to_string(h) + " is constant");
  }
  const ResidualExprs r = residual_expressions(d);
  return sample_residuals(r.residual, r.hessian_entries, dom, tol, mode, &d);
}

std::optional<SeparableParts> split_separable(const Expr& h) {
  Expr kinetic = Expr::constant(0.0);
  Expr potential = Expr::constant(0.0);
  bool ok = true;

  auto coordinate_free = [](const Expr& e) {
    return !e.depends_on(Var::x1) && !e.depends_on(Var::x2);
  };
  auto momentum_free = [](const Expr& e) {
    return !e.depends_on(Var::p1) && !e.depends_on(Var::p2);
  };

  // Walks sums, differences, negations and products with constant factors,
  // e.g. (1/2)*(p1^2 - x1^2) as well as p1^2/2 - x1^2/2.
  auto visit = [&](auto&& self, const Expr& e, double scale) -> void {
    if (!ok) return;
    if (e.kind() == Expr::Kind::binary) {
      switch (e.op()) {
        case BinaryOp::add:
        case BinaryOp::sub:
          self(self, e.lhs(), scale);
          self(self, e.rhs(), e.op() == BinaryOp::sub ? -scale : scale);
          return;
        case BinaryOp::mul:
          if (e.lhs().is_constant_valued() && !e.rhs().is_constant_valued()) {
            self(self, e.rhs(), scale * eval(e.lhs(), PhasePoint{}));
            return;
          }
          if (e.rhs().is_constant_valued() && !e.lhs().is_constant_valued()) {
            self(self, e.lhs(), scale * eval(e.rhs(), PhasePoint{}));
            return;
          }
          break;
        case BinaryOp::div:
          if (e.rhs().is_constant_valued() && !e.lhs().is_constant_valued()) {
            self(self, e.lhs(), scale / eval(e.rhs(), PhasePoint{}));
            return;
          }
          break;
      }
    }
    if (e.kind() == Expr::Kind::unary && e.fn() == UnaryFn::neg) {
      self(self, e.child(), -scale);
      return;
    }
    if (!momentum_free(e) && !coordinate_free(e)) {
      ok = false;
      return;
    }
    // Constant terms go to the potential.
    Expr& target = momentum_free(e) ? potential : kinetic;
    target = simplify(target + Expr::constant(scale) * e);
  };
  try {
    visit(visit, h, 1.0);
  } catch (const DomainError&) {
    return std::nullopt;
  }
  if (!ok) return std::nullopt;
  return SeparableParts{kinetic, potential};
}

ConditionReport check_separable_harmonic(const SeparableParts& parts, const SampleDomain& dom,
                                         double tol) {
  if (parts.kinetic.depends_on(Var::x1) || parts.kinetic.depends_on(Var::x2)) {
    throw SeparationError("kinetic part " + to_string(parts.kinetic) + " depends on a coordinate");
  }
  if (parts.potential.depends_on(Var::p1) || parts.potential.depends_on(Var::p2)) {
    throw SeparationError("potential part " + to_string(parts.potential) +
                          " depends on a momentum");
  }
  const Derivatives t(parts.kinetic);
  const Derivatives v(parts.potential);
  const std::array<Expr, 4> residual = {
      simplify(v.second(Var::x1, Var::x1) + v.second(Var::x2, Var::x2)),
      simplify(t.second(Var::p1, Var::p1) + t.second(Var::p2, Var::p2)), Expr::constant(0.0),
      Expr::constant(0.0)};
  const std::array<Expr, 4> hessian_entries = {
      v.second(Var::x1, Var::x1), v.second(Var::x2, Var::x2), t.second(Var::p1, Var::p1),
      t.second(Var::p2, Var::p2)};
  return sample_residuals(residual, hessian_entries, dom, tol, ToleranceMode::absolute, nullptr);
}

}  // namespace crint
