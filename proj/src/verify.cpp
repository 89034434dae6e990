#include "crint/verify.hpp"

#include <cmath>

#include "crint/errors.hpp"
#include "crint/integrability.hpp"
#include "crint/invariant.hpp"

namespace crint {

namespace {

using State = std::array<double, 4>;

State axpy(const State& y, double a, const State& k) {
  return {y[0] + a * k[0], y[1] + a * k[1], y[2] + a * k[2], y[3] + a * k[3]};
}

template <class Rhs>
State rk4_increment(const Rhs& f, const State& y, double h) {
  const State k1 = f(y);
  const State k2 = f(axpy(y, 0.5 * h, k1));
  const State k3 = f(axpy(y, 0.5 * h, k2));
  const State k4 = f(axpy(y, h, k3));
  State inc;
  for (std::size_t i = 0; i < 4; ++i) inc[i] = h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return inc;
}

// Kahan-compensated accumulation of the state.
struct CompensatedState {
  State y{};
  State carry{};

  void add(const State& inc) {
    for (std::size_t i = 0; i < 4; ++i) {
      const double t = inc[i] - carry[i];
      const double s = y[i] + t;
      carry[i] = (s - y[i]) - t;
      y[i] = s;
    }
  }
};

std::size_t step_count(double T, double h) {
  if (!(T > 0.0) || !std::isfinite(T)) throw UsageError("integration time T must be positive");
  if (!(h > 0.0) || !std::isfinite(h)) throw UsageError("step h must be positive");
  const double ratio = T / h;
  if (ratio < 1.0 - 1e-12) throw UsageError("step h must not exceed T");
  return static_cast<std::size_t>(std::max(1.0, std::ceil(ratio * (1.0 - 1e-12))));
}

State to_complex_state(const PhasePoint& pt) { return {pt.x1, pt.x2, pt.p1, -pt.p2}; }

PhasePoint from_complex_state(const State& s) { return {s[0], s[2], s[1], -s[3]}; }

}  // namespace

std::array<double, 4> hamilton_rhs(const Derivatives& h, const PhasePoint& pt) {
  const GradientVec g = gradient(h, pt);
  return {g.dp1, -g.dx1, g.dp2, -g.dx2};
}

std::array<double, 4> hamilton_rhs(const Expr& h, const PhasePoint& pt) {
  return hamilton_rhs(Derivatives(h), pt);
}

std::string_view name(Method m) noexcept { return m == Method::rk4 ? "rk4" : "leapfrog"; }

Trajectory integrate_flow(const Expr& h, const PhasePoint& pt0, double T, double step,
                          Method method, const ScalarField& invariant) {
  const std::size_t n = step_count(T, step);
  const Derivatives d(h);

  std::optional<SeparableParts> parts;
  std::optional<Derivatives> kinetic, potential;
  if (method == Method::leapfrog) {
    parts = split_separable(d.function());
    if (!parts) {
      throw UsageError("leapfrog needs a separable Hamiltonian T(p1, p2) + V(x1, x2); got " +
                       to_string(h));
    }
    kinetic.emplace(parts->kinetic);
    potential.emplace(parts->potential);
  }

  Trajectory traj;
  traj.step = step;
  traj.method = method;
  traj.samples.reserve(n + 1);
  traj.samples.push_back({0.0, pt0});

  const double h0 = eval(d.function(), pt0);
  const double i0 = invariant ? invariant(pt0) : 0.0;
  if (invariant) traj.max_dI = 0.0;

  auto rhs = [&](const State& y) { return hamilton_rhs(d, PhasePoint::from_array(y)); };

  CompensatedState state;
  state.y = pt0.to_array();
  for (std::size_t k = 1; k <= n; ++k) {
    try {
      if (method == Method::rk4) {
        state.add(rk4_increment(rhs, state.y, step));
      } else {
        PhasePoint pt = PhasePoint::from_array(state.y);
        GradientVec gv = gradient(*potential, pt);
        pt.p1 -= 0.5 * step * gv.dx1;
        pt.p2 -= 0.5 * step * gv.dx2;
        const GradientVec gt = gradient(*kinetic, pt);
        pt.x1 += step * gt.dp1;
        pt.x2 += step * gt.dp2;
        gv = gradient(*potential, pt);
        pt.p1 -= 0.5 * step * gv.dx1;
        pt.p2 -= 0.5 * step * gv.dx2;
        state.y = pt.to_array();
      }
      const PhasePoint pt = PhasePoint::from_array(state.y);
      if (!pt.is_finite()) throw DomainError("non-finite state", to_string(pt));
      const double dH = std::fabs(eval(d.function(), pt) - h0);
      const double dI = invariant ? std::fabs(invariant(pt) - i0) : 0.0;
      traj.samples.push_back({static_cast<double>(k) * step, pt});
      traj.max_dH = std::max(traj.max_dH, dH);
      if (invariant) traj.max_dI = std::max(*traj.max_dI, dI);
    } catch (const DomainError& e) {
      traj.truncated = true;
      traj.truncation_reason = "left the domain after t = " +
                               std::to_string(traj.samples.back().t) + ": " + e.what();
      break;
    }
  }
  return traj;
}

double poisson_bracket(const GradientVec& f, const GradientVec& g) noexcept {
  return (f.dx1 * g.dp1 - g.dx1 * f.dp1) + (f.dx2 * g.dp2 - g.dx2 * f.dp2);
}

double bracket_residual(const Derivatives& h, const ScalarField& invariant, const PhasePoint& pt,
                        double fd_step) {
  if (!(fd_step > 0.0)) throw UsageError("finite-difference step must be positive");
  GradientVec gi;
  for (Var v : kAllVars) {
    PhasePoint plus = pt, minus = pt;
    plus[v] += fd_step;
    minus[v] -= fd_step;
    gi[v] = (invariant(plus) - invariant(minus)) / (2.0 * fd_step);
  }
  return std::fabs(poisson_bracket(gradient(h, pt), gi));
}

double bracket_residual(const Expr& h, const ScalarField& invariant, const PhasePoint& pt,
                        double fd_step) {
  return bracket_residual(Derivatives(h), invariant, pt, fd_step);
}

double cr_bracket_residual(const Derivatives& h, const PhasePoint& pt) {
  return std::fabs(poisson_bracket(gradient(h, pt), cr_gradient_of_I(h, pt)));
}

std::string_view name(Independence v) noexcept {
  return v == Independence::independent ? "independent" : "indeterminate";
}

IndependenceResult independence_check(const Expr& h, const std::vector<PhasePoint>& pts,
                                      double tol) {
  if (pts.empty()) throw UsageError("independence check needs at least one point");
  const Derivatives d(h);
  IndependenceResult result;
  double best = -1.0;
  for (const PhasePoint& pt : pts) {
    const GradientVec gh = gradient(d, pt);
    const GradientVec gi = cr_gradient_of_I(d, pt);
    std::array<double, 6> minors;
    std::size_t arg = 0;
    for (std::size_t c = 0; c < kMinorColumns.size(); ++c) {
      const auto [a, b] = kMinorColumns[c];
      minors[c] = gh[a] * gi[b] - gh[b] * gi[a];
      if (std::fabs(minors[c]) > std::fabs(minors[arg])) arg = c;
    }
    if (std::fabs(minors[arg]) > best) {
      best = std::fabs(minors[arg]);
      result.witness = pt;
      result.minor = minors[arg];
      result.columns = kMinorColumns[arg];
      result.minors = minors;
    }
  }
  result.verdict = best > tol ? Independence::independent : Independence::indeterminate;
  if (result.verdict == Independence::indeterminate) result.witness.reset();
  return result;
}

ComplexPoint ComplexChart::to_complex(const PhasePoint& pt) noexcept {
  return {{pt.x1, pt.x2}, {pt.p1, -pt.p2}};
}

PhasePoint ComplexChart::from_complex(const ComplexPoint& c) noexcept {
  return {c.z.real(), c.w.real(), c.z.imag(), -c.w.imag()};
}

double ComplexChart::distance(const ComplexPoint& a, const ComplexPoint& b) noexcept {
  return std::sqrt(std::norm(a.z - b.z) + std::norm(a.w - b.w));
}

double complex_flow_residual(const Expr& h, const PhasePoint& pt0, double T, double step) {
  if (T == 0.0) return 0.0;
  const Trajectory real = integrate_flow(h, pt0, T, step, Method::rk4);
  if (real.truncated) throw DomainError("real flow " + real.truncation_reason, to_string(h));

  const Derivatives d(h);
  // State (Re z, Im z, Re w, Im w). With F analytic and Re F = H under the
  // chart, dF/dw = H_p1 + i H_p2 and dF/dz = H_x1 - i H_x2.
  auto rhs = [&](const State& s) -> State {
    const GradientVec g = gradient(d, from_complex_state(s));
    return {g.dp1, g.dp2, -g.dx1, g.dx2};
  };

  CompensatedState state;
  state.y = to_complex_state(pt0);
  double worst = 0.0;
  for (std::size_t k = 1; k < real.samples.size(); ++k) {
    state.add(rk4_increment(rhs, state.y, step));
    const ComplexPoint c{{state.y[0], state.y[1]}, {state.y[2], state.y[3]}};
    worst = std::max(worst, ComplexChart::distance(ComplexChart::to_complex(real.samples[k].pt), c));
  }
  return worst;
}

}  // namespace crint
