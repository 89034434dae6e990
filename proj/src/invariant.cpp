#include "crint/invariant.hpp"

#include <array>
#include <cmath>

#include "crint/errors.hpp"
#include "crint/polynomial.hpp"

namespace crint {

namespace {

// Nodes and weights of the 8-point Gauss-Legendre rule on [-1, 1].
constexpr std::array<double, 8> kNodes = {
    -0.9602898564975362, -0.7966664774136267, -0.525532409916329, -0.18343464249564978,
    0.18343464249564978, 0.525532409916329,   0.7966664774136267, 0.9602898564975362};
constexpr std::array<double, 8> kWeights = {
    0.10122853629037669, 0.22238103445337434, 0.31370664587788705, 0.36268378337836177,
    0.36268378337836177, 0.31370664587788705, 0.22238103445337434, 0.10122853629037669};

double segment_integral(const Derivatives& h, const PhasePoint& a, const PhasePoint& b,
                        int segments) {
  const std::array<double, 4> delta = {b.x1 - a.x1, b.p1 - a.p1, b.x2 - a.x2, b.p2 - a.p2};
  if (delta == std::array<double, 4>{}) return 0.0;

  double sum = 0.0;
  const double width = 1.0 / segments;
  for (int k = 0; k < segments; ++k) {
    for (std::size_t n = 0; n < kNodes.size(); ++n) {
      const double s = (k + 0.5 * (1.0 + kNodes[n])) * width;
      const PhasePoint pt{a.x1 + s * delta[0], a.p1 + s * delta[1], a.x2 + s * delta[2],
                          a.p2 + s * delta[3]};
      GradientVec g;
      try {
        g = cr_gradient_of_I(h, pt);
      } catch (const DomainError& e) {
        throw PathDomainError("integration path " + to_string(a) + " -> " + to_string(b) +
                                  " leaves the domain near " + to_string(pt) + " (" + e.what() +
                                  "); choose a different base point",
                              e.subtree());
      }
      const double dot = g.dx1 * delta[0] + g.dp1 * delta[1] + g.dx2 * delta[2] + g.dp2 * delta[3];
      sum += 0.5 * width * kWeights[n] * dot;
    }
  }
  return sum;
}

double polyline_integral(const Derivatives& h, const std::vector<PhasePoint>& vertices,
                         int segments) {
  double sum = 0.0;
  for (std::size_t i = 1; i < vertices.size(); ++i) {
    sum += segment_integral(h, vertices[i - 1], vertices[i], segments);
  }
  return sum;
}

void refuse_constant(const Derivatives& d) {
  if (d.function().is_constant_valued()) {
    throw DegenerateInputError("Hamiltonian " + to_string(d.function()) +
                               " is constant; it has no independent invariant");
  }
}

}  // namespace

void QuadratureSetting::validate() const {
  if (segments < 1) throw UsageError("quadrature segment count must be at least 1");
  if (!(abs_tolerance > 0.0)) throw UsageError("quadrature tolerance must be positive");
}

GradientVec cr_gradient_of_I(const Derivatives& h, const PhasePoint& pt) {
  const GradientVec g = gradient(h, pt);
  return {-g.dx2, g.dp2, g.dx1, -g.dp1};
}

GradientVec cr_gradient_of_I(const Expr& h, const PhasePoint& pt) {
  return cr_gradient_of_I(Derivatives(h), pt);
}

double line_integral(const Derivatives& h, const std::vector<PhasePoint>& vertices,
                     const QuadratureSetting& q) {
  q.validate();
  return polyline_integral(h, vertices, q.segments);
}

InvariantFn InvariantFn::line_integral(const Expr& h, const PhasePoint& base,
                                       const QuadratureSetting& q) {
  q.validate();
  Derivatives d(h);
  refuse_constant(d);
  // Fails early with the usual DomainError if the base point is unusable.
  (void)cr_gradient_of_I(d, base);
  InvariantFn fn(std::move(d), base, Backend::line_integral);
  fn.quadrature_ = q;
  return fn;
}

InvariantFn InvariantFn::closed_form(const Expr& h, const Expr& invariant,
                                     const PhasePoint& base) {
  InvariantFn fn(Derivatives(h), base, Backend::closed_form);
  fn.closed_form_ = invariant;
  fn.normalization_ = -eval(invariant, base);
  return fn;
}

double InvariantFn::value(const PhasePoint& pt) const {
  if (backend_ == Backend::closed_form) return eval(*closed_form_, pt) + normalization_;
  return polyline_integral(derivatives_, {base_, pt}, quadrature_.segments) + normalization_;
}

double InvariantFn::error_estimate(const PhasePoint& pt) const {
  if (backend_ == Backend::closed_form) return 0.0;
  const double coarse = polyline_integral(derivatives_, {base_, pt}, quadrature_.segments);
  const double fine = polyline_integral(derivatives_, {base_, pt}, 2 * quadrature_.segments);
  return std::fabs(coarse - fine);
}

InvariantFn build_invariant(const Expr& h, const PhasePoint& base, const QuadratureSetting& q) {
  return InvariantFn::line_integral(h, base, q);
}

double path_independence_residual(const Expr& h, const PhasePoint& a, const PhasePoint& b,
                                  const PhasePoint& waypoint, const QuadratureSetting& q) {
  q.validate();
  const Derivatives d(h);
  const double direct = polyline_integral(d, {a, b}, q.segments);
  const double detour = polyline_integral(d, {a, waypoint, b}, q.segments);
  return std::fabs(direct - detour);
}

Expr symbolic_invariant(const Expr& h) {
  const Polynomial hp = Polynomial::from_expr(simplify(h));
  if (hp.terms().empty() || (hp.terms().size() == 1 && hp.terms().begin()->first ==
                                                           Polynomial::Monomial{0, 0, 0, 0})) {
    throw DegenerateInputError("Hamiltonian " + to_string(h) +
                               " is constant; it has no independent invariant");
  }

  // Target gradient of I from the Cauchy-Riemann relations.
  const Polynomial i_x1 = -1.0 * hp.derivative(Var::x2);
  const Polynomial i_x2 = hp.derivative(Var::x1);
  const Polynomial i_p1 = hp.derivative(Var::p2);
  const Polynomial i_p2 = -1.0 * hp.derivative(Var::p1);

  double scale = 1.0;
  for (const Polynomial* g : {&i_x1, &i_x2, &i_p1, &i_p2}) {
    scale = std::max(scale, g->max_abs_coefficient());
  }
  const double threshold = 1e-12 * scale;

  Polynomial inv = i_x1.antiderivative(Var::x1);
  std::vector<Var> integrated = {Var::x1};

  auto fix = [&](Var v, const Polynomial& target) {
    const Polynomial remainder = (target - inv.derivative(v)).pruned(threshold);
    for (Var done : integrated) {
      if (remainder.depends_on(done)) {
        throw NonExactError("the Cauchy-Riemann one-form of " + to_string(h) +
                            " is not exact: the d/d" + std::string(name(v)) +
                            " remainder still depends on " + std::string(name(done)));
      }
    }
    inv += remainder.antiderivative(v);
    integrated.push_back(v);
  };
  fix(Var::x2, i_x2);
  fix(Var::p1, i_p1);
  fix(Var::p2, i_p2);

  return inv.pruned(threshold).to_expr();
}

}  // namespace crint
