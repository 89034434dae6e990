#include "crint/deriv.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "crint/errors.hpp"

namespace crint {

double GradientVec::operator[](Var v) const noexcept {
  switch (v) {
    case Var::x1: return dx1;
    case Var::p1: return dp1;
    case Var::x2: return dx2;
    case Var::p2: return dp2;
  }
  return 0.0;
}

double& GradientVec::operator[](Var v) noexcept {
  switch (v) {
    case Var::x1: return dx1;
    case Var::p1: return dp1;
    case Var::x2: return dx2;
    case Var::p2: break;
  }
  return dp2;
}

double GradientVec::max_abs() const noexcept {
  return std::max({std::fabs(dx1), std::fabs(dp1), std::fabs(dx2), std::fabs(dp2)});
}

struct Derivatives::Cache {
  explicit Cache(Expr h) : function(std::move(h)) {}

  Expr function;
  std::array<std::once_flag, 4> first_once;
  std::array<Expr, 4> first;
  std::array<std::once_flag, 16> second_once;
  std::array<Expr, 16> second;
};

Derivatives::Derivatives(Expr h) : cache_(std::make_shared<Cache>(simplify(h))) {}

const Expr& Derivatives::function() const noexcept { return cache_->function; }

const Expr& Derivatives::first(Var v) const {
  const std::size_t i = index(v);
  std::call_once(cache_->first_once[i],
                 [&] { cache_->first[i] = differentiate(cache_->function, v); });
  return cache_->first[i];
}

const Expr& Derivatives::second(Var vi, Var vj) const {
  const std::size_t k = 4 * index(vi) + index(vj);
  std::call_once(cache_->second_once[k],
                 [&] { cache_->second[k] = differentiate(first(vi), vj); });
  return cache_->second[k];
}

GradientVec gradient(const Derivatives& d, const PhasePoint& pt) {
  GradientVec g;
  for (Var v : kAllVars) g[v] = eval(d.first(v), pt);
  return g;
}

GradientVec gradient(const Expr& h, const PhasePoint& pt) { return gradient(Derivatives(h), pt); }

double second_partial(const Derivatives& d, const PhasePoint& pt, Var vi, Var vj) {
  return eval(d.second(vi, vj), pt);
}

double second_partial(const Expr& h, const PhasePoint& pt, Var vi, Var vj) {
  return second_partial(Derivatives(h), pt, vi, vj);
}

double numeric_second_partial(const Expr& h, const PhasePoint& pt, Var vi, Var vj,
                              double step) {
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw UsageError("finite-difference step must be positive");
  }
  auto at = [&](double si, double sj) {
    PhasePoint q = pt;
    q[vi] += si;
    q[vj] += sj;
    return eval(h, q);
  };
  if (vi == vj) {
    return (at(step, 0.0) - 2.0 * eval(h, pt) + at(-step, 0.0)) / (step * step);
  }
  return (at(step, step) - at(step, -step) - at(-step, step) + at(-step, -step)) /
         (4.0 * step * step);
}

}  // namespace crint
