#include "vchoq/spaces.hpp"

#include <cmath>
#include <limits>

#include "vchoq/choquet.hpp"
#include "vchoq/errors.hpp"

namespace vchoq {

LpConfig::LpConfig(double p_) : p(p_) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw UsageError("L_p exponent must satisfy 1 <= p < inf");
  q = p == 1.0 ? std::numeric_limits<double>::infinity() : p / (p - 1.0);
}

namespace {

double root(double integral, double p) {
  return integral <= 0.0 ? 0.0 : std::pow(integral, 1.0 / p);
}

}  // namespace

double lp_norm(const PiecewiseLinearFunction& f, const LpConfig& cfg,
               const Capacity& mu, const QuadratureConfig& quad) {
  const auto r = choquet_power_integral(abs(f), cfg.p, IntervalUnion::full(), mu, quad);
  return root(r.value, cfg.p);
}

double lp_norm(const StepFunction& f, const LpConfig& cfg, const Capacity& mu,
               const QuadratureConfig& quad) {
  const auto zero = StepFunction::constant(0.0);
  const auto r = choquet_power_integral(abs_diff(f, zero), cfg.p,
                                        IntervalUnion::full(), mu, quad);
  return root(r.value, cfg.p);
}

double lp_norm(const Function& f, const LpConfig& cfg, const Capacity& mu,
               const QuadratureConfig& quad) {
  return std::visit([&](const auto& g) { return lp_norm(g, cfg, mu, quad); }, f);
}

double uniform_norm(const PiecewiseLinearFunction& f) {
  return std::max(std::abs(f.min_value()), std::abs(f.max_value()));
}

double uniform_norm(const StepFunction& f) {
  return std::max(std::abs(f.min_value()), std::abs(f.max_value()));
}

double uniform_norm(const Function& f) {
  return std::visit([](const auto& g) { return uniform_norm(g); }, f);
}

double holder_margin(const PiecewiseLinearFunction& f,
                     const PiecewiseLinearFunction& g, const LpConfig& cfg,
                     const Capacity& mu, const QuadratureConfig& quad) {
  if (!(cfg.p > 1.0)) throw UsageError("holder_margin needs p > 1");
  if (!mu.claims_submodular()) {
    throw PreconditionError("holder_margin needs a submodular capacity");
  }
  const double fp = lp_norm(f, cfg, mu, quad);
  const double gq = lp_norm(g, LpConfig(cfg.q), mu, quad);
  const double fg =
      choquet_integral(product(abs(f), abs(g)), IntervalUnion::full(), mu, quad).value;
  return fp * gq - fg;
}

}  // namespace vchoq
