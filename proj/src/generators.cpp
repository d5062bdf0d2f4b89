#include "vchoq/generators.hpp"

#include <algorithm>
#include <string>

#include "vchoq/errors.hpp"
#include "vchoq/spaces.hpp"

namespace vchoq {

FunctionClass FunctionClass::unit_ball(double p, Capacity mu) {
  if (!(p >= 1.0)) throw UsageError("unit-ball class needs p >= 1");
  return FunctionClass{Kind::kUnitBall, p, std::move(mu)};
}

FunctionClass FunctionClass::parse(std::string_view name) {
  if (name == "nonneg-pwl") return of(Kind::kNonnegPwl);
  if (name == "signed-pwl") return of(Kind::kSignedPwl);
  if (name == "nondecreasing") return of(Kind::kNondecreasing);
  if (name == "nonincreasing") return of(Kind::kNonincreasing);
  if (name == "step") return of(Kind::kStep);
  throw UsageError("unknown function class '" + std::string(name) + "'");
}

std::vector<double> jittered_grid(Rng& rng, std::size_t n) {
  std::vector<double> t(n);
  const double h = 1.0 / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    t[i] = static_cast<double>(i) * h;
    if (i > 0 && i + 1 < n) t[i] += rng.uniform(-0.4, 0.4) * h;
  }
  t.front() = 0.0;
  t.back() = 1.0;
  return t;
}

namespace {

std::vector<double> draw(Rng& rng, std::size_t n, double lo, double hi) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(lo, hi);
  return v;
}

}  // namespace

PiecewiseLinearFunction random_pwl(std::uint64_t seed, const FunctionClass& cls,
                                   std::size_t n_nodes) {
  using Kind = FunctionClass::Kind;
  if (n_nodes < 2) throw UsageError("random_function needs n_nodes >= 2");
  if (cls.kind == Kind::kStep) throw UsageError("random_pwl: step class is not PWL");
  Rng rng(seed);
  auto nodes = jittered_grid(rng, n_nodes);
  const bool signed_values = cls.kind == Kind::kSignedPwl;
  auto values = draw(rng, n_nodes, signed_values ? -1.0 : 0.0, 1.0);
  if (cls.kind == Kind::kNondecreasing) std::sort(values.begin(), values.end());
  if (cls.kind == Kind::kNonincreasing) std::sort(values.rbegin(), values.rend());
  PiecewiseLinearFunction f(std::move(nodes), std::move(values));
  if (cls.kind != Kind::kUnitBall) return f;

  if (!cls.mu) throw UsageError("unit-ball class needs a capacity");
  const double norm = lp_norm(f, LpConfig(cls.p), *cls.mu);
  if (!(norm > 0.0)) return f;
  return scale(f, 1.0 / norm);
}

StepFunction random_step(std::uint64_t seed, std::size_t n_cells) {
  if (n_cells < 1) throw UsageError("random_step needs at least one cell");
  Rng rng(seed);
  auto bounds = jittered_grid(rng, n_cells + 1);
  auto values = draw(rng, n_cells, -1.0, 1.0);
  return StepFunction(std::move(bounds), std::move(values));
}

Function random_function(std::uint64_t seed, const FunctionClass& cls,
                         std::size_t n_nodes) {
  if (n_nodes < 2) throw UsageError("random_function needs n_nodes >= 2");
  if (cls.kind == FunctionClass::Kind::kStep) return random_step(seed, n_nodes - 1);
  return random_pwl(seed, cls, n_nodes);
}

std::pair<PiecewiseLinearFunction, PiecewiseLinearFunction> random_comonotone_pair(
    std::uint64_t seed, std::size_t n_nodes) {
  auto f = random_pwl(derive_seed(seed, 0),
                      FunctionClass::of(FunctionClass::Kind::kSignedPwl), n_nodes);
  auto phi = random_pwl(derive_seed(seed, 1),
                        FunctionClass::of(FunctionClass::Kind::kNondecreasing), 6);
  // Spread phi over [-1, 1] so g has both signs like f.
  phi = shift(scale(phi, 2.0), -1.0);
  auto g = compose(phi, f, -1.0, 1.0);
  return {std::move(f), std::move(g)};
}

}  // namespace vchoq
