#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>

#include "vchoq/capacities.hpp"
#include "vchoq/functions.hpp"
#include "vchoq/random.hpp"

namespace vchoq {

/// Sample classes for the property suites. Node values are uniform on [0,1]
/// (nonnegative classes) or [-1,1] (signed classes); monotone classes sort
/// them. Nodes sit on a jittered uniform grid.
struct FunctionClass {
  enum class Kind {
    kNonnegPwl,
    kSignedPwl,
    kNondecreasing,
    kNonincreasing,
    kStep,
    kUnitBall,
  };

  Kind kind = Kind::kNonnegPwl;
  // Only used by kUnitBall: nonnegative PWL rescaled to L_{p,mu} norm 1.
  double p = 2.0;
  std::optional<Capacity> mu;

  static FunctionClass of(Kind k) { return FunctionClass{k, 2.0, std::nullopt}; }
  static FunctionClass unit_ball(double p, Capacity mu);
  // "nonneg-pwl", "signed-pwl", "nondecreasing", "nonincreasing", "step".
  // The unit ball needs a capacity and is built with unit_ball().
  static FunctionClass parse(std::string_view name);
};

/// Deterministic in (seed, cls, n_nodes); n_nodes >= 2. The step class has
/// n_nodes - 1 cells.
Function random_function(std::uint64_t seed, const FunctionClass& cls,
                         std::size_t n_nodes);

/// Convenience for the PWL classes; throws UsageError for kStep.
PiecewiseLinearFunction random_pwl(std::uint64_t seed, const FunctionClass& cls,
                                   std::size_t n_nodes);

StepFunction random_step(std::uint64_t seed, std::size_t n_cells);

/// (f, phi o f) with f signed PWL and phi a random nondecreasing PWL map;
/// comonotone by construction.
std::pair<PiecewiseLinearFunction, PiecewiseLinearFunction> random_comonotone_pair(
    std::uint64_t seed, std::size_t n_nodes);

/// Strictly increasing grid from 0 to 1 with n points, each interior point
/// displaced by up to 40% of the spacing.
std::vector<double> jittered_grid(Rng& rng, std::size_t n);

}  // namespace vchoq
