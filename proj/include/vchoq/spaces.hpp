#pragma once

#include "vchoq/capacities.hpp"
#include "vchoq/functions.hpp"
#include "vchoq/quadrature.hpp"

namespace vchoq {

/// Exponent p >= 1 with its conjugate q (q = infinity for p = 1).
struct LpConfig {
  double p = 2.0;
  double q = 2.0;

  explicit LpConfig(double p_);
};

/// ((C) int_[0,1] |f|^p dmu)^{1/p}.
double lp_norm(const PiecewiseLinearFunction& f, const LpConfig& cfg,
               const Capacity& mu, const QuadratureConfig& quad = {});
double lp_norm(const StepFunction& f, const LpConfig& cfg, const Capacity& mu,
               const QuadratureConfig& quad = {});
double lp_norm(const Function& f, const LpConfig& cfg, const Capacity& mu,
               const QuadratureConfig& quad = {});

/// max |f|, exact for PWL and step functions.
double uniform_norm(const PiecewiseLinearFunction& f);
double uniform_norm(const StepFunction& f);
double uniform_norm(const Function& f);

/// ||f||_p ||g||_q - (C) int |f g| dmu. Needs p > 1 and a capacity that
/// claims submodularity.
double holder_margin(const PiecewiseLinearFunction& f,
                     const PiecewiseLinearFunction& g, const LpConfig& cfg,
                     const Capacity& mu, const QuadratureConfig& quad = {});

}  // namespace vchoq
