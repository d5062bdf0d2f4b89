#pragma once

#include <cstddef>

#include "vchoq/capacities.hpp"
#include "vchoq/functions.hpp"
#include "vchoq/intervals.hpp"
#include "vchoq/quadrature.hpp"

namespace vchoq {

/// Choquet integral of a bounded signed function over A:
///
///   int_0^inf mu(F_b(f) n A) db + int_-inf^0 [mu(F_b(f) n A) - mu(A)] db
///
/// Both parts are integrated over the range of f on A. The b-axis is split
/// at the values of f at its nodes (and at the ends of A's parts), where the
/// superlevel length has kinks, and each panel is integrated by adaptive
/// Gauss-Legendre. Empty A gives 0.
IntegralResult choquet_integral(const PiecewiseLinearFunction& f,
                                const IntervalUnion& A, const Capacity& mu,
                                const QuadratureConfig& cfg = {});
IntegralResult choquet_integral(const StepFunction& f, const IntervalUnion& A,
                                const Capacity& mu,
                                const QuadratureConfig& cfg = {});
IntegralResult choquet_integral(const PiecewiseQuadraticFunction& f,
                                const IntervalUnion& A, const Capacity& mu,
                                const QuadratureConfig& cfg = {});
IntegralResult choquet_integral(const Function& f, const IntervalUnion& A,
                                const Capacity& mu,
                                const QuadratureConfig& cfg = {});

/// (C) int_A f^p dmu for f >= 0 and p >= 1, through the substitution b = a^p:
///   int_0^M p a^{p-1} mu(F_a(f) n A) da,
/// which keeps the integrand exact instead of interpolating f^p.
IntegralResult choquet_power_integral(const PiecewiseLinearFunction& f,
                                      double p, const IntervalUnion& A,
                                      const Capacity& mu,
                                      const QuadratureConfig& cfg = {});
IntegralResult choquet_power_integral(const StepFunction& f, double p,
                                      const IntervalUnion& A, const Capacity& mu,
                                      const QuadratureConfig& cfg = {});

/// The bounded-signed decomposition
///   int_0^M mu(.) da + int_{M'}^0 mu(.) da + M' mu(A),   M' = min(inf f, 0),
/// evaluated as its own path; only used to cross-check choquet_integral.
IntegralResult choquet_signed_decomposition(const PiecewiseLinearFunction& f,
                                            const IntervalUnion& A,
                                            const Capacity& mu,
                                            const QuadratureConfig& cfg = {});

enum class Monotonicity { kNondecreasing, kNonincreasing };

/// Convolution form of (C) int_0^x f dmu for mu = gamma(Lebesgue), f >= 0
/// monotone:
///   nondecreasing:  int_0^x gamma'(x - s) f(s) ds
///   nonincreasing:  int_0^x gamma'(s) f(s) ds
/// Per-cell Gauss on f's grid; the cell where gamma' has its argument at 0 is
/// graded so gamma' is never sampled there. Throws PreconditionError when f
/// is negative or not monotone on [0,x] in the declared direction, and
/// UsageError when gamma has no derivative.
IntegralResult choquet_monotone(const PiecewiseLinearFunction& f, double x,
                                const DistortionFunction& gamma,
                                Monotonicity direction,
                                const QuadratureConfig& cfg = {});

/// Midpoint Riemann sum of the defining formula with n_beta uniform cells
/// shared between the negative and positive b-ranges in proportion to their
/// lengths. Brute force; evaluates mu on explicit superlevel sets.
double oracle_beta_riemann(const Function& f, const IntervalUnion& A,
                           const Capacity& mu, std::size_t n_beta);

/// Exact value for step functions on A = [0,1]: with distinct values
/// v_(1) < ... < v_(r) and v_(0) = min(v_(1), 0),
///   v_(0) mu([0,1]) + sum_j (v_(j) - v_(j-1)) mu({f >= v_(j)}).
double discrete_choquet_sorted(const StepFunction& f, const Capacity& mu);

}  // namespace vchoq
