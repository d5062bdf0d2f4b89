#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "vchoq/capacities.hpp"
#include "vchoq/functions.hpp"
#include "vchoq/quadrature.hpp"
#include "vchoq/spaces.hpp"

namespace vchoq {

inline constexpr std::size_t kDefaultGrid = 1025;

struct VolterraImage {
  PiecewiseLinearFunction function;
  double max_error_estimate = 0.0;  // worst per-node quadrature estimate
  bool converged = true;
};

/// V(f)(x) = (C) int_[0,x] f dmu at the nodes of a uniform grid, one
/// independent integral per node, joined linearly. V(f)(0) = 0 exactly.
VolterraImage apply_volterra_detailed(const Function& f, const Capacity& mu,
                                      std::size_t grid_size,
                                      const QuadratureConfig& cfg = {});
PiecewiseLinearFunction apply_volterra(const Function& f, const Capacity& mu,
                                       std::size_t grid_size = kDefaultGrid,
                                       const QuadratureConfig& cfg = {});

/// f0, V f0, ..., V^n f0. iterates[0] is f0 sampled on the grid (exact for
/// f0 = const); V f0 is computed from f0 itself, later steps from the
/// previous PWL iterate.
///
/// error_budget[k] bounds sup |iterates[k] - V^k f0| at the nodes:
///   b_0 = gap between f0 and its grid sample at the nodes of f0,
///   b_1 = q_1 (V f0 is computed from f0 itself),
///   b_k = mu(Omega) (b_{k-1} + r_{k-1}) + q_k   for k >= 2,
/// where r_j = max|second difference of iterate j| / 8 estimates the gap
/// between iterate j and its smooth counterpart between nodes, and q_k is
/// the worst quadrature estimate of step k plus a rounding floor. The
/// factor mu(Omega) is the uniform Lipschitz constant of V for submodular mu.
struct OrbitRecord {
  Function base;
  std::vector<PiecewiseLinearFunction> iterates;
  std::vector<double> error_budget;
  bool converged = true;
};

OrbitRecord iterate_volterra(const Function& f0, int n, const Capacity& mu,
                             std::size_t grid_size = kDefaultGrid,
                             const QuadratureConfig& cfg = {});

/// 1 - e^{-x} sum_{k<n} x^k / k!, the n-th iterate of f0 = 1 under
/// gamma(t) = 1 - e^{-t}. Throws DomainError for n <= 0 or x outside [0,1].
double orbit_closed_form(int n, double x);

/// f + V f on the grid (exact merged-grid sum when f is PWL).
PiecewiseLinearFunction identity_plus_v(const Function& f, const Capacity& mu,
                                        std::size_t grid_size = kDefaultGrid,
                                        const QuadratureConfig& cfg = {});

/// Largest singular value of the Galerkin (cellwise constant) discretization
/// of the classical Volterra operator on grid_size - 1 cells, by power
/// iteration on K^T K from the constant vector. grid_size >= 64.
double classical_opnorm(std::size_t grid_size, int power_iters);
/// Same, after checking that mu is the undistorted Lebesgue measure.
double classical_opnorm(const Capacity& mu, std::size_t grid_size, int power_iters);

/// ||V f - V g||_{p,mu} / ||f - g||_{p,mu}, both images on a uniform grid.
double lipschitz_ratio(const PiecewiseLinearFunction& f,
                       const PiecewiseLinearFunction& g, const Capacity& mu,
                       const LpConfig& cfg, std::size_t grid_size = 257,
                       const QuadratureConfig& quad = {});

/// Sample pair `index` of the stream rooted at `seed`; the family cycles
/// through random signed pairs, translates (f, f + c) and narrow spikes at 0
/// against the zero function.
std::pair<PiecewiseLinearFunction, PiecewiseLinearFunction> lipschitz_pair(
    std::uint64_t seed, std::size_t index);

/// Max of lipschitz_ratio over the first n_samples lipschitz_pair draws. A
/// lower bound on the Lipschitz norm of V.
double lipschitz_norm_estimate(const Capacity& mu, const LpConfig& cfg,
                               std::uint64_t seed, std::size_t n_samples);

}  // namespace vchoq
