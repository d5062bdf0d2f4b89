#include "vchoq/volterra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "vchoq/choquet.hpp"
#include "vchoq/errors.hpp"
#include "vchoq/generators.hpp"
#include "vchoq/random.hpp"

namespace vchoq {

namespace {

std::vector<double> uniform_grid(std::size_t n) {
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) {
    t[i] = static_cast<double>(i) / static_cast<double>(n - 1);
  }
  t.back() = 1.0;
  return t;
}

PiecewiseLinearFunction to_pwl(const Function& f, const std::vector<double>& grid) {
  if (const auto* p = std::get_if<PiecewiseLinearFunction>(&f)) return *p;
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) v[i] = evaluate(f, grid[i]);
  return PiecewiseLinearFunction(grid, std::move(v));
}

double second_difference_bound(const PiecewiseLinearFunction& f) {
  const auto v = f.values();
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    worst = std::max(worst, std::abs(v[i - 1] - 2.0 * v[i] + v[i + 1]));
  }
  return worst / 8.0;
}

}  // namespace

VolterraImage apply_volterra_detailed(const Function& f, const Capacity& mu,
                                      std::size_t grid_size,
                                      const QuadratureConfig& cfg) {
  if (grid_size < 2) throw UsageError("apply_volterra needs grid_size >= 2");
  cfg.validate();
  const auto grid = uniform_grid(grid_size);
  std::vector<double> values(grid_size, 0.0);
  std::vector<double> errors(grid_size, 0.0);
  std::vector<char> ok(grid_size, 1);

  // Each node writes only its own slot; exceptions are carried out of the
  // parallel region by index so the first failing node is reported.
  std::vector<std::exception_ptr> failures(grid_size);
  const auto n = static_cast<std::ptrdiff_t>(grid_size);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t k = 1; k < n; ++k) {
    try {
      const auto r = choquet_integral(f, IntervalUnion::segment(0.0, grid[k]), mu, cfg);
      values[k] = r.value;
      errors[k] = r.error_estimate;
      ok[k] = r.converged ? 1 : 0;
    } catch (...) {
      failures[k] = std::current_exception();
    }
  }
  for (const auto& e : failures) {
    if (e) std::rethrow_exception(e);
  }

  VolterraImage out{PiecewiseLinearFunction(grid, std::move(values)), 0.0, true};
  for (std::size_t k = 0; k < grid_size; ++k) {
    out.max_error_estimate = std::max(out.max_error_estimate, errors[k]);
    out.converged = out.converged && ok[k];
  }
  return out;
}

PiecewiseLinearFunction apply_volterra(const Function& f, const Capacity& mu,
                                       std::size_t grid_size,
                                       const QuadratureConfig& cfg) {
  return apply_volterra_detailed(f, mu, grid_size, cfg).function;
}

OrbitRecord iterate_volterra(const Function& f0, int n, const Capacity& mu,
                             std::size_t grid_size, const QuadratureConfig& cfg) {
  if (n < 0) throw UsageError("iterate_volterra needs n >= 0");
  if (grid_size < 2) throw UsageError("iterate_volterra needs grid_size >= 2");
  const auto grid = uniform_grid(grid_size);
  OrbitRecord rec{f0, {}, {}, true};

  std::vector<double> sample(grid_size);
  for (std::size_t i = 0; i < grid_size; ++i) sample[i] = evaluate(f0, grid[i]);
  rec.iterates.emplace_back(grid, std::move(sample));

  double gap = 0.0;
  auto probe = [&](double t) {
    gap = std::max(gap, std::abs(rec.iterates[0](t) - evaluate(f0, t)));
  };
  std::visit(
      [&](const auto& g) {
        if constexpr (std::is_same_v<std::decay_t<decltype(g)>, PiecewiseLinearFunction>) {
          for (double t : g.nodes()) probe(t);
        } else {
          for (double t : g.boundaries()) probe(t);
        }
      },
      f0);
  rec.error_budget.push_back(gap);

  const double lipschitz = mu.total();
  for (int k = 1; k <= n; ++k) {
    const Function input = k == 1 ? f0 : Function(rec.iterates.back());
    auto image = apply_volterra_detailed(input, mu, grid_size, cfg);
    // Rounding floor: a few ulps of the values themselves.
    double budget = image.max_error_estimate +
                    16.0 * std::numeric_limits<double>::epsilon() *
                        std::max(1.0, uniform_norm(image.function));
    if (k > 1) {
      budget += lipschitz * (rec.error_budget.back() +
                             second_difference_bound(rec.iterates.back()));
    }
    rec.converged = rec.converged && image.converged;
    rec.iterates.push_back(std::move(image.function));
    rec.error_budget.push_back(budget);
  }
  return rec;
}

double orbit_closed_form(int n, double x) {
  if (n <= 0) throw DomainError("orbit_closed_form needs n >= 1");
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("orbit_closed_form needs x in [0,1]");
  // 1 - e^{-x} sum_{k<n} x^k/k! = e^{-x} sum_{k>=n} x^k/k!; the tail form
  // avoids cancellation for large n.
  double term = 1.0;
  for (int k = 1; k <= n; ++k) term *= x / k;
  double tail = 0.0;
  for (int k = n; term > 0.0 && k < n + 60; ++k) {
    tail += term;
    term *= x / (k + 1);
    if (term < 1e-18 * tail) break;
  }
  return std::exp(-x) * tail;
}

PiecewiseLinearFunction identity_plus_v(const Function& f, const Capacity& mu,
                                        std::size_t grid_size,
                                        const QuadratureConfig& cfg) {
  auto vf = apply_volterra(f, mu, grid_size, cfg);
  return sum(to_pwl(f, uniform_grid(grid_size)), vf);
}

double classical_opnorm(std::size_t grid_size, int power_iters) {
  if (grid_size < 64) throw UsageError("classical_opnorm needs grid_size >= 64");
  if (power_iters < 1) throw UsageError("classical_opnorm needs power_iters >= 1");
  const std::size_t n = grid_size - 1;
  const double h = 1.0 / static_cast<double>(n);

  // (K v)_i = h (sum_{j<i} v_j + v_i / 2), the exact cell averages of the
  // Volterra image of a cellwise constant v, scaled to an L2 isometry.
  auto apply = [&](const std::vector<double>& v, std::vector<double>& out) {
    double prefix = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = h * (prefix + 0.5 * v[i]);
      prefix += v[i];
    }
  };
  auto apply_t = [&](const std::vector<double>& w, std::vector<double>& out) {
    double suffix = 0.0;
    for (std::size_t i = n; i-- > 0;) {
      out[i] = h * (suffix + 0.5 * w[i]);
      suffix += w[i];
    }
  };
  auto norm = [](const std::vector<double>& v) {
    return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
  };

  std::vector<double> v(n, 1.0), kv(n), ktkv(n);
  double estimate = 0.0;
  for (int it = 0; it < power_iters; ++it) {
    const double nv = norm(v);
    for (double& x : v) x /= nv;
    apply(v, kv);
    estimate = norm(kv);
    apply_t(kv, ktkv);
    v.swap(ktkv);
  }
  return estimate;
}

double classical_opnorm(const Capacity& mu, std::size_t grid_size, int power_iters) {
  const auto* gamma = mu.distortion();
  if (!gamma || !gamma->is_identity()) {
    throw UsageError("classical_opnorm: V is linear only for the identity distortion");
  }
  return classical_opnorm(grid_size, power_iters);
}

double lipschitz_ratio(const PiecewiseLinearFunction& f,
                       const PiecewiseLinearFunction& g, const Capacity& mu,
                       const LpConfig& cfg, std::size_t grid_size,
                       const QuadratureConfig& quad) {
  const double den = lp_norm(abs_diff(f, g), cfg, mu, quad);
  if (!(den > 0.0)) throw PreconditionError("lipschitz_ratio needs f != g");
  const auto vf = apply_volterra(f, mu, grid_size, quad);
  const auto vg = apply_volterra(g, mu, grid_size, quad);
  return lp_norm(abs_diff(vf, vg), cfg, mu, quad) / den;
}

std::pair<PiecewiseLinearFunction, PiecewiseLinearFunction> lipschitz_pair(
    std::uint64_t seed, std::size_t index) {
  const auto s = derive_seed(seed, index);
  const auto signed_pwl = FunctionClass::of(FunctionClass::Kind::kSignedPwl);
  Rng rng(s);
  switch (index % 3) {
    case 0:
      return {random_pwl(derive_seed(s, 1), signed_pwl, 8),
              random_pwl(derive_seed(s, 2), signed_pwl, 8)};
    case 1: {
      auto f = random_pwl(derive_seed(s, 1), signed_pwl, 8);
      const double c = rng.uniform(0.1, 1.0) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
      auto g = shift(f, c);
      return {std::move(f), std::move(g)};
    }
    default: {
      // Spike of width w at the origin; its image is nearly constant, so
      // the ratio approaches mu([0,1]) for p = 1 as w shrinks.
      const double w = std::pow(10.0, -rng.uniform(1.0, 3.0));
      return {PiecewiseLinearFunction::constant(0.0),
              PiecewiseLinearFunction({0.0, w, 1.0}, {1.0, 0.0, 0.0})};
    }
  }
}

double lipschitz_norm_estimate(const Capacity& mu, const LpConfig& cfg,
                               std::uint64_t seed, std::size_t n_samples) {
  if (n_samples == 0) throw UsageError("lipschitz_norm_estimate needs n_samples >= 1");
  double best = 0.0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const auto [f, g] = lipschitz_pair(seed, i);
    best = std::max(best, lipschitz_ratio(f, g, mu, cfg));
  }
  return best;
}

}  // namespace vchoq
