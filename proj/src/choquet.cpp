#include "vchoq/choquet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "vchoq/errors.hpp"

namespace vchoq {

namespace {

// A piece of A on which f runs over [lo, hi]: linearly (PWL) or constantly
// (step, lo == hi). `length` is its Lebesgue length.
struct Segment {
  double length;
  double lo;
  double hi;
};

std::size_t cell_index(std::span<const double> grid, double t) {
  auto it = std::upper_bound(grid.begin(), grid.end(), t);
  std::size_t i = static_cast<std::size_t>(it - grid.begin());
  return i == 0 ? 0 : std::min(i - 1, grid.size() - 2);
}

std::vector<Segment> restrict_to(const PiecewiseLinearFunction& f,
                                 const IntervalUnion& A) {
  std::vector<Segment> segs;
  auto t = f.nodes();
  auto v = f.values();
  for (const auto& part : A.parts()) {
    if (part.lo == part.hi) {
      const double y = f(part.lo);
      segs.push_back({0.0, y, y});
      continue;
    }
    double t0 = part.lo, y0 = f(part.lo);
    auto k = static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), part.lo) - t.begin());
    for (; k < t.size() && t[k] < part.hi; ++k) {
      segs.push_back({t[k] - t0, std::min(y0, v[k]), std::max(y0, v[k])});
      t0 = t[k];
      y0 = v[k];
    }
    const double y1 = f(part.hi);
    segs.push_back({part.hi - t0, std::min(y0, y1), std::max(y0, y1)});
  }
  return segs;
}

std::vector<Segment> restrict_to(const StepFunction& f, const IntervalUnion& A) {
  std::vector<Segment> segs;
  auto s = f.boundaries();
  auto c = f.values();
  for (const auto& part : A.parts()) {
    if (part.lo == part.hi) {
      const double y = f(part.lo);
      segs.push_back({0.0, y, y});
      continue;
    }
    for (std::size_t k = cell_index(s, part.lo); k < c.size() && s[k] < part.hi; ++k) {
      const double overlap = std::min(part.hi, s[k + 1]) - std::max(part.lo, s[k]);
      if (overlap > 0.0) segs.push_back({overlap, c[k], c[k]});
    }
  }
  return segs;
}

// Values of q on A where the superlevel length can kink.
std::vector<double> critical_values_on(const PiecewiseQuadraticFunction& q,
                                       const IntervalUnion& A) {
  std::vector<double> out;
  auto cells = q.cell_data();
  for (const auto& part : A.parts()) {
    out.push_back(q(part.lo));
    out.push_back(q(part.hi));
    for (const auto& c : cells) {
      const double lo = std::max(part.lo, c.t0), hi = std::min(part.hi, c.t1);
      if (lo > hi) continue;
      out.push_back(c.c0 + (lo - c.t0) * (c.c1 + (lo - c.t0) * c.c2));
      out.push_back(c.c0 + (hi - c.t0) * (c.c1 + (hi - c.t0) * c.c2));
      if (c.c2 != 0.0) {
        const double u = -c.c1 / (2.0 * c.c2);
        if (c.t0 + u > lo && c.t0 + u < hi) out.push_back(c.c0 + u * (c.c1 + u * c.c2));
      }
    }
  }
  return out;
}

/// Lebesgue length of {f >= b} n A as a function of b, for PWL and step f.
/// Between consecutive breakpoints the length is affine in b, so each panel
/// stores its one-sided limits at both ends.
class LengthProfile {
 public:
  LengthProfile(const std::vector<Segment>& segs, std::vector<double> breaks)
      : breaks_(std::move(breaks)) {
    const std::size_t panels = breaks_.size() - 1;
    left_.assign(panels, 0.0);
    right_.assign(panels, 0.0);
    std::vector<double> below(panels + 1, 0.0);
    for (const auto& s : segs) {
      total_ += s.length;
      if (s.length == 0.0) continue;
      const std::size_t ilo = index(s.lo), ihi = index(s.hi);
      // Panels entirely below s.lo see the whole segment.
      below[0] += s.length;
      below[ilo] -= s.length;
      const double span = s.hi - s.lo;
      for (std::size_t j = ilo; j < ihi; ++j) {
        left_[j] += s.length * (s.hi - breaks_[j]) / span;
        right_[j] += s.length * (s.hi - breaks_[j + 1]) / span;
      }
    }
    double run = 0.0;
    for (std::size_t j = 0; j < panels; ++j) {
      run += below[j];
      left_[j] = std::clamp(left_[j] + run, 0.0, total_);
      right_[j] = std::clamp(right_[j] + run, 0.0, total_);
    }
  }

  double length(double b) const {
    if (b < breaks_.front()) return total_;
    if (b > breaks_.back()) return 0.0;
    const std::size_t j = cell_index(breaks_, b);
    const double w = (b - breaks_[j]) / (breaks_[j + 1] - breaks_[j]);
    return left_[j] + w * (right_[j] - left_[j]);
  }

 private:
  std::size_t index(double v) const {
    return static_cast<std::size_t>(
        std::lower_bound(breaks_.begin(), breaks_.end(), v) - breaks_.begin());
  }

  std::vector<double> breaks_;
  std::vector<double> left_, right_;
  double total_ = 0.0;
};

// Everything the b-axis integrator needs about (f, A, mu).
struct LevelIntegrand {
  double lo = 0.0, hi = 0.0;   // range of f on A
  std::vector<double> breaks;  // sorted, distinct, includes 0, lo and hi
  std::function<double(double)> mu_at;  // b -> mu(F_b(f) n A)
  double top_grading = 2.0;
};

std::vector<double> sorted_breaks(std::vector<double> values) {
  values.push_back(0.0);
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

void require_finite_range(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw DomainError("choquet integral: integrand is not bounded");
  }
}

double top_grading_for(const Capacity& mu) {
  const auto* gamma = mu.distortion();
  return gamma ? std::max(2.0, gamma->grading_exponent()) : 2.0;
}

template <typename F>
LevelIntegrand level_integrand_segments(const F& f, const IntervalUnion& A,
                                        const Capacity& mu) {
  LevelIntegrand L;
  auto segs = restrict_to(f, A);
  std::vector<double> values;
  values.reserve(2 * segs.size());
  L.lo = std::numeric_limits<double>::infinity();
  L.hi = -std::numeric_limits<double>::infinity();
  for (const auto& s : segs) {
    values.push_back(s.lo);
    values.push_back(s.hi);
    L.lo = std::min(L.lo, s.lo);
    L.hi = std::max(L.hi, s.hi);
  }
  require_finite_range(L.lo, L.hi);
  L.breaks = sorted_breaks(std::move(values));
  L.top_grading = top_grading_for(mu);
  if (const auto* gamma = mu.distortion()) {
    auto profile = std::make_shared<const LengthProfile>(segs, L.breaks);
    L.mu_at = [profile, gamma](double b) { return gamma->value(profile->length(b)); };
  } else {
    L.mu_at = [&f, &A, &mu](double b) { return mu.measure(intersect(superlevel(f, b), A)); };
  }
  return L;
}

LevelIntegrand level_integrand(const PiecewiseLinearFunction& f,
                               const IntervalUnion& A, const Capacity& mu) {
  return level_integrand_segments(f, A, mu);
}

LevelIntegrand level_integrand(const StepFunction& f, const IntervalUnion& A,
                               const Capacity& mu) {
  return level_integrand_segments(f, A, mu);
}

LevelIntegrand level_integrand(const PiecewiseQuadraticFunction& f,
                               const IntervalUnion& A, const Capacity& mu) {
  LevelIntegrand L;
  auto values = critical_values_on(f, A);
  auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  L.lo = *lo;
  L.hi = *hi;
  require_finite_range(L.lo, L.hi);
  L.breaks = sorted_breaks(std::move(values));
  L.top_grading = top_grading_for(mu);
  L.mu_at = [&f, &A, &mu](double b) { return mu.measure(intersect(superlevel(f, b), A)); };
  return L;
}

enum class Form { kDefinition, kDecomposition };

// Panels between consecutive breakpoints inside [from, to].
std::vector<Panel> panels_between(const std::vector<double>& breaks, double from,
                                  double to) {
  std::vector<Panel> panels;
  for (std::size_t j = 0; j + 1 < breaks.size(); ++j) {
    const double a = breaks[j], b = breaks[j + 1];
    if (a >= from && b <= to) panels.push_back({a, b});
  }
  return panels;
}

IntegralResult integrate_levels(const LevelIntegrand& L, double muA, Form form,
                                const QuadratureConfig& cfg) {
  const double upper = std::max(L.hi, 0.0);
  const double lower = std::min(L.lo, 0.0);
  auto panels = panels_between(L.breaks, lower, upper);
  // Near the top of the range the superlevel set shrinks to nothing, where
  // concave distortions have an algebraic singularity. The top of the range
  // may sit below 0, so the panel is found by value.
  for (auto& panel : panels) {
    if (panel.b == L.hi) {
      panel.grading = Panel::Grading::kTop;
      panel.exponent = L.top_grading;
    }
  }
  std::function<double(double)> integrand;
  if (form == Form::kDefinition) {
    integrand = [&](double b) { return b < 0.0 ? L.mu_at(b) - muA : L.mu_at(b); };
  } else {
    integrand = L.mu_at;
  }
  IntegralResult r = integrate_panels(panels, integrand, cfg);
  if (form == Form::kDecomposition) r.value += lower * muA;
  return r;
}

template <typename F>
IntegralResult choquet_impl(const F& f, const IntervalUnion& A,
                            const Capacity& mu, const QuadratureConfig& cfg) {
  cfg.validate();
  if (A.empty()) return {};
  const auto L = level_integrand(f, A, mu);
  return integrate_levels(L, mu.measure(A), Form::kDefinition, cfg);
}

template <typename F>
IntegralResult power_impl(const F& f, double p, const IntervalUnion& A,
                          const Capacity& mu, const QuadratureConfig& cfg) {
  cfg.validate();
  if (!(p >= 1.0)) throw UsageError("power integral needs p >= 1");
  if (f.min_value() < 0.0) {
    throw DomainError("power integral needs a nonnegative integrand");
  }
  if (A.empty()) return {};
  const auto L = level_integrand(f, A, mu);
  if (!(L.hi > 0.0)) return {};
  auto panels = panels_between(L.breaks, 0.0, L.hi);
  const bool fractional = p != std::floor(p);
  // One panel cannot carry both gradings; split it.
  if (fractional && panels.size() == 1) {
    const double mid = 0.5 * (panels[0].a + panels[0].b);
    panels = {{panels[0].a, mid}, {mid, panels[0].b}};
  }
  if (panels.back().b == L.hi) {
    panels.back().grading = Panel::Grading::kTop;
    panels.back().exponent = L.top_grading;
  }
  // a^{p-1} is not smooth at 0 for fractional p.
  if (fractional) {
    panels.front().grading = Panel::Grading::kBottom;
    panels.front().exponent = 2.0;
  }
  return integrate_panels(
      panels, [&](double a) { return p * std::pow(a, p - 1.0) * L.mu_at(a); }, cfg);
}

}  // namespace

IntegralResult choquet_integral(const PiecewiseLinearFunction& f,
                                const IntervalUnion& A, const Capacity& mu,
                                const QuadratureConfig& cfg) {
  return choquet_impl(f, A, mu, cfg);
}

IntegralResult choquet_integral(const StepFunction& f, const IntervalUnion& A,
                                const Capacity& mu, const QuadratureConfig& cfg) {
  return choquet_impl(f, A, mu, cfg);
}

IntegralResult choquet_integral(const PiecewiseQuadraticFunction& f,
                                const IntervalUnion& A, const Capacity& mu,
                                const QuadratureConfig& cfg) {
  return choquet_impl(f, A, mu, cfg);
}

IntegralResult choquet_integral(const Function& f, const IntervalUnion& A,
                                const Capacity& mu, const QuadratureConfig& cfg) {
  return std::visit([&](const auto& g) { return choquet_impl(g, A, mu, cfg); }, f);
}

IntegralResult choquet_power_integral(const PiecewiseLinearFunction& f, double p,
                                      const IntervalUnion& A, const Capacity& mu,
                                      const QuadratureConfig& cfg) {
  return power_impl(f, p, A, mu, cfg);
}

IntegralResult choquet_power_integral(const StepFunction& f, double p,
                                      const IntervalUnion& A, const Capacity& mu,
                                      const QuadratureConfig& cfg) {
  return power_impl(f, p, A, mu, cfg);
}

IntegralResult choquet_signed_decomposition(const PiecewiseLinearFunction& f,
                                            const IntervalUnion& A,
                                            const Capacity& mu,
                                            const QuadratureConfig& cfg) {
  cfg.validate();
  if (A.empty()) return {};
  const auto L = level_integrand(f, A, mu);
  return integrate_levels(L, mu.measure(A), Form::kDecomposition, cfg);
}

IntegralResult choquet_monotone(const PiecewiseLinearFunction& f, double x,
                                const DistortionFunction& gamma,
                                Monotonicity direction,
                                const QuadratureConfig& cfg) {
  cfg.validate();
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError("choquet_monotone: x must lie in [0,1]");
  }
  if (!gamma.differentiable()) {
    throw UsageError("choquet_monotone: distortion '" + gamma.name() +
                     "' has no derivative");
  }
  if (x == 0.0) return {};

  // Grid of f clipped to [0, x].
  std::vector<double> pts{0.0};
  for (double t : f.nodes()) {
    if (t > 0.0 && t < x) pts.push_back(t);
  }
  pts.push_back(x);

  const bool up = direction == Monotonicity::kNondecreasing;
  double prev = f(pts.front());
  for (double t : pts) {
    const double v = f(t);
    if (v < 0.0) {
      throw PreconditionError("choquet_monotone: f must be nonnegative on [0,x]");
    }
    if (up ? v < prev : v > prev) {
      std::ostringstream msg;
      msg << "choquet_monotone: f is not " << (up ? "nondecreasing" : "nonincreasing")
          << " on [0," << x << "]";
      throw PreconditionError(msg.str());
    }
    prev = v;
  }

  std::vector<Panel> panels;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) panels.push_back({pts[i], pts[i + 1]});
  const double m = gamma.grading_exponent();
  if (m != 1.0) {
    Panel& singular = up ? panels.back() : panels.front();
    singular.grading = up ? Panel::Grading::kTop : Panel::Grading::kBottom;
    singular.exponent = m;
  }
  if (up) {
    return integrate_panels(
        panels, [&](double s) { return gamma.derivative(x - s) * f(s); }, cfg);
  }
  return integrate_panels(
      panels, [&](double s) { return gamma.derivative(s) * f(s); }, cfg);
}

double oracle_beta_riemann(const Function& f, const IntervalUnion& A,
                           const Capacity& mu, std::size_t n_beta) {
  if (n_beta == 0) throw UsageError("oracle_beta_riemann: n_beta >= 1");
  if (A.empty()) return 0.0;
  const double lo = std::min(min_value(f), 0.0);
  const double hi = std::max(max_value(f), 0.0);
  if (hi == lo) return 0.0;
  std::size_t n_pos = 0, n_neg = 0;
  if (lo == 0.0) {
    n_pos = n_beta;
  } else if (hi == 0.0) {
    n_neg = n_beta;
  } else {
    n_pos = static_cast<std::size_t>(
        std::llround(static_cast<double>(n_beta) * hi / (hi - lo)));
    n_pos = std::clamp<std::size_t>(n_pos, 1, std::max<std::size_t>(n_beta, 2) - 1);
    n_neg = std::max<std::size_t>(n_beta, 2) - n_pos;
  }
  const double muA = mu.measure(A);
  auto mu_at = [&](double b) { return mu.measure(intersect(superlevel(f, b), A)); };

  double total = 0.0;
  if (n_pos > 0) {
    const double h = hi / static_cast<double>(n_pos);
    double acc = 0.0;
    for (std::size_t k = 0; k < n_pos; ++k) acc += mu_at((static_cast<double>(k) + 0.5) * h);
    total += acc * h;
  }
  if (n_neg > 0) {
    const double h = -lo / static_cast<double>(n_neg);
    double acc = 0.0;
    for (std::size_t k = 0; k < n_neg; ++k) {
      acc += mu_at(lo + (static_cast<double>(k) + 0.5) * h) - muA;
    }
    total += acc * h;
  }
  return total;
}

double discrete_choquet_sorted(const StepFunction& f, const Capacity& mu) {
  std::vector<double> v(f.values().begin(), f.values().end());
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  double prev = std::min(v.front(), 0.0);
  double value = prev * mu.total();
  for (double vj : v) {
    value += (vj - prev) * mu.measure(superlevel(f, vj));
    prev = vj;
  }
  return value;
}

}  // namespace vchoq
