#include "oracles.hpp"

#include <algorithm>
#include <cmath>

namespace oracle {

double step_choquet(const vchoq::StepFunction& f, const vchoq::Capacity& mu) {
  const auto b = f.boundaries();
  const auto v = f.values();
  std::vector<double> levels(v.begin(), v.end());
  levels.push_back(0.0);
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  auto superlevel_measure = [&](double beta) {
    std::vector<vchoq::Interval> parts;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] >= beta) parts.push_back({b[i], b[i + 1]});
    }
    if (parts.empty()) return 0.0;
    return mu.measure(vchoq::IntervalUnion(parts));
  };
  const double total = mu.measure(vchoq::IntervalUnion::full());
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < levels.size(); ++k) {
    const double lo = levels[k], hi = levels[k + 1];
    // On (lo, hi] the superlevel set is constant; probe at hi.
    const double m = superlevel_measure(hi);
    acc += (hi - lo) * (hi <= 0.0 ? m - total : m);
  }
  return acc;
}

double lebesgue(const vchoq::PiecewiseLinearFunction& f, const vchoq::IntervalUnion& a) {
  double acc = 0.0;
  for (const auto& part : a.parts()) {
    std::vector<double> pts{part.lo, part.hi};
    for (double t : f.nodes()) {
      if (t > part.lo && t < part.hi) pts.push_back(t);
    }
    std::sort(pts.begin(), pts.end());
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      acc += 0.5 * (pts[i + 1] - pts[i]) * (f(pts[i]) + f(pts[i + 1]));
    }
  }
  return acc;
}

double orbit_recurrence(int n, double x) {
  double v = 1.0, term = 1.0;  // term = x^{k-1}/(k-1)!
  for (int k = 1; k <= n; ++k) {
    if (k > 1) term *= x / (k - 1);
    v -= std::exp(-x) * term;
  }
  return v;
}

}  // namespace oracle
