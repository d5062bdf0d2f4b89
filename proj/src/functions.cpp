#include "vchoq/functions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vchoq/errors.hpp"

namespace vchoq {

namespace {

void check_unit(double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    std::ostringstream msg;
    msg << "evaluation point " << t << " outside [0,1]";
    throw DomainError(msg.str());
  }
}

void check_grid(std::span<const double> grid, const char* what) {
  if (grid.size() < 2) {
    throw DomainError(std::string(what) + ": need at least two grid points");
  }
  if (grid.front() != 0.0 || grid.back() != 1.0) {
    throw DomainError(std::string(what) + ": grid must start at 0 and end at 1");
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw DomainError(std::string(what) + ": grid must be strictly increasing");
    }
  }
}

void check_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw DomainError(std::string(what) + ": values must be finite");
    }
  }
}

// Index i of the cell [grid[i], grid[i+1]] containing t (last cell closed).
std::size_t locate(std::span<const double> grid, double t) {
  auto it = std::upper_bound(grid.begin(), grid.end(), t);
  std::size_t i = static_cast<std::size_t>(it - grid.begin());
  if (i == 0) return 0;
  return std::min(i - 1, grid.size() - 2);
}

// Roots of c2 u^2 + c1 u + c0 = 0, ascending.
std::vector<double> quadratic_roots(double c2, double c1, double c0) {
  std::vector<double> roots;
  const double scale = std::max({std::abs(c2), std::abs(c1), std::abs(c0)});
  if (scale == 0.0) return roots;
  if (std::abs(c2) <= 1e-14 * scale) {
    if (c1 != 0.0) roots.push_back(-c0 / c1);
    return roots;
  }
  const double disc = c1 * c1 - 4.0 * c2 * c0;
  if (disc < 0.0) return roots;
  if (disc == 0.0) {
    roots.push_back(-c1 / (2.0 * c2));
    return roots;
  }
  const double s = std::sqrt(disc);
  const double q = -0.5 * (c1 + std::copysign(s, c1));
  double r1 = q / c2;
  double r2 = q != 0.0 ? c0 / q : -r1;
  if (r1 > r2) std::swap(r1, r2);
  roots.push_back(r1);
  roots.push_back(r2);
  return roots;
}

}  // namespace

// ---------------------------------------------------------------------------
// PiecewiseLinearFunction

PiecewiseLinearFunction::PiecewiseLinearFunction(std::vector<double> nodes,
                                                 std::vector<double> values)
    : nodes_(std::move(nodes)), values_(std::move(values)) {
  check_grid(nodes_, "piecewise linear function");
  if (values_.size() != nodes_.size()) {
    throw DomainError("piecewise linear function: one value per node required");
  }
  check_finite(values_, "piecewise linear function");
  auto [lo, hi] = std::minmax_element(values_.begin(), values_.end());
  min_ = *lo;
  max_ = *hi;
}

PiecewiseLinearFunction PiecewiseLinearFunction::constant(double c) {
  return PiecewiseLinearFunction({0.0, 1.0}, {c, c});
}

PiecewiseLinearFunction PiecewiseLinearFunction::ramp() {
  return PiecewiseLinearFunction({0.0, 1.0}, {0.0, 1.0});
}

PiecewiseLinearFunction PiecewiseLinearFunction::sample(
    const std::function<double(double)>& fn, std::size_t grid_size) {
  if (grid_size < 2) throw UsageError("sample: grid_size must be >= 2");
  std::vector<double> nodes(grid_size), values(grid_size);
  const double n = static_cast<double>(grid_size - 1);
  for (std::size_t i = 0; i < grid_size; ++i) {
    nodes[i] = static_cast<double>(i) / n;
    values[i] = fn(nodes[i]);
  }
  nodes.back() = 1.0;
  return PiecewiseLinearFunction(std::move(nodes), std::move(values));
}

double PiecewiseLinearFunction::operator()(double t) const {
  check_unit(t);
  const std::size_t i = locate(nodes_, t);
  const double t0 = nodes_[i], t1 = nodes_[i + 1];
  const double w = (t - t0) / (t1 - t0);
  return values_[i] + w * (values_[i + 1] - values_[i]);
}

bool PiecewiseLinearFunction::nondecreasing() const {
  return std::is_sorted(values_.begin(), values_.end());
}

bool PiecewiseLinearFunction::nonincreasing() const {
  return std::is_sorted(values_.rbegin(), values_.rend());
}

// ---------------------------------------------------------------------------
// StepFunction

StepFunction::StepFunction(std::vector<double> boundaries,
                           std::vector<double> values)
    : boundaries_(std::move(boundaries)), values_(std::move(values)) {
  check_grid(boundaries_, "step function");
  if (values_.size() + 1 != boundaries_.size()) {
    throw DomainError("step function: one value per cell required");
  }
  check_finite(values_, "step function");
  auto [lo, hi] = std::minmax_element(values_.begin(), values_.end());
  min_ = *lo;
  max_ = *hi;
}

StepFunction StepFunction::constant(double c) {
  return StepFunction({0.0, 1.0}, {c});
}

double StepFunction::operator()(double t) const {
  check_unit(t);
  return values_[locate(boundaries_, t)];
}

// ---------------------------------------------------------------------------
// PiecewiseQuadraticFunction

PiecewiseQuadraticFunction::PiecewiseQuadraticFunction(std::vector<Cell> cells)
    : cells_(std::move(cells)) {
  if (cells_.empty()) throw DomainError("piecewise quadratic: no cells");
  if (cells_.front().t0 != 0.0 || cells_.back().t1 != 1.0) {
    throw DomainError("piecewise quadratic: cells must cover [0,1]");
  }
  min_ = cells_.front().c0;
  max_ = cells_.front().c0;
  for (const auto& c : cells_) {
    if (!(c.t1 > c.t0)) throw DomainError("piecewise quadratic: empty cell");
    if (!std::isfinite(c.c0) || !std::isfinite(c.c1) || !std::isfinite(c.c2)) {
      throw DomainError("piecewise quadratic: coefficients must be finite");
    }
    const double h = c.t1 - c.t0;
    const double end = c.c0 + h * (c.c1 + h * c.c2);
    min_ = std::min({min_, c.c0, end});
    max_ = std::max({max_, c.c0, end});
    if (c.c2 != 0.0) {
      const double u = -c.c1 / (2.0 * c.c2);
      if (u > 0.0 && u < h) {
        const double v = c.c0 + u * (c.c1 + u * c.c2);
        min_ = std::min(min_, v);
        max_ = std::max(max_, v);
      }
    }
  }
}

double PiecewiseQuadraticFunction::operator()(double t) const {
  check_unit(t);
  auto it = std::upper_bound(
      cells_.begin(), cells_.end(), t,
      [](double value, const Cell& c) { return value < c.t0; });
  const Cell& c = it == cells_.begin() ? cells_.front() : *std::prev(it);
  const double u = t - c.t0;
  return c.c0 + u * (c.c1 + u * c.c2);
}

std::vector<double> PiecewiseQuadraticFunction::critical_values() const {
  std::vector<double> out;
  out.reserve(3 * cells_.size());
  for (const auto& c : cells_) {
    const double h = c.t1 - c.t0;
    out.push_back(c.c0);
    out.push_back(c.c0 + h * (c.c1 + h * c.c2));
    if (c.c2 != 0.0) {
      const double u = -c.c1 / (2.0 * c.c2);
      if (u > 0.0 && u < h) out.push_back(c.c0 + u * (c.c1 + u * c.c2));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// evaluation / superlevel

double evaluate(const PiecewiseLinearFunction& f, double t) { return f(t); }
double evaluate(const StepFunction& f, double t) { return f(t); }
double evaluate(const Function& f, double t) {
  return std::visit([t](const auto& g) { return g(t); }, f);
}

double min_value(const Function& f) {
  return std::visit([](const auto& g) { return g.min_value(); }, f);
}
double max_value(const Function& f) {
  return std::visit([](const auto& g) { return g.max_value(); }, f);
}

IntervalUnion superlevel(const PiecewiseLinearFunction& f, double beta) {
  if (beta > f.max_value()) return {};
  if (beta <= f.min_value()) return IntervalUnion::full();
  auto t = f.nodes();
  auto v = f.values();
  std::vector<Interval> parts;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    const double v0 = v[i], v1 = v[i + 1];
    const bool in0 = v0 >= beta, in1 = v1 >= beta;
    if (in0 && in1) {
      parts.push_back({t[i], t[i + 1]});
    } else if (in0 || in1) {
      const double w = (beta - v0) / (v1 - v0);
      const double cross = std::clamp(t[i] + w * (t[i + 1] - t[i]), t[i], t[i + 1]);
      if (in0) {
        parts.push_back({t[i], cross});
      } else {
        parts.push_back({cross, t[i + 1]});
      }
    }
  }
  return IntervalUnion(std::move(parts));
}

IntervalUnion superlevel(const StepFunction& f, double beta) {
  if (beta > f.max_value()) return {};
  if (beta <= f.min_value()) return IntervalUnion::full();
  auto s = f.boundaries();
  auto c = f.values();
  std::vector<Interval> parts;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] >= beta) parts.push_back({s[i], s[i + 1]});
  }
  return IntervalUnion(std::move(parts));
}

IntervalUnion superlevel(const PiecewiseQuadraticFunction& f, double beta) {
  if (beta > f.max_value()) return {};
  if (beta <= f.min_value()) return IntervalUnion::full();
  std::vector<Interval> parts;
  for (const auto& c : f.cell_data()) {
    const double h = c.t1 - c.t0;
    std::vector<double> cuts{0.0};
    for (double r : quadratic_roots(c.c2, c.c1, c.c0 - beta)) {
      if (r > 0.0 && r < h) cuts.push_back(r);
    }
    cuts.push_back(h);
    auto phi = [&](double u) { return c.c0 + u * (c.c1 + u * c.c2) - beta; };
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const double mid = 0.5 * (cuts[k] + cuts[k + 1]);
      if (phi(mid) >= 0.0) {
        parts.push_back({c.t0 + cuts[k], std::min(c.t0 + cuts[k + 1], c.t1)});
      }
    }
    // Touching tangency (double root inside the cell) or endpoints.
    for (double u : {0.0, h}) {
      if (phi(u) >= 0.0) parts.push_back({c.t0 + u, c.t0 + u});
    }
  }
  for (auto& p : parts) {
    p.lo = std::clamp(p.lo, 0.0, 1.0);
    p.hi = std::clamp(p.hi, p.lo, 1.0);
  }
  return IntervalUnion(std::move(parts));
}

IntervalUnion superlevel(const Function& f, double beta) {
  return std::visit([beta](const auto& g) { return superlevel(g, beta); }, f);
}

// ---------------------------------------------------------------------------
// pointwise algebra

std::vector<double> merge_grids(std::span<const double> a,
                                std::span<const double> b) {
  std::vector<double> out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  std::vector<double> dedup;
  dedup.reserve(out.size());
  for (double t : out) {
    if (dedup.empty() || t - dedup.back() > 1e-14) dedup.push_back(t);
  }
  dedup.back() = 1.0;
  return dedup;
}

namespace {

template <typename Op>
PiecewiseLinearFunction combine(const PiecewiseLinearFunction& f,
                                const PiecewiseLinearFunction& g, Op op) {
  auto grid = merge_grids(f.nodes(), g.nodes());
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = op(f(grid[i]), g(grid[i]));
  return PiecewiseLinearFunction(std::move(grid), std::move(values));
}

template <typename Op>
StepFunction combine(const StepFunction& f, const StepFunction& g, Op op) {
  auto grid = merge_grids(f.boundaries(), g.boundaries());
  std::vector<double> values(grid.size() - 1);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double mid = 0.5 * (grid[i] + grid[i + 1]);
    values[i] = op(f(mid), g(mid));
  }
  return StepFunction(std::move(grid), std::move(values));
}

// |d| for PWL d, with the sign changes of d inserted as nodes.
PiecewiseLinearFunction abs_with_roots(std::span<const double> t,
                                       std::span<const double> d) {
  std::vector<double> nodes{t[0]}, values{std::abs(d[0])};
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    if ((d[i] < 0.0 && d[i + 1] > 0.0) || (d[i] > 0.0 && d[i + 1] < 0.0)) {
      const double root = t[i] + d[i] / (d[i] - d[i + 1]) * (t[i + 1] - t[i]);
      if (root > nodes.back() && root < t[i + 1]) {
        nodes.push_back(root);
        values.push_back(0.0);
      }
    }
    nodes.push_back(t[i + 1]);
    values.push_back(std::abs(d[i + 1]));
  }
  return PiecewiseLinearFunction(std::move(nodes), std::move(values));
}

void require_nonnegative(double min_value) {
  if (min_value < 0.0) {
    throw DomainError("power: function takes negative values");
  }
}

}  // namespace

PiecewiseLinearFunction sum(const PiecewiseLinearFunction& f,
                            const PiecewiseLinearFunction& g) {
  return combine(f, g, [](double a, double b) { return a + b; });
}

PiecewiseLinearFunction abs_diff(const PiecewiseLinearFunction& f,
                                 const PiecewiseLinearFunction& g) {
  auto grid = merge_grids(f.nodes(), g.nodes());
  std::vector<double> d(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) d[i] = f(grid[i]) - g(grid[i]);
  return abs_with_roots(grid, d);
}

PiecewiseLinearFunction abs(const PiecewiseLinearFunction& f) {
  return abs_with_roots(f.nodes(), f.values());
}

PiecewiseLinearFunction scale(const PiecewiseLinearFunction& f, double a) {
  std::vector<double> values(f.values().begin(), f.values().end());
  for (double& v : values) v *= a;
  return PiecewiseLinearFunction({f.nodes().begin(), f.nodes().end()},
                                 std::move(values));
}

PiecewiseLinearFunction shift(const PiecewiseLinearFunction& f, double c) {
  std::vector<double> values(f.values().begin(), f.values().end());
  for (double& v : values) v += c;
  return PiecewiseLinearFunction({f.nodes().begin(), f.nodes().end()},
                                 std::move(values));
}

PiecewiseLinearFunction power(const PiecewiseLinearFunction& f, double p) {
  require_nonnegative(f.min_value());
  auto t = f.nodes();
  std::vector<double> nodes, values;
  nodes.reserve(t.size() * kPowerRefinement);
  values.reserve(t.size() * kPowerRefinement);
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    for (int k = 0; k < kPowerRefinement; ++k) {
      const double s = t[i] + (t[i + 1] - t[i]) * k / kPowerRefinement;
      nodes.push_back(s);
      values.push_back(std::pow(f(s), p));
    }
  }
  nodes.push_back(1.0);
  values.push_back(std::pow(f.values().back(), p));
  return PiecewiseLinearFunction(std::move(nodes), std::move(values));
}

StepFunction sum(const StepFunction& f, const StepFunction& g) {
  return combine(f, g, [](double a, double b) { return a + b; });
}

StepFunction abs_diff(const StepFunction& f, const StepFunction& g) {
  return combine(f, g, [](double a, double b) { return std::abs(a - b); });
}

StepFunction scale(const StepFunction& f, double a) {
  std::vector<double> values(f.values().begin(), f.values().end());
  for (double& v : values) v *= a;
  return StepFunction({f.boundaries().begin(), f.boundaries().end()},
                      std::move(values));
}

StepFunction shift(const StepFunction& f, double c) {
  std::vector<double> values(f.values().begin(), f.values().end());
  for (double& v : values) v += c;
  return StepFunction({f.boundaries().begin(), f.boundaries().end()},
                      std::move(values));
}

StepFunction power(const StepFunction& f, double p) {
  require_nonnegative(f.min_value());
  std::vector<double> values(f.values().begin(), f.values().end());
  for (double& v : values) v = std::pow(v, p);
  return StepFunction({f.boundaries().begin(), f.boundaries().end()},
                      std::move(values));
}

Function pointwise_map(const Function& f, const Function* g, PointwiseOp op) {
  if (op.binary()) {
    if (g == nullptr) throw UsageError("pointwise_map: binary op needs g");
    if (f.index() != g->index()) {
      throw UsageError("pointwise_map: f and g must share a representation");
    }
  }
  return std::visit(
      [&](const auto& fv) -> Function {
        using F = std::decay_t<decltype(fv)>;
        switch (op.kind) {
          case PointwiseOp::Kind::kAbsDiff:
            return abs_diff(fv, std::get<F>(*g));
          case PointwiseOp::Kind::kSum:
            return sum(fv, std::get<F>(*g));
          case PointwiseOp::Kind::kScale:
            return scale(fv, op.param);
          case PointwiseOp::Kind::kShift:
            return shift(fv, op.param);
          case PointwiseOp::Kind::kPower:
            return power(fv, op.param);
        }
        throw UsageError("pointwise_map: unknown op");
      },
      f);
}

PiecewiseQuadraticFunction product(const PiecewiseLinearFunction& f,
                                   const PiecewiseLinearFunction& g) {
  auto grid = merge_grids(f.nodes(), g.nodes());
  std::vector<PiecewiseQuadraticFunction::Cell> cells;
  cells.reserve(grid.size() - 1);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double t0 = grid[i], t1 = grid[i + 1], h = t1 - t0;
    const double f0 = f(t0), g0 = g(t0);
    const double sf = (f(t1) - f0) / h, sg = (g(t1) - g0) / h;
    cells.push_back({t0, t1, f0 * g0, f0 * sg + g0 * sf, sf * sg});
  }
  return PiecewiseQuadraticFunction(std::move(cells));
}

PiecewiseLinearFunction compose(const PiecewiseLinearFunction& phi,
                                const PiecewiseLinearFunction& f, double lo,
                                double hi) {
  if (!(lo < hi)) throw UsageError("compose: need lo < hi");
  if (f.min_value() < lo || f.max_value() > hi) {
    throw DomainError("compose: f leaves [lo, hi]");
  }
  auto to_unit = [&](double v) { return std::clamp((v - lo) / (hi - lo), 0.0, 1.0); };
  auto t = f.nodes();
  auto v = f.values();
  auto breaks = phi.nodes();
  std::vector<double> nodes{0.0}, values{phi(to_unit(v[0]))};
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    const double u0 = to_unit(v[i]), u1 = to_unit(v[i + 1]);
    std::vector<double> cross;
    if (u0 != u1) {
      for (std::size_t k = 1; k + 1 < breaks.size(); ++k) {
        const double b = breaks[k];
        if ((b > u0 && b < u1) || (b < u0 && b > u1)) {
          cross.push_back(t[i] + (b - u0) / (u1 - u0) * (t[i + 1] - t[i]));
        }
      }
      std::sort(cross.begin(), cross.end());
    }
    for (double s : cross) {
      if (s > nodes.back() && s < t[i + 1]) {
        nodes.push_back(s);
        values.push_back(phi(to_unit(f(s))));
      }
    }
    nodes.push_back(t[i + 1]);
    values.push_back(phi(to_unit(v[i + 1])));
  }
  return PiecewiseLinearFunction(std::move(nodes), std::move(values));
}

}  // namespace vchoq
