#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "vchoq/intervals.hpp"

namespace vchoq {

/// Continuous piecewise-linear function on [0,1].
///
/// Nodes are strictly increasing with nodes.front() == 0 and
/// nodes.back() == 1; values are finite. Range bounds are cached since every
/// integral needs them.
class PiecewiseLinearFunction {
 public:
  PiecewiseLinearFunction(std::vector<double> nodes, std::vector<double> values);

  static PiecewiseLinearFunction constant(double c);
  static PiecewiseLinearFunction ramp();  // f(t) = t
  // Interpolant of `fn` on a uniform grid with `grid_size` nodes.
  static PiecewiseLinearFunction sample(const std::function<double(double)>& fn,
                                        std::size_t grid_size);

  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return nodes_.size(); }
  std::size_t cells() const { return nodes_.size() - 1; }

  double min_value() const { return min_; }
  double max_value() const { return max_; }

  double operator()(double t) const;

  bool nondecreasing() const;
  bool nonincreasing() const;

 private:
  std::vector<double> nodes_;
  std::vector<double> values_;
  double min_ = 0.0;
  double max_ = 0.0;
};

/// Step function on [0,1]: value c_i on [s_{i-1}, s_i), last cell closed.
class StepFunction {
 public:
  StepFunction(std::vector<double> boundaries, std::vector<double> values);

  static StepFunction constant(double c);

  std::span<const double> boundaries() const { return boundaries_; }
  std::span<const double> values() const { return values_; }
  std::size_t cells() const { return values_.size(); }

  double min_value() const { return min_; }
  double max_value() const { return max_; }

  double operator()(double t) const;

 private:
  std::vector<double> boundaries_;
  std::vector<double> values_;
  double min_ = 0.0;
  double max_ = 0.0;
};

/// Piecewise-quadratic function on [0,1], continuous at the nodes. Only
/// produced by product(); exists so |f g| integrands stay exact.
class PiecewiseQuadraticFunction {
 public:
  struct Cell {
    double t0, t1;
    // q(t) = c0 + c1 (t - t0) + c2 (t - t0)^2
    double c0, c1, c2;
  };

  explicit PiecewiseQuadraticFunction(std::vector<Cell> cells);

  std::span<const Cell> cell_data() const { return cells_; }
  double min_value() const { return min_; }
  double max_value() const { return max_; }

  double operator()(double t) const;

  // Values where the superlevel length can change slope abruptly: node
  // values and interior extrema.
  std::vector<double> critical_values() const;

 private:
  std::vector<Cell> cells_;
  double min_ = 0.0;
  double max_ = 0.0;
};

using Function = std::variant<PiecewiseLinearFunction, StepFunction>;

double evaluate(const PiecewiseLinearFunction& f, double t);
double evaluate(const StepFunction& f, double t);
double evaluate(const Function& f, double t);

double min_value(const Function& f);
double max_value(const Function& f);

/// Exact superlevel set {t in [0,1] : f(t) >= beta}.
IntervalUnion superlevel(const PiecewiseLinearFunction& f, double beta);
IntervalUnion superlevel(const StepFunction& f, double beta);
IntervalUnion superlevel(const PiecewiseQuadraticFunction& f, double beta);
IntervalUnion superlevel(const Function& f, double beta);

struct PointwiseOp {
  enum class Kind { kAbsDiff, kSum, kScale, kShift, kPower };
  Kind kind = Kind::kSum;
  double param = 0.0;

  static PointwiseOp abs_diff() { return {Kind::kAbsDiff, 0.0}; }
  static PointwiseOp sum() { return {Kind::kSum, 0.0}; }
  static PointwiseOp scale(double a) { return {Kind::kScale, a}; }
  static PointwiseOp shift(double c) { return {Kind::kShift, c}; }
  static PointwiseOp power(double p) { return {Kind::kPower, p}; }

  bool binary() const { return kind == Kind::kAbsDiff || kind == Kind::kSum; }
};

// Cells are split this many times before f^p is interpolated.
inline constexpr int kPowerRefinement = 8;

/// Pointwise combination. Binary ops need `g` of the same representation as
/// `f`; grids are merged first. abs-diff inserts the interior roots of f-g so
/// the result is exact; power(p) is the interpolant of f^p on a grid refined
/// kPowerRefinement times (exact for step functions).
Function pointwise_map(const Function& f, const Function* g, PointwiseOp op);

PiecewiseLinearFunction sum(const PiecewiseLinearFunction& f,
                            const PiecewiseLinearFunction& g);
PiecewiseLinearFunction abs_diff(const PiecewiseLinearFunction& f,
                                 const PiecewiseLinearFunction& g);
PiecewiseLinearFunction abs(const PiecewiseLinearFunction& f);
PiecewiseLinearFunction scale(const PiecewiseLinearFunction& f, double a);
PiecewiseLinearFunction shift(const PiecewiseLinearFunction& f, double c);
PiecewiseLinearFunction power(const PiecewiseLinearFunction& f, double p);
StepFunction sum(const StepFunction& f, const StepFunction& g);
StepFunction abs_diff(const StepFunction& f, const StepFunction& g);
StepFunction scale(const StepFunction& f, double a);
StepFunction shift(const StepFunction& f, double c);
StepFunction power(const StepFunction& f, double p);

/// Exact pointwise product on the merged grid.
PiecewiseQuadraticFunction product(const PiecewiseLinearFunction& f,
                                   const PiecewiseLinearFunction& g);

/// phi(f(t)) for a PWL map phi defined on [lo, hi] through the affine change
/// u = (v - lo) / (hi - lo); the breakpoints of phi are pulled back onto f's
/// grid, so the result is exact. Requires lo < hi and lo <= f <= hi.
PiecewiseLinearFunction compose(const PiecewiseLinearFunction& phi,
                                const PiecewiseLinearFunction& f, double lo,
                                double hi);

/// Sorted union of two grids, dropping points closer than 1e-14.
std::vector<double> merge_grids(std::span<const double> a,
                                std::span<const double> b);

}  // namespace vchoq
