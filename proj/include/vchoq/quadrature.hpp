#pragma once

#include <functional>
#include <vector>

namespace vchoq {

struct QuadratureConfig {
  int order = 8;              // Gauss-Legendre points per panel
  int max_subdivisions = 12;  // bisection depth limit per panel
  double tolerance = 1e-9;    // absolute, for the whole integral

  /// Throws UsageError unless order >= 2 and tolerance > 0.
  void validate() const;

  /// Defaults, with the tolerance taken from VCHOQ_TOLERANCE when set.
  static QuadratureConfig from_environment();
};

struct IntegralResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int panels_used = 0;
  // False when the tolerance was not met within max_subdivisions.
  bool converged = true;
};

/// Nodes and weights on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussLegendreRule(int order);
};

/// One panel [a, b] of an adaptive integral. A graded end substitutes
/// x = end -/+ (b - a) tau^m so an algebraic endpoint singularity of the
/// integrand is flattened before Gauss sampling; nodes never touch the ends.
struct Panel {
  enum class Grading { kNone, kTop, kBottom };
  double a = 0.0;
  double b = 0.0;
  Grading grading = Grading::kNone;
  double exponent = 1.0;
};

/// Globally adaptive Gauss-Legendre: every panel is estimated by comparing
/// the rule on the panel with the rule on its two halves; the panel with the
/// largest estimate is bisected until the summed estimate meets the
/// tolerance or every offender has reached max_subdivisions.
IntegralResult integrate_panels(const std::vector<Panel>& panels,
                                const std::function<double(double)>& integrand,
                                const QuadratureConfig& cfg);

}  // namespace vchoq
