#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "vchoq/capacities.hpp"
#include "vchoq/quadrature.hpp"

namespace vchoq {

struct Violation {
  std::size_t sample = 0;
  std::uint64_t sample_seed = 0;
  std::string witness;
  double margin = 0.0;
};

/// Outcome of one seeded property suite. Margins are slacks: the amount by
/// which an inequality holds, or minus the discrepancy of an equality. A
/// check is violated when its margin drops below -tolerance.
struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  double tolerance = 0.0;
  // Suites built to fail (convex distortion) pass when they find violations.
  bool expects_violations = false;
  // Data-only suites carry a table and never fail.
  bool demonstration = false;
  std::vector<Violation> violations;  // ordered by sample index
  double worst_margin = 0.0;
  double runtime_ms = 0.0;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  bool passed() const {
    if (demonstration) return true;
    return expects_violations ? !violations.empty() : violations.empty();
  }
};

std::vector<std::string> suite_names();

/// Deterministic in (name, seed, n_samples) apart from runtime_ms. Throws
/// UsageError for unknown names or n_samples == 0. For "thm-6.2" the sample
/// count is the number of orbit iterates checked; for "remark-4.4" it is the
/// number of spike widths tabulated.
SuiteReport run_suite(std::string_view name, std::uint64_t seed,
                      std::size_t n_samples);

/// JSON text with fields suite, seed, samples, violations[], worst_margin,
/// runtime_ms (plus tolerance, passed and, for demonstrations, the table).
/// Reals are rounded to 9 significant digits.
std::string report_json(const SuiteReport& report, bool include_runtime = true);

enum class SpanOperator { kV, kIdentityPlusV };

struct SpanTarget {
  std::string name;
  std::function<double(double)> fn;
};

struct SpanRow {
  int n = 0;
  std::string target;
  double residual = 0.0;     // uniform norm on the grid
  double l2_residual = 0.0;  // discrete L2 (root mean square) on the grid
};

/// Least-squares fit of each target from span{T^0 f0, ..., T^n f0} with
/// f0 = 1 and T = V or I + V, for n = 0..n_max, on a uniform grid.
///
/// The basis grows one orbit element at a time (modified Gram-Schmidt with
/// reorthogonalisation); an element that is numerically dependent on the
/// earlier ones adds nothing, which is the minimum-norm solution. Each
/// nested fit lies in span n, so `residual` is the smallest uniform error
/// among the fits for m <= n, an upper bound on the best uniform
/// approximation error from span n and nonincreasing in n. `l2_residual` is
/// the plain least-squares residual, nonincreasing by construction.
std::vector<SpanRow> span_residual(const std::vector<SpanTarget>& targets,
                                   int n_max, const Capacity& mu,
                                   std::size_t grid_size,
                                   SpanOperator op = SpanOperator::kV,
                                   const QuadratureConfig& cfg = {});

}  // namespace vchoq
