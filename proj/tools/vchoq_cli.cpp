#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vchoq/choquet.hpp"
#include "vchoq/errors.hpp"
#include "vchoq/format.hpp"
#include "vchoq/spaces.hpp"
#include "vchoq/spec_io.hpp"
#include "vchoq/verify.hpp"
#include "vchoq/volterra.hpp"

namespace {

using namespace vchoq;
using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitViolations = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitTolerance = 3;

struct Common {
  std::string capacity = "identity";
  double tolerance = 0.0;  // 0: environment or built-in default
  std::string output;
};

QuadratureConfig quadrature(const Common& c) {
  auto cfg = QuadratureConfig::from_environment();
  if (c.tolerance > 0.0) cfg.tolerance = c.tolerance;
  return cfg;
}

void emit(const Common& c, const std::string& text) {
  if (c.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(c.output, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + c.output + "'");
  out << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

int tolerance_failure(bool converged) {
  if (converged) return kExitOk;
  std::cerr << "error: quadrature did not reach the requested tolerance\n";
  return kExitTolerance;
}

std::string csv_function(const PiecewiseLinearFunction& f, const char* column) {
  std::string out = std::string("x,") + column + "\n";
  for (std::size_t i = 0; i < f.size(); ++i) {
    out += fmt9(f.nodes()[i]) + "," + fmt9(f.values()[i]) + "\n";
  }
  return out;
}

void add_common(CLI::App* sub, Common& c, bool with_capacity) {
  if (with_capacity) {
    sub->add_option("--capacity", c.capacity,
                    "Capacity: distortion name, power(p), JSON object or JSON file")
        ->capture_default_str();
  }
  sub->add_option("--tolerance", c.tolerance,
                  "Quadrature tolerance (default: $VCHOQ_TOLERANCE or 1e-9)")
      ->check(CLI::PositiveNumber);
  sub->add_option("-o,--output", c.output, "Write to this file instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Choquet integrals and the Volterra-Choquet operator"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  Common common;
  std::string f_spec, f0_spec = "preset:one", targets_path, suite, op_name = "V";
  std::vector<double> on;
  std::size_t grid = kDefaultGrid, span_grid = 257, samples = 200;
  int n = 1, iters = 200, n_max = 12;
  double p = 2.0;
  std::uint64_t seed = 42;
  bool no_runtime = false;

  auto* integrate = app.add_subcommand("integrate", "Choquet integral of f over [a,b]");
  integrate->add_option("--f", f_spec, "Function spec")->required();
  integrate->add_option("--on", on, "Integration interval a,b (default 0,1)")
      ->delimiter(',')
      ->expected(2);
  add_common(integrate, common, true);

  auto* volterra = app.add_subcommand("volterra", "V f on a uniform grid, as CSV");
  volterra->add_option("--f", f_spec, "Function spec")->required();
  volterra->add_option("--grid", grid, "Grid nodes")->capture_default_str()->check(CLI::Range(2, 1 << 20));
  add_common(volterra, common, true);

  auto* orbit = app.add_subcommand("orbit", "Iterates V^0 f0 .. V^n f0, as CSV");
  orbit->add_option("--n", n, "Number of iterations")->required()->check(CLI::NonNegativeNumber);
  orbit->add_option("--f0", f0_spec, "Starting function spec")->capture_default_str();
  orbit->add_option("--grid", grid, "Grid nodes")->capture_default_str()->check(CLI::Range(2, 1 << 20));
  add_common(orbit, common, true);

  auto* norm = app.add_subcommand("norm", "Choquet L_p norm of f");
  norm->add_option("--f", f_spec, "Function spec")->required();
  norm->add_option("--p", p, "Exponent p >= 1")->capture_default_str();
  add_common(norm, common, true);

  auto* opnorm = app.add_subcommand("opnorm", "L2 operator norm of the classical Volterra operator");
  opnorm->add_option("--grid", grid, "Grid nodes (>= 64)")->capture_default_str();
  opnorm->add_option("--iters", iters, "Power iterations")->capture_default_str();
  add_common(opnorm, common, true);

  auto* check = app.add_subcommand("check", "Run a named property suite");
  check->add_option("--suite", suite, "Suite name (see --list)");
  check->add_option("--seed", seed, "Seed")->capture_default_str();
  check->add_option("--samples", samples, "Sample count")->capture_default_str();
  check->add_flag("--no-runtime", no_runtime, "Report runtime_ms as 0 for byte-stable output");
  bool list = false;
  check->add_flag("--list", list, "List suite names and exit");
  add_common(check, common, false);

  auto* span = app.add_subcommand("span", "Residuals of least-squares fits from orbit spans, as CSV");
  span->add_option("--targets", targets_path, "JSON file with the target list")->required();
  span->add_option("--n-max", n_max, "Largest orbit index")->capture_default_str();
  span->add_option("--grid", span_grid, "Grid nodes")->capture_default_str()->check(CLI::Range(2, 1 << 20));
  span->add_option("--operator", op_name, "V or U (= I + V)")
      ->capture_default_str()
      ->check(CLI::IsMember({"V", "U"}));
  add_common(span, common, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    const auto cfg = quadrature(common);

    if (*integrate) {
      const auto f = parse_function_spec(f_spec);
      const auto mu = parse_capacity_spec(common.capacity);
      const double a = on.empty() ? 0.0 : on[0];
      const double b = on.empty() ? 1.0 : on[1];
      const auto r = choquet_integral(f, IntervalUnion::segment(a, b), mu, cfg);
      json j;
      j["value"] = round9(r.value);
      j["error_estimate"] = round9(r.error_estimate);
      emit(common, dump(j));
      return tolerance_failure(r.converged);
    }

    if (*volterra) {
      const auto f = parse_function_spec(f_spec);
      const auto mu = parse_capacity_spec(common.capacity);
      const auto image = apply_volterra_detailed(f, mu, grid, cfg);
      emit(common, csv_function(image.function, "Vf"));
      return tolerance_failure(image.converged);
    }

    if (*orbit) {
      const auto f0 = parse_function_spec(f0_spec);
      const auto mu = parse_capacity_spec(common.capacity);
      const auto rec = iterate_volterra(f0, n, mu, grid, cfg);
      const auto* gamma = mu.distortion();
      const bool closed = f0_spec == "preset:one" && gamma &&
                          gamma->kind() == DistortionFunction::Kind::kExpSaturation;
      std::string out = "x";
      for (int k = 0; k <= n; ++k) out += ",V" + std::to_string(k);
      if (closed) {
        for (int k = 0; k <= n; ++k) out += ",closed" + std::to_string(k);
      }
      out += "\n";
      const auto nodes = rec.iterates.front().nodes();
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        out += fmt9(nodes[i]);
        for (const auto& it : rec.iterates) out += "," + fmt9(it.values()[i]);
        if (closed) {
          for (int k = 0; k <= n; ++k) {
            out += "," + fmt9(k == 0 ? 1.0 : orbit_closed_form(k, nodes[i]));
          }
        }
        out += "\n";
      }
      emit(common, out);
      return tolerance_failure(rec.converged);
    }

    if (*norm) {
      const auto f = parse_function_spec(f_spec);
      const auto mu = parse_capacity_spec(common.capacity);
      json j;
      j["lp_norm"] = round9(lp_norm(f, LpConfig(p), mu, cfg));
      emit(common, dump(j));
      return kExitOk;
    }

    if (*opnorm) {
      const auto mu = parse_capacity_spec(common.capacity);
      json j;
      j["estimate"] = round9(classical_opnorm(mu, grid, iters));
      j["reference"] = round9(2.0 / 3.14159265358979323846);
      emit(common, dump(j));
      return kExitOk;
    }

    if (*check) {
      if (list) {
        std::string out;
        for (const auto& name : suite_names()) out += name + "\n";
        emit(common, out);
        return kExitOk;
      }
      if (suite.empty()) throw UsageError("check needs --suite (or --list)");
      const auto report = run_suite(suite, seed, samples);
      emit(common, report_json(report, !no_runtime) + "\n");
      return report.passed() ? kExitOk : kExitViolations;
    }

    if (*span) {
      std::ifstream in(targets_path);
      if (!in) throw SpecError("span: cannot read targets file '" + targets_path + "'");
      std::stringstream text;
      text << in.rdbuf();
      const auto targets = parse_span_targets(text.str());
      const auto mu = parse_capacity_spec(common.capacity);
      const auto rows = span_residual(targets, n_max, mu, span_grid,
                                      op_name == "U" ? SpanOperator::kIdentityPlusV
                                                     : SpanOperator::kV,
                                      cfg);
      std::string out = "n,target,residual\n";
      for (const auto& r : rows) {
        out += std::to_string(r.n) + "," + r.target + "," + fmt9(r.residual) + "\n";
      }
      emit(common, out);
      return kExitOk;
    }
  } catch (const std::invalid_argument& e) {  // UsageError, PreconditionError, SpecError
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitViolations;
  }
  return kExitOk;
}
