// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Each criterion must meet both its accuracy and its time limit.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>

#include "oracles.hpp"
#include "span_reference.hpp"
#include "vchoq/capacities.hpp"
#include "vchoq/choquet.hpp"
#include "vchoq/generators.hpp"
#include "vchoq/random.hpp"
#include "vchoq/verify.hpp"
#include "vchoq/volterra.hpp"

using namespace vchoq;

namespace {

constexpr std::uint64_t kSeed = 42;
using Kind = FunctionClass::Kind;

struct Outcome {
  bool ok = true;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double limit_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = secs < limit_s;
  const bool pass = out.ok && in_time;
  if (!pass) ++failures;
  std::printf("[%s] %d %-22s %s; %.2f s (limit %.0f s)%s\n", pass ? "PASS" : "FAIL", id, name,
              out.detail.c_str(), secs, limit_s, in_time ? "" : " TOO SLOW");
  std::fflush(stdout);
}

std::string worst(double err, double tol) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "worst %.3g vs %.0e", err, tol);
  return buf;
}

Capacity catalog_capacity(std::size_t i) {
  const auto cat = distortion_catalog();
  return Capacity::distorted(cat[i % cat.size()]);
}

std::size_t node_count(std::uint64_t seed, int lo, int hi) {
  return static_cast<std::size_t>(Rng(seed).uniform_int(lo, hi));
}

}  // namespace

int main() {
  criterion(1, "constant identity", 1.0, [] {
    double err = 0.0;
    const auto one = PiecewiseLinearFunction::constant(1.0);
    for (const auto& gamma : distortion_catalog()) {
      const auto mu = Capacity::distorted(gamma);
      for (int i = 0; i <= 100; ++i) {
        const double x = i / 100.0;
        const double v = choquet_integral(one, IntervalUnion::segment(0.0, x), mu).value;
        err = std::max(err, std::abs(v - gamma(x)));
      }
    }
    return Outcome{err <= 1e-10, worst(err, 1e-10)};
  });

  criterion(2, "Lebesgue reduction", 5.0, [] {
    double err = 0.0;
    const auto id = Capacity::distorted(DistortionFunction::identity());
    for (std::uint64_t i = 0; i < 100; ++i) {
      const auto f = random_pwl(derive_seed(kSeed, i), FunctionClass::of(Kind::kSignedPwl),
                                node_count(derive_seed(kSeed + 1, i), 2, 40));
      const auto a = random_interval_union(derive_seed(kSeed + 2, i));
      err = std::max(err, std::abs(choquet_integral(f, a, id).value - oracle::lebesgue(f, a)));
    }
    return Outcome{err <= 1e-10, worst(err, 1e-10)};
  });

  criterion(3, "oracle equivalence", 60.0, [] {
    double step_err = 0.0, pwl_err = 0.0;
    for (std::uint64_t i = 0; i < 100; ++i) {
      const auto f = random_step(derive_seed(kSeed + 3, i), node_count(derive_seed(kSeed + 4, i), 1, 64));
      const auto mu = catalog_capacity(i);
      step_err = std::max(step_err, std::abs(choquet_integral(f, IntervalUnion::full(), mu).value -
                                             discrete_choquet_sorted(f, mu)));
    }
    for (std::uint64_t i = 0; i < 20; ++i) {
      const auto f = random_pwl(derive_seed(kSeed + 5, i), FunctionClass::of(Kind::kSignedPwl),
                                node_count(derive_seed(kSeed + 6, i), 2, 16));
      const auto mu = catalog_capacity(i);
      pwl_err = std::max(pwl_err, std::abs(choquet_integral(f, IntervalUnion::full(), mu).value -
                                           oracle_beta_riemann(f, IntervalUnion::full(), mu, 1u << 20)));
    }
    return Outcome{step_err <= 1e-10 && pwl_err <= 1e-5,
                   "steps " + worst(step_err, 1e-10) + ", pwl " + worst(pwl_err, 1e-5)};
  });

  criterion(4, "convolution fast path", 30.0, [] {
    double err = 0.0;
    const auto cat = distortion_catalog();
    for (std::uint64_t i = 0; i < 100; ++i) {
      const auto& gamma = cat[i % cat.size()];
      const bool up = i % 2 == 0;
      const auto f = random_pwl(derive_seed(kSeed + 7, i),
                                FunctionClass::of(up ? Kind::kNondecreasing : Kind::kNonincreasing),
                                node_count(derive_seed(kSeed + 8, i), 2, 20));
      const double x = Rng(derive_seed(kSeed + 9, i)).uniform(0.0, 1.0);
      const double engine =
          choquet_integral(f, IntervalUnion::segment(0.0, x), Capacity::distorted(gamma)).value;
      const double conv =
          choquet_monotone(f, x, gamma, up ? Monotonicity::kNondecreasing : Monotonicity::kNonincreasing)
              .value;
      err = std::max(err, std::abs(engine - conv));
    }
    return Outcome{err <= 1e-7, worst(err, 1e-7)};
  });

  criterion(5, "orbit closed form", 60.0, [] {
    const auto mu = Capacity::distorted(DistortionFunction::exp_saturation());
    const auto rec = iterate_volterra(PiecewiseLinearFunction::constant(1.0), 8, mu, 1025);
    double err = 0.0;
    for (int n = 0; n <= 8; ++n) {
      const auto& it = rec.iterates[n];
      for (std::size_t j = 0; j < it.size(); ++j) {
        const double x = it.nodes()[j];
        const double exact = n == 0 ? 1.0 : orbit_closed_form(n, x);
        err = std::max(err, std::abs(it.values()[j] - exact));
      }
    }
    return Outcome{err <= 5e-5, worst(err, 5e-5)};
  });

  criterion(6, "classical norm", 10.0, [] {
    const double est = classical_opnorm(Capacity::distorted(DistortionFunction::identity()), 1025, 200);
    const double err = std::abs(est - 2.0 / std::numbers::pi);
    return Outcome{err <= 1e-3, worst(err, 1e-3)};
  });

  criterion(7, "named suites", 600.0, [] {
    Outcome out;
    int clean = 0;
    const char* suites[] = {"thm-4.1",    "cor-4.2",       "thm-5.1-i",   "thm-5.1-ii",  "thm-5.1-iii",
                            "remark-5.3", "holder",        "minkowski",   "subadditivity", "comonotone",
                            "homogeneity", "translation", "monotonicity", "eq3-decomposition"};
    for (const char* name : suites) {
      const auto r = run_suite(name, kSeed, 200);
      if (r.violations.empty()) {
        ++clean;
      } else {
        out.ok = false;
        out.detail += std::string(name) + " has " + std::to_string(r.violations.size()) + " violations; ";
      }
    }
    out.detail += std::to_string(clean) + "/" + std::to_string(std::size(suites)) + " suites clean";
    return out;
  });

  criterion(8, "negative control", 600.0, [] {
    const auto r = run_suite("capacity-laws[gamma=t^2]", kSeed, 10000);
    std::size_t sub = 0;
    for (const auto& v : r.violations) {
      if (v.witness.find("submodularity") != std::string::npos) ++sub;
    }
    return Outcome{sub >= 1, std::to_string(sub) + " submodularity violations in 10000 samples"};
  });

  criterion(9, "span residual", 120.0, [] {
    using namespace span_reference;
    const auto mu = Capacity::distorted(DistortionFunction::exp_saturation());
    const std::vector<SpanTarget> targets = {
        {"sin-pi", [](double x) { return std::sin(std::numbers::pi * x); }},
        {"square", [](double x) { return x * x; }}};
    const auto rows = span_residual(targets, kMaxN, mu, kGrid);
    bool monotone = true, bounded = true;
    for (int t = 0; t < 2; ++t) {
      const auto& frozen = t == 0 ? kSinPi : kSquare;
      for (int n = 0; n <= kMaxN; ++n) {
        const double r = rows[t * (kMaxN + 1) + n].residual;
        if (n > 0 && r > rows[t * (kMaxN + 1) + n - 1].residual + 1e-12) monotone = false;
        if (!within(r, frozen[n])) bounded = false;
      }
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "nonincreasing %s, within frozen %s; n=%d sin-pi %.3g square %.3g",
                  monotone ? "yes" : "no", bounded ? "yes" : "no", kMaxN, rows[kMaxN].residual,
                  rows.back().residual);
    return Outcome{monotone && bounded, buf};
  });

  std::printf("%s: %d failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
