#include "vchoq/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include <json.hpp>

#include "vchoq/choquet.hpp"
#include "vchoq/errors.hpp"
#include "vchoq/format.hpp"
#include "vchoq/generators.hpp"
#include "vchoq/random.hpp"
#include "vchoq/spaces.hpp"
#include "vchoq/volterra.hpp"

namespace vchoq {

namespace {

using Kind = FunctionClass::Kind;

constexpr std::size_t kNodes = 8;
constexpr std::size_t kImageGrid = 257;

const std::vector<Capacity>& catalog_capacities() {
  static const std::vector<Capacity> caps = [] {
    std::vector<Capacity> out;
    for (auto& g : distortion_catalog()) out.push_back(Capacity::distorted(g));
    return out;
  }();
  return caps;
}

const Capacity& catalog_capacity(std::size_t i) {
  const auto& caps = catalog_capacities();
  return caps[i % caps.size()];
}

Capacity convex_square() {
  return Capacity::distorted(DistortionFunction::custom(
      "t^2", [](double t) { return t * t; }, [](double t) { return 2.0 * t; },
      false));
}

std::string describe(const PiecewiseLinearFunction& f) {
  std::string s = "{\"type\":\"pwl\",\"nodes\":[";
  for (std::size_t i = 0; i < f.size(); ++i) s += (i ? "," : "") + fmt9(f.nodes()[i]);
  s += "],\"values\":[";
  for (std::size_t i = 0; i < f.size(); ++i) s += (i ? "," : "") + fmt9(f.values()[i]);
  return s + "]}";
}

std::string describe(const StepFunction& f) {
  std::string s = "{\"type\":\"step\",\"nodes\":[";
  for (std::size_t i = 0; i < f.boundaries().size(); ++i) {
    s += (i ? "," : "") + fmt9(f.boundaries()[i]);
  }
  s += "],\"values\":[";
  for (std::size_t i = 0; i < f.cells(); ++i) s += (i ? "," : "") + fmt9(f.values()[i]);
  return s + "]}";
}

std::string describe(const IntervalUnion& a) {
  std::ostringstream os;
  os.precision(kSignificantDigits);
  os << a;
  return os.str();
}

// Collects margins for one suite run; samples are visited in index order so
// the witness list comes out sorted.
class Runner {
 public:
  Runner(SuiteReport& report, std::uint64_t seed) : report_(report), seed_(seed) {}

  std::uint64_t sample_seed(std::size_t i) const { return derive_seed(seed_, i); }

  template <class Witness>
  void check(std::size_t i, double margin, Witness&& witness) {
    if (!(margin >= report_.worst_margin)) report_.worst_margin = margin;
    if (!(margin >= -report_.tolerance)) {
      report_.violations.push_back({i, sample_seed(i), witness(), margin});
    }
  }

 private:
  SuiteReport& report_;
  std::uint64_t seed_;
};

double integral(const PiecewiseLinearFunction& f, const IntervalUnion& a,
                const Capacity& mu) {
  return choquet_integral(f, a, mu).value;
}

double volterra_at(const PiecewiseLinearFunction& f, double x, const Capacity& mu) {
  if (x <= 0.0) return 0.0;
  return choquet_integral(f, IntervalUnion::segment(0.0, x), mu).value;
}

PiecewiseLinearFunction signed_pwl(std::uint64_t s) {
  return random_pwl(s, FunctionClass::of(Kind::kSignedPwl), kNodes);
}

PiecewiseLinearFunction nonneg_pwl(std::uint64_t s) {
  return random_pwl(s, FunctionClass::of(Kind::kNonnegPwl), kNodes);
}

// Exact Lebesgue integral of a PWL function over an interval union.
double lebesgue_integral(const PiecewiseLinearFunction& f, const IntervalUnion& a) {
  double total = 0.0;
  for (const auto& part : a.parts()) {
    std::vector<double> pts{part.lo};
    for (double t : f.nodes()) {
      if (t > part.lo && t < part.hi) pts.push_back(t);
    }
    pts.push_back(part.hi);
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
      total += 0.5 * (pts[k + 1] - pts[k]) * (f(pts[k]) + f(pts[k + 1]));
    }
  }
  return total;
}

double conjugate_power(double measure, double q) {
  return std::isinf(q) ? 1.0 : std::pow(measure, 1.0 / q);
}

constexpr double kExponents[] = {1.5, 2.0, 3.0};
constexpr double kScales[] = {0.0, 0.5, 2.0, 10.0};

// ---------------------------------------------------------------------------
// Choquet integral laws

void homogeneity(Runner& run, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const auto s = run.sample_seed(i);
    const auto& mu = catalog_capacity(i);
    const auto f = signed_pwl(derive_seed(s, 0));
    const auto a = random_interval_union(derive_seed(s, 1));
    const double c = kScales[i % 4];
    const double lhs = integral(scale(f, c), a, mu);
    const double rhs = c * integral(f, a, mu);
    run.check(i, -std::abs(lhs - rhs) / std::max(1.0, c), [&] {
      return "a=" + fmt9(c) + " f=" + describe(f) + " A=" + describe(a) + " mu=" + mu.name();
    });
  }
}

void translation(Runner& run, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const auto s = run.sample_seed(i);
    const auto& mu = catalog_capacity(i);
    const auto f = signed_pwl(derive_seed(s, 0));
    const auto a = random_interval_union(derive_seed(s, 1));
    const double c = i % 2 ? 1.0 : -1.0;
    const double lhs = integral(shift(f, c), a, mu);
    const double rhs = integral(f, a, mu) + c * mu.measure(a);
    run.check(i, -std::abs(lhs - rhs), [&] {
      return "c=" + fmt9(c) + " f=" + describe(f) + " A=" + describe(a) + " mu=" + mu.name();
    });
  }
}

void monotonicity(Runner& run, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const auto s = run.sample_seed(i);
    const auto& mu = catalog_capacity(i);
    const auto f = signed_pwl(derive_seed(s, 0));
    const auto g = sum(f, nonneg_pwl(derive_seed(s, 1)));
    const auto a = random_interval_union(derive_seed(s, 2));
    run.check(i, integral(g, a, mu) - integral(f, a, mu), [&] {
      return "f=" + describe(f) + " g=" + describe(g) + " A=" + describe(a) + " mu=" + mu.name();
    });
  }
}

void subadditivity(Runner& run, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const auto s = run.sample_seed(i);
    const auto& mu = catalog_capacity(i);
    if (!mu.claims_submodular()) continue;
    const auto f = signed_pwl(derive_seed(s, 0));
    const auto g = signed_pwl(derive_seed(s, 1));
    const auto a = random_interval_union(derive_seed(s, 2));
    const double margin = integral(f, a, mu) + integral(g, a, mu) - integral(sum(f, g), a, mu);
    run.check(i, margin, [&] {
      return "f=" + describe(f) + " g=" + describe(g) + " A=" + describe(a) + " mu=" + mu.name();
    });
  }
}

void comonotone(Runner& run, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const auto s = run.sample_seed(i);
    const auto& mu = catalog_capacity(i);
    const auto [f, g] = random_comonotone_pair(derive_seed(s, 0), kNodes);
    const auto a = random_interval_union(derive_seed(s, 1));
    const double gap = integral(sum(f, g), a, mu) - integral(f, a, mu) - integral(g, a, mu);
    run.check(i, -std::abs(gap), [&] {
      return "f=" + describe(f) + " g=" + describe(g) + " A=" + describe(a) + " mu=" + mu.name();
    });
  }
}

void set_monotonicity(Runner& run, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const auto s = run.sample_seed(i);
    const auto& mu = catalog_capacity(i);
    const auto f = nonneg_pwl(derive_seed(s, 0));
    const auto a = random_interval_union(derive_seed(s, 1));
    const auto b = unite(a, random_interval_union(derive_seed(s, 2)));
    run.check(i, integral(f, b, mu) - integral(f, a, mu), [&] {
      return "f=" + describe(f) + " A=" + describe(a) + " B=" + describe(b) + " mu=" + mu.name();
    });
  }
}

void signed_decomposition(Runner& run, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const auto s = run.sample_seed(i);
    const auto& mu = catalog_capacity(i);
    const auto f = signed_pwl(derive_seed(s, 0));
    const auto a = random_interval_union(derive_seed(s, 1));
    const double gap = integral(f, a, mu) - choquet_signed_decomposition(f, a, mu).value;
    run.check(i, -std::abs(gap), [&] {
      return "f=" + describe(f) + " A=" + describe(a) + " mu=" + mu.name();
    });
  }
}

// ---------------------------------------------------------------------------
// Cross-checks against independent evaluations

void oracle_equivalence(Runner& run, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const auto s = run.sample_seed(i);
    const auto& mu = catalog_capacity(i);
    Rng rng(derive_seed(s, 0));
    const auto f = random_step(derive_seed(s, 1),
                               static_cast<std::size_t>(rng.uniform_int(1, 64)));
    const double gap = choquet_integral(f, IntervalUnion::full(), mu).value -
                       discrete_choquet_sorted(f, mu);
    run.check(i, -std::abs(gap), [&] { return "f=" + describe(f) + " mu=" + mu.name(); });
  }
}

void oracle_riemann(Runner& run, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const auto s = run.sample_seed(i);
    const auto& mu = catalog_capacity(i);
    const auto f = signed_pwl(derive_seed(s, 0));
    const double gap = integral(f, IntervalUnion::full(), mu) -
                       oracle_beta_riemann(f, IntervalUnion::full(), mu, std::size_t{1} << 20);
    run.check(i, -std::abs(gap), [&] { return "f=" + describe(f) + " mu=" + mu.name(); });
  }
}

void lebesgue_reduction(Runner& run, std::size_t n) {
  const auto mu = Capacity::distorted(DistortionFunction::identity());
  for (std::size_t i = 0; i < n; ++i) {
    const auto s = run.sample_seed(i);
    const auto f = signed_pwl(derive_seed(s, 0));
    const auto a = random_interval_union(derive_seed(s, 1));
    const double gap = integral(f, a, mu) - lebesgue_integral(f, a);
    run.check(i, -std::abs(gap), [&] { return "f=" + describe(f) + " A=" + describe(a); });
  }
}

void fast_path(Runner& run, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const auto s = run.sample_seed(i);
    const auto& mu = catalog_capacity(i);
    const bool up = i % 2 == 0;
    const auto f = random_pwl(derive_seed(s, 0),
                              FunctionClass::of(up ? Kind::kNondecreasing : Kind::kNonincreasing),
                              kNodes);
    const double x = Rng(derive_seed(s, 1)).uniform(0.05, 1.0);
    const double slow = volterra_at(f, x, mu);
    const double fast = choquet_monotone(
        f, x, *mu.distortion(),
        up ? Monotonicity::kNondecreasing : Monotonicity::kNonincreasing).value;
    run.check(i, -std::abs(slow - fast), [&] {
      return "f=" + describe(f) + " x=" + fmt9(x) + " mu=" + mu.name();
    });
  }
}

// ---------------------------------------------------------------------------
// Capacity laws

void capacity_laws_for(Runner& run, std::size_t n, bool convex) {
  const Capacity square = convex_square();
  for (std::size_t i = 0; i < n; ++i) {
    const Capacity& mu = convex ? square : catalog_capacity(i);
    const auto law = check_capacity_laws(mu, run.sample_seed(i), 1);
    run.check(i, law.worst_submodularity_margin, [&] {
      for (const auto& w : law.witnesses) {
        if (w.law == "submodularity") {
          return w.law + " A=" + describe(w.a) + " B=" + describe(w.b) + " mu=" + mu.name();
        }
      }
      return "submodularity mu=" + mu.name();
    });
    for (const auto& w : law.witnesses) {
      if (w.law == "submodularity") continue;
      run.check(i, w.margin, [&] {
        return w.law + " A=" + describe(w.a) + " B=" + describe(w.b) + " mu=" + mu.name();
      });
    }
  }
}

// ---------------------------------------------------------------------------
// L_p spaces

void holder(Runner& run, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const auto s = run.sample_seed(i);
    const auto& mu = catalog_capacity(i);
    const LpConfig cfg(kExponents[i % 3]);
    const auto f = signed_pwl(derive_seed(s, 0));
    const auto g = signed_pwl(derive_seed(s, 1));
    run.check(i, holder_margin(f, g, cfg, mu), [&] {
      return "p=" + fmt9(cfg.p) + " f=" + describe(f) + " g=" + describe(g) + " mu=" + mu.name();
    });
  }
}

void minkowski(Runner& run, std::size_t n) {
  constexpr double ps[] = {1.0, 1.5, 2.0, 3.0};
  for (std::size_t i = 0; i < n; ++i) {
    const auto s = run.sample_seed(i);
    const auto& mu = catalog_capacity(i);
    const LpConfig cfg(ps[i % 4]);
    const auto f = signed_pwl(derive_seed(s, 0));
    const auto g = signed_pwl(derive_seed(s, 1));
    const double margin = lp_norm(f, cfg, mu) + lp_norm(g, cfg, mu) - lp_norm(sum(f, g), cfg, mu);
    run.check(i, margin, [&] {
      return "p=" + fmt9(cfg.p) + " f=" + describe(f) + " g=" + describe(g) + " mu=" + mu.name();
    });
  }
}

void embedding(Runner& run, std::size_t n) {
  constexpr double ps[] = {1.0, 1.5, 2.0, 3.0};
  for (std::size_t i = 0; i < n; ++i) {
    const auto s = run.sample_seed(i);
    const auto& mu = catalog_capacity(i);
    const LpConfig cfg(ps[i % 4]);
    const auto f = signed_pwl(derive_seed(s, 0));
    const double margin = lp_norm(f, cfg, mu) * conjugate_power(mu.total(), cfg.q) -
                          lp_norm(f, LpConfig(1.0), mu);
    run.check(i, margin, [&] {
      return "p=" + fmt9(cfg.p) + " f=" + describe(f) + " mu=" + mu.name();
    });
  }
}

// ---------------------------------------------------------------------------
// The operator V

constexpr int kPairsPerFunction = 50;

// Unit-ball samples f >= 0 with (x, y) pairs; `bound` gives the allowed
// |V f(x) - V f(y)| and `cap` the allowed |V f(x)|.
template <class Bound, class Cap>
void modulus(Runner& run, std::size_t n, Bound bound, Cap cap) {
  for (std::size_t i = 0; i < n; ++i) {
    const auto s = run.sample_seed(i);
    const auto& mu = catalog_capacity(i);
    const LpConfig cfg(kExponents[i % 3]);
    const auto f = random_pwl(derive_seed(s, 0), FunctionClass::unit_ball(cfg.p, mu), kNodes);
    const double norm = lp_norm(f, cfg, mu);
    Rng rng(derive_seed(s, 1));
    for (int k = 0; k < kPairsPerFunction; ++k) {
      double x = rng.uniform(), y = rng.uniform();
      if (x > y) std::swap(x, y);
      const double vx = volterra_at(f, x, mu), vy = volterra_at(f, y, mu);
      auto witness = [&] {
        return "p=" + fmt9(cfg.p) + " x=" + fmt9(x) + " y=" + fmt9(y) + " f=" + describe(f) +
               " mu=" + mu.name();
      };
      run.check(i, bound(mu, cfg, norm, x, y) - std::abs(vy - vx), witness);
      const double c = cap(mu, cfg);
      if (std::isfinite(c)) run.check(i, c - std::abs(vy), witness);
    }
  }
}

void thm_4_1(Runner& run, std::size_t n) {
  modulus(
      run, n,
      [](const Capacity& mu, const LpConfig& cfg, double norm, double x, double y) {
        return norm * conjugate_power(mu.measure(IntervalUnion::segment(x, y)), cfg.q);
      },
      [](const Capacity&, const LpConfig&) { return std::numeric_limits<double>::infinity(); });
}

void cor_4_2(Runner& run, std::size_t n) {
  modulus(
      run, n,
      [](const Capacity& mu, const LpConfig& cfg, double, double x, double y) {
        return conjugate_power(mu.distortion()->value(y - x), cfg.q);
      },
      [](const Capacity& mu, const LpConfig& cfg) {
        return conjugate_power(mu.distortion()->value(1.0), cfg.q);
      });
}

enum class NormKind { kL1, kUniform, kLp };

void thm_5_1(Runner& run, std::size_t n, NormKind kind) {
  for (std::size_t i = 0; i < n; ++i) {
    const auto& mu = catalog_capacity(i);
    const auto [f, g] = lipschitz_pair(run.sample_seed(i), i);
    const LpConfig cfg(kind == NormKind::kLp ? kExponents[i % 3] : 1.0);
    const auto vf = apply_volterra(f, mu, kImageGrid);
    const auto vg = apply_volterra(g, mu, kImageGrid);
    double lhs = 0.0, rhs = 0.0;
    if (kind == NormKind::kUniform) {
      lhs = uniform_norm(abs_diff(vf, vg));
      rhs = mu.total() * uniform_norm(abs_diff(f, g));
    } else {
      lhs = lp_norm(abs_diff(vf, vg), cfg, mu);
      rhs = mu.total() * lp_norm(abs_diff(f, g), cfg, mu);
    }
    run.check(i, rhs - lhs, [&] {
      return "p=" + fmt9(cfg.p) + " f=" + describe(f) + " g=" + describe(g) + " mu=" + mu.name();
    });
  }
}

void remark_5_3(Runner& run, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const auto& mu = catalog_capacity(i);
    const LpConfig cfg(i % 2 ? 2.0 : 1.0);
    const auto [f, g] = lipschitz_pair(run.sample_seed(i), i);
    const double ratio = lipschitz_ratio(f, g, mu, cfg, kImageGrid);
    run.check(i, mu.total() - ratio, [&] {
      return "p=" + fmt9(cfg.p) + " f=" + describe(f) + " g=" + describe(g) + " mu=" + mu.name();
    });
  }
}

void pointwise_lipschitz(Runner& run, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const auto s = run.sample_seed(i);
    const auto& mu = catalog_capacity(i);
    const auto f = signed_pwl(derive_seed(s, 0));
    const auto g = signed_pwl(derive_seed(s, 1));
    const auto d = abs_diff(f, g);
    Rng rng(derive_seed(s, 2));
    for (int k = 0; k < 5; ++k) {
      const double t = rng.uniform();
      const double margin =
          volterra_at(d, t, mu) - std::abs(volterra_at(f, t, mu) - volterra_at(g, t, mu));
      run.check(i, margin, [&] {
        return "t=" + fmt9(t) + " f=" + describe(f) + " g=" + describe(g) + " mu=" + mu.name();
      });
    }
  }
}

void monotone_output(Runner& run, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const auto& mu = catalog_capacity(i);
    const auto f = nonneg_pwl(run.sample_seed(i));
    const auto vf = apply_volterra(f, mu, 129);
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < vf.size(); ++k) {
      worst = std::min(worst, vf.values()[k] - vf.values()[k - 1]);
    }
    run.check(i, worst, [&] { return "f=" + describe(f) + " mu=" + mu.name(); });
  }
}

void v_homogeneity(Runner& run, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const auto s = run.sample_seed(i);
    const auto& mu = catalog_capacity(i);
    const auto f = signed_pwl(derive_seed(s, 0));
    const double c = kScales[i % 4];
    const auto af = scale(f, c);
    Rng rng(derive_seed(s, 1));
    for (int k = 0; k < 5; ++k) {
      const double x = rng.uniform();
      const double gap = volterra_at(af, x, mu) - c * volterra_at(f, x, mu);
      run.check(i, -std::abs(gap) / std::max(1.0, c), [&] {
        return "a=" + fmt9(c) + " x=" + fmt9(x) + " f=" + describe(f) + " mu=" + mu.name();
      });
    }
  }
}

void thm_6_2(Runner& run, std::size_t n) {
  const auto mu = Capacity::distorted(DistortionFunction::exp_saturation());
  const auto rec = iterate_volterra(PiecewiseLinearFunction::constant(1.0),
                                    static_cast<int>(n), mu, kDefaultGrid);
  for (std::size_t k = 1; k <= n; ++k) {
    const auto& it = rec.iterates[k];
    double worst = 0.0;
    for (std::size_t j = 0; j < it.size(); ++j) {
      worst = std::max(worst, std::abs(it.values()[j] -
                                        orbit_closed_form(static_cast<int>(k), it.nodes()[j])));
    }
    run.check(k - 1, rec.error_budget[k] - worst, [&] {
      return "n=" + std::to_string(k) + " deviation=" + fmt9(worst) +
             " budget=" + fmt9(rec.error_budget[k]);
    });
  }
}

// Unit-L1 spikes f_w(t) = h (1 - t/w)^+ at the origin: the V-image rises by
// about ||f_w||_1 over [0, w], so the modulus at scale w does not shrink.
void remark_4_4(SuiteReport& report, std::size_t n) {
  const auto mu = Capacity::distorted(DistortionFunction::exp_saturation());
  report.columns = {"width", "l1_norm", "modulus"};
  const LpConfig l1(1.0);
  for (std::size_t k = 1; k <= n; ++k) {
    const double w = std::ldexp(1.0, -static_cast<int>(k));
    const auto shape = PiecewiseLinearFunction({0.0, w, 1.0}, {1.0, 0.0, 0.0});
    const auto f = scale(shape, 1.0 / lp_norm(shape, l1, mu));
    report.rows.push_back({w, lp_norm(f, l1, mu), volterra_at(f, w, mu)});
  }
}

struct SuiteDef {
  double tolerance;
  bool expects_violations;
  void (*run)(Runner&, std::size_t);
};

const std::map<std::string, SuiteDef, std::less<>>& registry() {
  static const std::map<std::string, SuiteDef, std::less<>> suites = {
      {"homogeneity", {1e-9, false, homogeneity}},
      {"translation", {1e-8, false, translation}},
      {"monotonicity", {1e-9, false, monotonicity}},
      {"subadditivity", {1e-8, false, subadditivity}},
      {"comonotone", {1e-7, false, comonotone}},
      {"set-monotonicity", {1e-9, false, set_monotonicity}},
      {"eq3-decomposition", {1e-9, false, signed_decomposition}},
      {"oracle-equivalence", {1e-10, false, oracle_equivalence}},
      {"oracle-riemann", {1e-5, false, oracle_riemann}},
      {"lebesgue-reduction", {1e-10, false, lebesgue_reduction}},
      {"fast-path", {1e-7, false, fast_path}},
      {"capacity-laws", {kLawTolerance, false,
                         [](Runner& r, std::size_t n) { capacity_laws_for(r, n, false); }}},
      {"capacity-laws[gamma=t^2]", {kLawTolerance, true,
                                    [](Runner& r, std::size_t n) { capacity_laws_for(r, n, true); }}},
      {"holder", {1e-8, false, holder}},
      {"minkowski", {1e-8, false, minkowski}},
      {"embedding", {1e-8, false, embedding}},
      {"thm-4.1", {1e-7, false, thm_4_1}},
      {"cor-4.2", {1e-7, false, cor_4_2}},
      {"thm-5.1-i", {1e-7, false, [](Runner& r, std::size_t n) { thm_5_1(r, n, NormKind::kL1); }}},
      {"thm-5.1-ii", {1e-7, false,
                      [](Runner& r, std::size_t n) { thm_5_1(r, n, NormKind::kUniform); }}},
      {"thm-5.1-iii", {1e-7, false,
                       [](Runner& r, std::size_t n) { thm_5_1(r, n, NormKind::kLp); }}},
      {"remark-5.3", {1e-6, false, remark_5_3}},
      {"pointwise-lipschitz", {1e-8, false, pointwise_lipschitz}},
      {"monotone-output", {1e-9, false, monotone_output}},
      {"v-homogeneity", {1e-9, false, v_homogeneity}},
      {"thm-6.2", {0.0, false, thm_6_2}},
  };
  return suites;
}

std::string canonical(std::string_view name) {
  if (name == "capacity-laws[γ=t²]") return "capacity-laws[gamma=t^2]";
  return std::string(name);
}

}  // namespace

std::vector<std::string> suite_names() {
  std::vector<std::string> names;
  for (const auto& [name, def] : registry()) names.push_back(name);
  names.push_back("remark-4.4");
  return names;
}

SuiteReport run_suite(std::string_view name, std::uint64_t seed, std::size_t n_samples) {
  if (n_samples == 0) throw UsageError("run_suite needs n_samples >= 1");
  const auto start = std::chrono::steady_clock::now();
  SuiteReport report;
  report.suite = std::string(name);
  report.seed = seed;
  report.samples = n_samples;

  const std::string key = canonical(name);
  if (key == "remark-4.4") {
    report.demonstration = true;
    remark_4_4(report, std::min<std::size_t>(n_samples, 40));
  } else {
    const auto it = registry().find(key);
    if (it == registry().end()) {
      throw UsageError("unknown suite '" + std::string(name) + "'");
    }
    report.tolerance = it->second.tolerance;
    report.expects_violations = it->second.expects_violations;
    report.worst_margin = std::numeric_limits<double>::infinity();
    Runner runner(report, seed);
    it->second.run(runner, n_samples);
    if (!std::isfinite(report.worst_margin)) report.worst_margin = 0.0;
  }
  report.runtime_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::string report_json(const SuiteReport& r, bool include_runtime) {
  nlohmann::ordered_json j;
  j["suite"] = r.suite;
  j["seed"] = r.seed;
  j["samples"] = r.samples;
  auto violations = nlohmann::ordered_json::array();
  for (const auto& v : r.violations) {
    violations.push_back({{"sample", v.sample},
                          {"sample_seed", v.sample_seed},
                          {"witness", v.witness},
                          {"margin", round9(v.margin)}});
  }
  j["violations"] = std::move(violations);
  j["worst_margin"] = round9(r.worst_margin);
  j["runtime_ms"] = include_runtime ? round9(r.runtime_ms) : 0.0;
  j["tolerance"] = r.tolerance;
  j["expects_violations"] = r.expects_violations;
  j["passed"] = r.passed();
  if (r.demonstration) {
    j["demonstration"] = true;
    j["columns"] = r.columns;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : r.rows) {
      auto out = nlohmann::ordered_json::array();
      for (double v : row) out.push_back(round9(v));
      rows.push_back(std::move(out));
    }
    j["rows"] = std::move(rows);
  }
  return j.dump(2);
}

// ---------------------------------------------------------------------------
// span residuals

std::vector<SpanRow> span_residual(const std::vector<SpanTarget>& targets, int n_max,
                                   const Capacity& mu, std::size_t grid_size,
                                   SpanOperator op, const QuadratureConfig& cfg) {
  if (n_max < 1) throw UsageError("span_residual needs n_max >= 1");
  if (grid_size < 2) throw UsageError("span_residual needs grid_size >= 2");

  std::vector<PiecewiseLinearFunction> orbit;
  if (op == SpanOperator::kV) {
    orbit = iterate_volterra(PiecewiseLinearFunction::constant(1.0), n_max, mu, grid_size, cfg)
                .iterates;
  } else {
    std::vector<double> grid(grid_size);
    for (std::size_t i = 0; i < grid_size; ++i) {
      grid[i] = static_cast<double>(i) / static_cast<double>(grid_size - 1);
    }
    orbit.emplace_back(grid, std::vector<double>(grid_size, 1.0));
    for (int k = 1; k <= n_max; ++k) {
      orbit.push_back(identity_plus_v(orbit.back(), mu, grid_size, cfg));
    }
  }

  const auto grid = orbit.front().nodes();
  std::vector<SpanRow> rows;
  for (const auto& target : targets) {
    std::vector<double> r(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) r[i] = target.fn(grid[i]);
    std::vector<std::vector<double>> basis;
    double best = std::numeric_limits<double>::infinity();
    for (int n = 0; n <= n_max; ++n) {
      std::vector<double> q(orbit[n].values().begin(), orbit[n].values().end());
      double original = 0.0;
      for (double v : q) original += v * v;
      original = std::sqrt(original);
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& b : basis) {
          double dot = 0.0;
          for (std::size_t i = 0; i < q.size(); ++i) dot += b[i] * q[i];
          for (std::size_t i = 0; i < q.size(); ++i) q[i] -= dot * b[i];
        }
      }
      double len = 0.0;
      for (double v : q) len += v * v;
      len = std::sqrt(len);
      if (len > 1e-13 * original && len > 0.0) {
        for (double& v : q) v /= len;
        double dot = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i) dot += q[i] * r[i];
        for (std::size_t i = 0; i < q.size(); ++i) r[i] -= dot * q[i];
        basis.push_back(std::move(q));
      }
      double sup = 0.0, ss = 0.0;
      for (double v : r) {
        sup = std::max(sup, std::abs(v));
        ss += v * v;
      }
      best = std::min(best, sup);
      rows.push_back({n, target.name, best, std::sqrt(ss / static_cast<double>(r.size()))});
    }
  }
  return rows;
}

}  // namespace vchoq
