#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "vchoq/capacities.hpp"
#include "vchoq/choquet.hpp"
#include "vchoq/generators.hpp"
#include "vchoq/random.hpp"
#include "vchoq/spaces.hpp"
#include "vchoq/verify.hpp"

using namespace vchoq;

// Seeded property checks, 500 instances each, cycling through the catalog
// capacities and random unions of up to four intervals.

namespace {

constexpr std::size_t kInstances = 500;
constexpr std::uint64_t kSeed = 20261018;

using Kind = FunctionClass::Kind;

Capacity catalog_capacity(std::size_t i) {
  const auto cat = distortion_catalog();
  return Capacity::distorted(cat[i % cat.size()]);
}

PiecewiseLinearFunction draw(std::uint64_t stream, std::size_t i, Kind kind) {
  Rng rng(derive_seed(stream, i));
  const auto n = static_cast<std::size_t>(rng.uniform_int(2, 12));
  return random_pwl(derive_seed(stream + 1, i), FunctionClass::of(kind), n);
}

double ci(const PiecewiseLinearFunction& f, const IntervalUnion& a, const Capacity& mu) {
  return choquet_integral(f, a, mu).value;
}

}  // namespace

TEST_CASE("positive homogeneity") {
  for (std::size_t i = 0; i < kInstances; ++i) {
    const auto mu = catalog_capacity(i);
    const auto a = random_interval_union(derive_seed(kSeed, i));
    const auto f = draw(kSeed + 10, i, Kind::kSignedPwl);
    const double base = ci(f, a, mu);
    for (double s : {0.0, 0.5, 2.0, 10.0}) {
      REQUIRE(std::abs(ci(scale(f, s), a, mu) - s * base) <= 1e-9 * std::max(1.0, s));
    }
  }
}

TEST_CASE("translation by constants") {
  for (std::size_t i = 0; i < kInstances; ++i) {
    const auto mu = catalog_capacity(i);
    const auto a = random_interval_union(derive_seed(kSeed + 1, i));
    const auto f = draw(kSeed + 20, i, Kind::kSignedPwl);
    const double c = Rng(derive_seed(kSeed + 2, i)).uniform(-2.0, 2.0);
    REQUIRE(std::abs(ci(shift(f, c), a, mu) - ci(f, a, mu) - c * mu.measure(a)) <= 1e-8);
  }
}

TEST_CASE("monotone in the integrand") {
  for (std::size_t i = 0; i < kInstances; ++i) {
    const auto mu = catalog_capacity(i);
    const auto a = random_interval_union(derive_seed(kSeed + 3, i));
    const auto f = draw(kSeed + 30, i, Kind::kSignedPwl);
    const auto g = sum(f, abs(draw(kSeed + 40, i, Kind::kSignedPwl)));
    REQUIRE(ci(f, a, mu) <= ci(g, a, mu) + 1e-9);
  }
}

TEST_CASE("subadditive for concave distortions") {
  for (std::size_t i = 0; i < kInstances; ++i) {
    const auto mu = catalog_capacity(i);
    const auto a = random_interval_union(derive_seed(kSeed + 4, i));
    const auto f = draw(kSeed + 50, i, Kind::kSignedPwl);
    const auto g = draw(kSeed + 60, i, Kind::kSignedPwl);
    REQUIRE(ci(sum(f, g), a, mu) <= ci(f, a, mu) + ci(g, a, mu) + 1e-8);
  }
}

TEST_CASE("comonotone additivity") {
  for (std::size_t i = 0; i < kInstances; ++i) {
    const auto mu = catalog_capacity(i);
    const auto a = random_interval_union(derive_seed(kSeed + 5, i));
    const auto [f, g] = random_comonotone_pair(derive_seed(kSeed + 70, i), 8);
    REQUIRE(std::abs(ci(sum(f, g), a, mu) - ci(f, a, mu) - ci(g, a, mu)) <= 1e-7);
  }
}

TEST_CASE("monotone in the domain for nonnegative integrands") {
  for (std::size_t i = 0; i < kInstances; ++i) {
    const auto mu = catalog_capacity(i);
    const auto a = random_interval_union(derive_seed(kSeed + 6, i));
    const auto b = unite(a, random_interval_union(derive_seed(kSeed + 7, i)));
    const auto f = draw(kSeed + 80, i, Kind::kNonnegPwl);
    REQUIRE(ci(f, a, mu) <= ci(f, b, mu) + 1e-9);
  }
}

TEST_CASE("convolution form agrees with the level-set engine") {
  for (std::size_t i = 0; i < kInstances; ++i) {
    const auto cat = distortion_catalog();
    const auto& gamma = cat[i % cat.size()];
    const auto mu = Capacity::distorted(gamma);
    const bool up = i % 2 == 0;
    const auto f = draw(kSeed + 90, i, up ? Kind::kNondecreasing : Kind::kNonincreasing);
    const double x = Rng(derive_seed(kSeed + 8, i)).uniform(0.05, 1.0);
    const double fast =
        choquet_monotone(f, x, gamma, up ? Monotonicity::kNondecreasing : Monotonicity::kNonincreasing)
            .value;
    REQUIRE(std::abs(fast - ci(f, IntervalUnion::segment(0.0, x), mu)) <= 1e-7);
  }
}

TEST_CASE("Minkowski, Hoelder and norm embedding") {
  for (std::size_t i = 0; i < kInstances; ++i) {
    const auto mu = catalog_capacity(i);
    const auto f = draw(kSeed + 100, i, Kind::kSignedPwl);
    const auto g = draw(kSeed + 110, i, Kind::kSignedPwl);
    const double p = std::array{1.0, 1.5, 2.0, 3.0}[i % 4];
    const LpConfig cfg(p);
    const double nf = lp_norm(f, cfg, mu);
    REQUIRE(lp_norm(sum(f, g), cfg, mu) <= nf + lp_norm(g, cfg, mu) + 1e-8);
    if (p > 1.0) REQUIRE(holder_margin(f, g, cfg, mu) >= -1e-8);
    // ||f||_1 <= mu(Omega)^{1 - 1/p} ||f||_p
    REQUIRE(lp_norm(f, LpConfig(1.0), mu) <= std::pow(mu.total(), 1.0 - 1.0 / p) * nf + 1e-8);
    REQUIRE(nf <= std::pow(mu.total(), 1.0 / p) * uniform_norm(f) + 1e-8);
  }
}

TEST_CASE("catalog capacities obey the capacity laws") {
  for (const auto& gamma : distortion_catalog()) {
    const auto r = check_capacity_laws(Capacity::distorted(gamma), kSeed, kInstances);
    CHECK_MESSAGE(r.violations() == 0, gamma.name());
  }
}

TEST_CASE("property suites at 500 samples") {
  for (const char* name : {"homogeneity", "translation", "monotonicity", "subadditivity", "comonotone",
                           "set-monotonicity", "holder", "minkowski", "embedding", "fast-path",
                           "eq3-decomposition", "lebesgue-reduction", "monotone-output",
                           "v-homogeneity", "pointwise-lipschitz"}) {
    const auto r = run_suite(name, 42, kInstances);
    CHECK_MESSAGE(r.violations.empty(), name << " worst margin " << r.worst_margin);
  }
}
