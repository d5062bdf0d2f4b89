#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "vchoq/capacities.hpp"
#include "vchoq/errors.hpp"

using namespace vchoq;

TEST_CASE("measure examples") {
  const auto exp_mu = Capacity::distorted(DistortionFunction::exp_saturation());
  CHECK(exp_mu.measure(IntervalUnion::segment(0.0, 1.0)) ==
        doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-15));
  CHECK(exp_mu.measure(IntervalUnion::segment(0.0, 0.3)) ==
        doctest::Approx(1.0 - std::exp(-0.3)).epsilon(1e-15));
  for (const auto& g : distortion_catalog()) {
    CHECK(Capacity::distorted(g).measure(IntervalUnion()) == 0.0);
  }
  const auto id = Capacity::distorted(DistortionFunction::identity());
  CHECK(id.measure(IntervalUnion({{0.0, 0.25}, {0.5, 0.75}})) == 0.5);
}

TEST_CASE("general capacities") {
  const auto bad = Capacity::general(
      "negative", [](const IntervalUnion&) { return -1.0; }, false, false);
  CHECK_THROWS_AS(bad.measure(IntervalUnion::full()), ContractViolation);
  CHECK(bad.measure(IntervalUnion()) == 0.0);

  const auto parts = Capacity::general(
      "part-count", [](const IntervalUnion& u) { return 0.1 * u.size() + u.length(); }, false,
      false);
  CHECK(parts.measure(IntervalUnion({{0.0, 0.1}, {0.5, 0.6}})) == doctest::Approx(0.4));
}

TEST_CASE("catalog shape") {
  const auto cat = distortion_catalog();
  CHECK(cat.size() == 6);
  for (const auto& g : cat) {
    CAPTURE(g.name());
    CHECK(g.value(0.0) == 0.0);
    CHECK(g.concave());
    double prev = 0.0;
    for (int i = 1; i <= 1000; ++i) {
      const double t = i / 1000.0;
      const double fd = (g.value(t + 1e-6) - g.value(t - 1e-6)) / 2e-6;
      if (i < 1000) CHECK(std::abs(g.derivative(t) - fd) <= 1e-6 * std::max(1.0, std::abs(fd)));
      CHECK(g.value(t) >= prev);
      prev = g.value(t);
    }
  }
  CHECK_THROWS_AS(DistortionFunction::power(1.5), UsageError);
  const auto no_deriv = DistortionFunction::custom("x", [](double t) { return t; }, nullptr, true);
  CHECK_FALSE(no_deriv.differentiable());
  CHECK_THROWS_AS(no_deriv.derivative(0.5), UsageError);
}

TEST_CASE("capacity law sampler") {
  const auto sqrt_mu = Capacity::distorted(DistortionFunction::power(0.5));
  CHECK(check_capacity_laws(sqrt_mu, 7, 1000).violations() == 0);

  for (const auto& g : distortion_catalog()) {
    CAPTURE(g.name());
    const auto r = check_capacity_laws(Capacity::distorted(g), 3, 500);
    CHECK(r.violations() == 0);
    CHECK(r.worst_submodularity_margin >= -kLawTolerance);
  }

  const auto id = check_capacity_laws(Capacity::distorted(DistortionFunction::identity()), 5, 500);
  CHECK(id.violations() == 0);
  CHECK(id.max_abs_submodularity_margin <= 1e-12);

  const auto square = Capacity::distorted(DistortionFunction::custom(
      "t^2", [](double t) { return t * t; }, [](double t) { return 2 * t; }, false));
  CHECK_FALSE(square.claims_submodular());
  const auto r = check_capacity_laws(square, 7, 10000);
  CHECK(r.submodularity_violations >= 1);
  CHECK(r.monotonicity_violations == 0);
  CHECK(r.continuity_violations == 0);
  bool has_witness = false;
  for (const auto& w : r.witnesses) has_witness = has_witness || w.law == "submodularity";
  CHECK(has_witness);
  CHECK_THROWS_AS(check_capacity_laws(square, 7, 0), UsageError);
}
