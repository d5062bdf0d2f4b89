#include <doctest.h>

#include <cmath>

#include "vchoq/errors.hpp"
#include "vchoq/functions.hpp"
#include "vchoq/generators.hpp"
#include "vchoq/random.hpp"
#include "vchoq/spaces.hpp"

using namespace vchoq;

namespace {

const StepFunction thirds_312({0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0}, {3.0, 1.0, 2.0});

PiecewiseLinearFunction signed_sample(std::uint64_t seed) {
  return random_pwl(seed, FunctionClass::of(FunctionClass::Kind::kSignedPwl), 9);
}

}  // namespace

TEST_CASE("evaluation") {
  CHECK(PiecewiseLinearFunction({0.0, 1.0}, {0.0, 1.0})(0.5) == 0.5);
  CHECK(PiecewiseLinearFunction({0.0, 1.0}, {1.0, 1.0})(0.3) == 1.0);
  CHECK(thirds_312(0.5) == 1.0);
  CHECK(thirds_312(0.0) == 3.0);
  CHECK(thirds_312(1.0 / 3.0) == 1.0);  // right-open cells
  CHECK(thirds_312(1.0) == 2.0);
  CHECK_THROWS_AS(PiecewiseLinearFunction::ramp()(1.5), DomainError);
  CHECK_THROWS_AS(thirds_312(-0.1), DomainError);
  CHECK_THROWS_AS(evaluate(Function(thirds_312), 2.0), DomainError);
}

TEST_CASE("representation invariants are enforced") {
  CHECK_THROWS(PiecewiseLinearFunction({0.0, 0.5}, {1.0, 2.0}));
  CHECK_THROWS(PiecewiseLinearFunction({0.0, 0.5, 0.5, 1.0}, {1.0, 2.0, 3.0, 4.0}));
  CHECK_THROWS(PiecewiseLinearFunction({0.0, 1.0}, {1.0}));
  CHECK_THROWS(PiecewiseLinearFunction({0.0, 1.0}, {NAN, 1.0}));
  CHECK_THROWS(StepFunction({0.0, 1.0}, {1.0, 2.0}));
  const PiecewiseLinearFunction f({0.0, 0.4, 1.0}, {0.0, -2.0, 1.0});
  CHECK(f.min_value() == -2.0);
  CHECK(f.max_value() == 1.0);
}

TEST_CASE("superlevel examples") {
  const auto ramp_half = superlevel(PiecewiseLinearFunction::ramp(), 0.5);
  CHECK(ramp_half == IntervalUnion::segment(0.5, 1.0));
  CHECK(ramp_half.length() == 0.5);
  CHECK(superlevel(PiecewiseLinearFunction::constant(1.0), 2.0).empty());
  const auto s = superlevel(thirds_312, 1.5);
  CHECK(s == IntervalUnion({{0.0, 1.0 / 3.0}, {2.0 / 3.0, 1.0}}));
  CHECK(s.length() == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(superlevel(thirds_312, 1.0) == IntervalUnion::full());
}

TEST_CASE("pointwise map examples") {
  const Function f = signed_sample(5);
  const auto zero = pointwise_map(f, nullptr, PointwiseOp::scale(0.0));
  CHECK(max_value(zero) == 0.0);
  CHECK(min_value(zero) == 0.0);
  const auto self = pointwise_map(f, &f, PointwiseOp::abs_diff());
  CHECK(max_value(self) == 0.0);
  const Function z = PiecewiseLinearFunction::constant(0.0);
  const auto one = pointwise_map(z, nullptr, PointwiseOp::shift(1.0));
  CHECK(min_value(one) == 1.0);
  CHECK(max_value(one) == 1.0);

  const Function step = thirds_312;
  CHECK_THROWS_AS(pointwise_map(f, &step, PointwiseOp::sum()), UsageError);
  CHECK_THROWS_AS(pointwise_map(f, nullptr, PointwiseOp::power(2.0)), DomainError);
  const auto cube = pointwise_map(step, nullptr, PointwiseOp::power(3.0));
  CHECK(evaluate(cube, 0.1) == doctest::Approx(27.0));
}

TEST_CASE("power refinement bounds the interpolation error") {
  const auto f = PiecewiseLinearFunction::ramp();
  const auto sq = power(f, 2.0);
  CHECK(sq.size() == 1 + kPowerRefinement);
  double worst = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double t = i / 1000.0;
    worst = std::max(worst, std::abs(sq(t) - t * t));
  }
  // h^2 / 8 * max|(t^2)''| with h = 1/8.
  CHECK(worst <= 1.0 / (8.0 * 64.0) * 2.0 + 1e-15);
}

TEST_CASE("product and compose are exact") {
  const auto f = signed_sample(21), g = signed_sample(22);
  const auto fg = product(f, g);
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const double t = rng.uniform();
    CHECK(fg(t) == doctest::Approx(f(t) * g(t)).epsilon(1e-12));
  }
  const auto [a, b] = random_comonotone_pair(9, 8);
  for (int i = 0; i < 300; ++i) {
    const double s = rng.uniform(), t = rng.uniform();
    CHECK((a(s) - a(t)) * (b(s) - b(t)) >= -1e-14);
  }
}

TEST_CASE("abs-diff is exact at random points") {
  for (std::uint64_t k = 0; k < 10; ++k) {
    const auto f = signed_sample(derive_seed(30, 2 * k));
    const auto g = signed_sample(derive_seed(30, 2 * k + 1));
    const auto d = abs_diff(f, g);
    Rng rng(derive_seed(31, k));
    for (int i = 0; i < 1000; ++i) {
      const double t = rng.uniform();
      REQUIRE(std::abs(d(t) - std::abs(f(t) - g(t))) <= 1e-12);
    }
  }
}

TEST_CASE("superlevel sets are nested and their length is piecewise linear") {
  for (std::uint64_t k = 0; k < 100; ++k) {
    const auto f = signed_sample(derive_seed(40, k));
    Rng rng(derive_seed(41, k));
    double b1 = rng.uniform(-1.2, 1.2), b2 = rng.uniform(-1.2, 1.2);
    if (b1 > b2) std::swap(b1, b2);
    CHECK(superlevel(f, b2).subset_of(superlevel(f, b1)));
    CHECK(superlevel(f, f.min_value()) == IntervalUnion::full());
    CHECK(superlevel(f, f.max_value() + 1e-9).empty());

    // Between consecutive node values the length is affine in beta.
    std::vector<double> levels(f.values().begin(), f.values().end());
    std::sort(levels.begin(), levels.end());
    for (std::size_t j = 0; j + 1 < levels.size(); ++j) {
      const double lo = levels[j], hi = levels[j + 1];
      if (hi - lo < 1e-6) continue;
      const double l0 = superlevel(f, lo + 0.1 * (hi - lo)).length();
      const double l1 = superlevel(f, lo + 0.5 * (hi - lo)).length();
      const double l2 = superlevel(f, lo + 0.9 * (hi - lo)).length();
      CHECK(l0 >= l1 - 1e-15);
      CHECK(l1 >= l2 - 1e-15);
      CHECK(l1 == doctest::Approx(0.5 * (l0 + l2)).epsilon(1e-9));
    }
  }
}

TEST_CASE("generators") {
  using Kind = FunctionClass::Kind;
  const auto up = random_function(1, FunctionClass::of(Kind::kNondecreasing), 8);
  CHECK(std::get<PiecewiseLinearFunction>(up).nondecreasing());
  const auto down = random_function(1, FunctionClass::of(Kind::kNonincreasing), 8);
  CHECK(std::get<PiecewiseLinearFunction>(down).nonincreasing());
  CHECK(min_value(random_function(2, FunctionClass::of(Kind::kNonnegPwl), 8)) >= 0.0);
  CHECK(std::holds_alternative<StepFunction>(random_function(2, FunctionClass::of(Kind::kStep), 8)));

  const auto mu = Capacity::distorted(DistortionFunction::exp_saturation());
  const auto ball = FunctionClass::unit_ball(2.0, mu);
  const auto f = random_function(1, ball, 8);
  CHECK(lp_norm(f, LpConfig(2.0), mu) <= 1.0 + 1e-9);
  CHECK(min_value(f) >= 0.0);

  const auto again = random_function(1, ball, 8);
  CHECK(std::get<PiecewiseLinearFunction>(f).values().size() ==
        std::get<PiecewiseLinearFunction>(again).values().size());
  for (std::size_t i = 0; i < std::get<PiecewiseLinearFunction>(f).size(); ++i) {
    CHECK(std::get<PiecewiseLinearFunction>(f).values()[i] ==
          std::get<PiecewiseLinearFunction>(again).values()[i]);
    CHECK(std::get<PiecewiseLinearFunction>(f).nodes()[i] ==
          std::get<PiecewiseLinearFunction>(again).nodes()[i]);
  }

  CHECK_THROWS_AS(FunctionClass::parse("wiggly"), UsageError);
  CHECK(FunctionClass::parse("signed-pwl").kind == Kind::kSignedPwl);
  CHECK_THROWS_AS(random_function(1, FunctionClass::of(Kind::kNonnegPwl), 1), UsageError);
}
