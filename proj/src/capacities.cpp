#include "vchoq/capacities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "vchoq/errors.hpp"
#include "vchoq/random.hpp"

namespace vchoq {

// ---------------------------------------------------------------------------
// DistortionFunction

DistortionFunction DistortionFunction::identity() {
  return {Kind::kIdentity, 0.0, "identity", true};
}

DistortionFunction DistortionFunction::power(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw UsageError("power distortion needs 0 < p < 1");
  }
  std::ostringstream name;
  name << "power(" << p << ")";
  return {Kind::kPower, p, name.str(), true};
}

DistortionFunction DistortionFunction::moebius() {
  return {Kind::kMoebius, 0.0, "moebius", true};
}

DistortionFunction DistortionFunction::exp_saturation() {
  return {Kind::kExpSaturation, 0.0, "exp-saturation", true};
}

DistortionFunction DistortionFunction::log1p() {
  return {Kind::kLog, 0.0, "log", true};
}

DistortionFunction DistortionFunction::sine() {
  return {Kind::kSine, 0.0, "sine", true};
}

DistortionFunction DistortionFunction::custom(
    std::string name, std::function<double(double)> value,
    std::function<double(double)> derivative, bool concave) {
  if (!value) throw UsageError("custom distortion needs a value function");
  DistortionFunction d(Kind::kCustom, 0.0, std::move(name), concave);
  d.custom_ = std::make_shared<const CustomFns>(
      CustomFns{std::move(value), std::move(derivative)});
  return d;
}

double DistortionFunction::value(double t) const {
  t = std::max(t, 0.0);
  switch (kind_) {
    case Kind::kIdentity:
      return t;
    case Kind::kPower:
      return std::pow(t, param_);
    case Kind::kMoebius:
      return 2.0 * t / (1.0 + t);
    case Kind::kExpSaturation:
      return -std::expm1(-t);
    case Kind::kLog:
      return std::log1p(t);
    case Kind::kSine:
      return std::sin(0.5 * t);
    case Kind::kCustom:
      return custom_->value(t);
  }
  return 0.0;
}

double DistortionFunction::derivative(double t) const {
  switch (kind_) {
    case Kind::kIdentity:
      return 1.0;
    case Kind::kPower:
      return param_ * std::pow(t, param_ - 1.0);
    case Kind::kMoebius:
      return 2.0 / ((1.0 + t) * (1.0 + t));
    case Kind::kExpSaturation:
      return std::exp(-t);
    case Kind::kLog:
      return 1.0 / (1.0 + t);
    case Kind::kSine:
      return 0.5 * std::cos(0.5 * t);
    case Kind::kCustom:
      if (!custom_->derivative) {
        throw UsageError("distortion '" + name_ + "' has no derivative");
      }
      return custom_->derivative(t);
  }
  return 0.0;
}

bool DistortionFunction::differentiable() const {
  return kind_ != Kind::kCustom || static_cast<bool>(custom_->derivative);
}

double DistortionFunction::grading_exponent() const {
  return kind_ == Kind::kPower ? 1.0 / param_ : 1.0;
}

std::vector<DistortionFunction> distortion_catalog() {
  return {DistortionFunction::identity(),       DistortionFunction::power(0.5),
          DistortionFunction::moebius(),        DistortionFunction::exp_saturation(),
          DistortionFunction::log1p(),          DistortionFunction::sine()};
}

// ---------------------------------------------------------------------------
// Capacity

Capacity Capacity::distorted(DistortionFunction gamma) {
  Capacity c;
  c.name_ = gamma.name();
  c.submodular_ = gamma.concave();
  c.continuous_ = true;
  c.distortion_ = std::make_shared<const DistortionFunction>(std::move(gamma));
  return c;
}

Capacity Capacity::general(std::string name, SetFunction fn, bool submodular,
                           bool continuous) {
  if (!fn) throw UsageError("general capacity needs a set function");
  Capacity c;
  c.fn_ = std::move(fn);
  c.name_ = std::move(name);
  c.submodular_ = submodular;
  c.continuous_ = continuous;
  return c;
}

double Capacity::measure(const IntervalUnion& u) const {
  if (u.empty()) return 0.0;
  if (distortion_) return distortion_->value(u.length());
  const double v = fn_(u);
  if (!(v >= 0.0)) {
    std::ostringstream msg;
    msg << "capacity '" << name_ << "' returned " << v << " on " << u;
    throw ContractViolation(msg.str());
  }
  return v;
}

double measure(const Capacity& mu, const IntervalUnion& u) {
  return mu.measure(u);
}

// ---------------------------------------------------------------------------
// law sampler

IntervalUnion random_interval_union(std::uint64_t seed, int max_parts) {
  Rng rng(seed);
  const int parts = rng.uniform_int(1, max_parts);
  std::vector<double> ends(2 * static_cast<std::size_t>(parts));
  for (double& e : ends) e = rng.uniform();
  std::sort(ends.begin(), ends.end());
  std::vector<Interval> out;
  for (int k = 0; k < parts; ++k) out.push_back({ends[2 * k], ends[2 * k + 1]});
  return IntervalUnion(std::move(out));
}

namespace {

// Shrink (sign = -1) or grow (sign = +1) every part of `u` by `delta`,
// clamped to [0,1]; growing may merge parts, shrinking never empties a part
// when delta < half its length.
IntervalUnion offset(const IntervalUnion& u, double delta, int sign) {
  std::vector<Interval> parts;
  for (const auto& p : u.parts()) {
    const double lo = std::clamp(p.lo - sign * delta, 0.0, 1.0);
    const double hi = std::clamp(p.hi + sign * delta, 0.0, 1.0);
    parts.push_back({lo, std::max(lo, hi)});
  }
  return IntervalUnion(std::move(parts));
}

double min_part_length(const IntervalUnion& u) {
  double m = 1.0;
  for (const auto& p : u.parts()) m = std::min(m, p.length());
  return m;
}

}  // namespace

LawReport check_capacity_laws(const Capacity& mu, std::uint64_t seed,
                              std::size_t n_samples) {
  if (n_samples == 0) throw UsageError("check_capacity_laws: n_samples >= 1");
  LawReport report;
  report.samples = n_samples;
  report.worst_submodularity_margin = std::numeric_limits<double>::infinity();

  auto witness = [&](const char* law, std::size_t i, const IntervalUnion& a,
                     const IntervalUnion& b, double margin) {
    report.witnesses.push_back({law, i, a, b, margin});
  };

  for (std::size_t i = 0; i < n_samples; ++i) {
    const auto a = random_interval_union(derive_seed(seed, 2 * i));
    const auto b = random_interval_union(derive_seed(seed, 2 * i + 1));
    const auto both = intersect(a, b);
    const auto either = unite(a, b);
    const double ma = mu.measure(a), mb = mu.measure(b);
    const double mboth = mu.measure(both), meither = mu.measure(either);

    // A n B  <=  A  <=  A u B
    const double mono = std::min(ma - mboth, meither - ma);
    if (mono < -kLawTolerance) {
      ++report.monotonicity_violations;
      witness("monotonicity", i, a, b, mono);
    }

    const double sub = ma + mb - meither - mboth;
    report.worst_submodularity_margin =
        std::min(report.worst_submodularity_margin, sub);
    report.max_abs_submodularity_margin =
        std::max(report.max_abs_submodularity_margin, std::abs(sub));
    if (sub < -kLawTolerance) {
      ++report.submodularity_violations;
      witness("submodularity", i, a, b, sub);
    }

    const double subadd = ma + mb - meither;
    if (subadd < -kLawTolerance) {
      ++report.subadditivity_violations;
      witness("subadditivity", i, a, b, subadd);
    }

    // Continuity surrogates: chains A_k -> A with geometric gaps.
    if (min_part_length(a) > 0.0) {
      const double d0 = 0.25 * min_part_length(a);
      double prev = -std::numeric_limits<double>::infinity();
      double gap = 0.0;
      bool monotone_chain = true;
      for (int k = 1; k <= kContinuitySteps; ++k) {
        const double v = mu.measure(offset(a, d0 * std::ldexp(1.0, -k), -1));
        monotone_chain = monotone_chain && v >= prev - kLawTolerance;
        prev = v;
        gap = std::abs(v - ma);
      }
      if (gap > kContinuityTolerance || !monotone_chain) {
        ++report.continuity_violations;
        witness("continuity-below", i, a, offset(a, d0 * std::ldexp(1.0, -kContinuitySteps), -1),
                -gap);
      }

      prev = std::numeric_limits<double>::infinity();
      monotone_chain = true;
      for (int k = 1; k <= kContinuitySteps; ++k) {
        const double v = mu.measure(offset(a, d0 * std::ldexp(1.0, -k), +1));
        monotone_chain = monotone_chain && v <= prev + kLawTolerance;
        prev = v;
        gap = std::abs(v - ma);
      }
      if (gap > kContinuityTolerance || !monotone_chain) {
        ++report.continuity_violations;
        witness("continuity-above", i, a, offset(a, d0 * std::ldexp(1.0, -kContinuitySteps), +1),
                -gap);
      }
    }
  }
  return report;
}

}  // namespace vchoq
