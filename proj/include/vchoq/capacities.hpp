#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "vchoq/intervals.hpp"

namespace vchoq {

/// Distortion gamma : [0,1] -> R with gamma(0) = 0, nondecreasing.
///
/// The catalog members are concave and continuous. Custom distortions carry
/// their own value and (optional) derivative.
class DistortionFunction {
 public:
  enum class Kind {
    kIdentity,
    kPower,          // t^p, 0 < p < 1
    kMoebius,        // 2t / (1 + t)
    kExpSaturation,  // 1 - e^{-t}
    kLog,            // ln(1 + t)
    kSine,           // sin(t / 2)
    kCustom,
  };

  static DistortionFunction identity();
  static DistortionFunction power(double p);
  static DistortionFunction moebius();
  static DistortionFunction exp_saturation();
  static DistortionFunction log1p();
  static DistortionFunction sine();
  // `derivative` may be empty; `concave` is what the caller claims.
  static DistortionFunction custom(std::string name,
                                   std::function<double(double)> value,
                                   std::function<double(double)> derivative,
                                   bool concave);

  double operator()(double t) const { return value(t); }
  double value(double t) const;
  double derivative(double t) const;

  Kind kind() const { return kind_; }
  double parameter() const { return param_; }
  const std::string& name() const { return name_; }
  bool differentiable() const;
  bool concave() const { return concave_; }
  bool is_identity() const { return kind_ == Kind::kIdentity; }

  // Exponent m of the substitution u = w tau^m that removes the singularity
  // of gamma' at 0 (1 when gamma'(0) is finite).
  double grading_exponent() const;

 private:
  DistortionFunction(Kind kind, double param, std::string name, bool concave)
      : kind_(kind), param_(param), name_(std::move(name)), concave_(concave) {}

  struct CustomFns {
    std::function<double(double)> value;
    std::function<double(double)> derivative;
  };

  Kind kind_;
  double param_ = 0.0;
  std::string name_;
  bool concave_ = true;
  std::shared_ptr<const CustomFns> custom_;
};

/// identity, power(1/2), moebius, exp-saturation, log, sine.
std::vector<DistortionFunction> distortion_catalog();

/// Monotone set function on interval unions of [0,1].
class Capacity {
 public:
  using SetFunction = std::function<double(const IntervalUnion&)>;

  static Capacity distorted(DistortionFunction gamma);
  static Capacity general(std::string name, SetFunction fn, bool submodular,
                          bool continuous);

  /// gamma(length(u)) for distorted Lebesgue capacities. Throws
  /// ContractViolation if a general capacity returns a negative value.
  double measure(const IntervalUnion& u) const;
  double total() const { return measure(IntervalUnion::full()); }

  // Null unless this is a distorted Lebesgue capacity.
  const DistortionFunction* distortion() const {
    return distortion_ ? &*distortion_ : nullptr;
  }
  bool claims_submodular() const { return submodular_; }
  bool claims_continuous() const { return continuous_; }
  const std::string& name() const { return name_; }

 private:
  Capacity() = default;

  std::shared_ptr<const DistortionFunction> distortion_;
  SetFunction fn_;
  std::string name_;
  bool submodular_ = false;
  bool continuous_ = false;
};

double measure(const Capacity& mu, const IntervalUnion& u);

struct LawWitness {
  std::string law;  // monotonicity | submodularity | subadditivity |
                    // continuity-below | continuity-above
  std::size_t sample = 0;
  IntervalUnion a;
  IntervalUnion b;
  double margin = 0.0;
};

struct LawReport {
  std::size_t samples = 0;
  std::size_t monotonicity_violations = 0;
  std::size_t submodularity_violations = 0;
  std::size_t subadditivity_violations = 0;
  std::size_t continuity_violations = 0;
  double worst_submodularity_margin = 0.0;
  // max |mu(A) + mu(B) - mu(A u B) - mu(A n B)|; zero for additive mu.
  double max_abs_submodularity_margin = 0.0;
  std::vector<LawWitness> witnesses;

  std::size_t violations() const {
    return monotonicity_violations + submodularity_violations +
           subadditivity_violations + continuity_violations;
  }
};

inline constexpr double kLawTolerance = 1e-12;
inline constexpr double kContinuityTolerance = 1e-9;
inline constexpr int kContinuitySteps = 30;

/// Random union with 1..max_parts parts (possibly touching, then merged).
IntervalUnion random_interval_union(std::uint64_t seed, int max_parts = 4);

/// Samples pairs of interval unions and checks monotonicity, submodularity
/// and finite subadditivity; checks continuity from below/above along
/// geometric chains of kContinuitySteps steps.
LawReport check_capacity_laws(const Capacity& mu, std::uint64_t seed,
                              std::size_t n_samples);

}  // namespace vchoq
