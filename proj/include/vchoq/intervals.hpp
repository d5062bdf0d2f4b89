#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace vchoq {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Finite union of disjoint closed subintervals of [0,1].
///
/// Parts are kept sorted; parts that overlap, touch, or sit closer than
/// kMergeGap are merged on construction. Degenerate parts [a,a] are kept,
/// so the empty union and a union of points are distinct values.
class IntervalUnion {
 public:
  static constexpr double kMergeGap = 1e-12;

  IntervalUnion() = default;

  /// Throws DomainError unless 0 <= lo <= hi <= 1 for every part.
  explicit IntervalUnion(std::vector<Interval> parts);

  static IntervalUnion full() { return IntervalUnion({{0.0, 1.0}}); }
  static IntervalUnion segment(double lo, double hi) {
    return IntervalUnion({{lo, hi}});
  }

  std::span<const Interval> parts() const { return parts_; }
  bool empty() const { return parts_.empty(); }
  std::size_t size() const { return parts_.size(); }
  double length() const;
  bool contains(double t) const;
  // Every point of this union is a point of `other`.
  bool subset_of(const IntervalUnion& other) const;

  std::string to_string() const;

  friend bool operator==(const IntervalUnion&, const IntervalUnion&) = default;

 private:
  struct Normalized {};
  IntervalUnion(Normalized, std::vector<Interval> parts)
      : parts_(std::move(parts)) {}

  friend IntervalUnion intersect(const IntervalUnion&, const IntervalUnion&);

  std::vector<Interval> parts_;
};

double length(const IntervalUnion& u);
IntervalUnion intersect(const IntervalUnion& u, const IntervalUnion& v);
IntervalUnion unite(const IntervalUnion& u, const IntervalUnion& v);

std::ostream& operator<<(std::ostream& os, const IntervalUnion& u);

}  // namespace vchoq
