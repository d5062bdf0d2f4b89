#include "vchoq/intervals.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "vchoq/errors.hpp"

namespace vchoq {

namespace {

std::vector<Interval> normalize(std::vector<Interval> parts) {
  std::sort(parts.begin(), parts.end(),
            [](const Interval& a, const Interval& b) {
              return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
            });
  std::vector<Interval> out;
  out.reserve(parts.size());
  for (const auto& p : parts) {
    if (!out.empty() && p.lo - out.back().hi < IntervalUnion::kMergeGap) {
      out.back().hi = std::max(out.back().hi, p.hi);
    } else {
      out.push_back(p);
    }
  }
  return out;
}

}  // namespace

IntervalUnion::IntervalUnion(std::vector<Interval> parts) {
  for (const auto& p : parts) {
    if (!(p.lo >= 0.0 && p.lo <= p.hi && p.hi <= 1.0)) {
      std::ostringstream msg;
      msg << "interval [" << p.lo << ", " << p.hi
          << "] is not a subinterval of [0,1]";
      throw DomainError(msg.str());
    }
  }
  parts_ = normalize(std::move(parts));
}

double IntervalUnion::length() const {
  double total = 0.0;
  for (const auto& p : parts_) total += p.hi - p.lo;
  return total;
}

bool IntervalUnion::contains(double t) const {
  auto it = std::upper_bound(
      parts_.begin(), parts_.end(), t,
      [](double value, const Interval& p) { return value < p.lo; });
  if (it == parts_.begin()) return false;
  return t <= std::prev(it)->hi;
}

bool IntervalUnion::subset_of(const IntervalUnion& other) const {
  for (const auto& p : parts_) {
    auto it = std::upper_bound(
        other.parts_.begin(), other.parts_.end(), p.lo,
        [](double value, const Interval& q) { return value < q.lo; });
    if (it == other.parts_.begin()) return false;
    if (p.hi > std::prev(it)->hi) return false;
  }
  return true;
}

std::string IntervalUnion::to_string() const {
  std::ostringstream os;
  os << *this;
  return os.str();
}

double length(const IntervalUnion& u) { return u.length(); }

IntervalUnion intersect(const IntervalUnion& u, const IntervalUnion& v) {
  std::vector<Interval> out;
  auto a = u.parts();
  auto b = v.parts();
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double lo = std::max(a[i].lo, b[j].lo);
    const double hi = std::min(a[i].hi, b[j].hi);
    if (lo <= hi) out.push_back({lo, hi});
    if (a[i].hi < b[j].hi) {
      ++i;
    } else {
      ++j;
    }
  }
  return IntervalUnion(IntervalUnion::Normalized{}, normalize(std::move(out)));
}

IntervalUnion unite(const IntervalUnion& u, const IntervalUnion& v) {
  std::vector<Interval> all(u.parts().begin(), u.parts().end());
  all.insert(all.end(), v.parts().begin(), v.parts().end());
  return IntervalUnion(std::move(all));
}

std::ostream& operator<<(std::ostream& os, const IntervalUnion& u) {
  os << '{';
  bool first = true;
  for (const auto& p : u.parts()) {
    if (!first) os << ',';
    first = false;
    os << '[' << p.lo << ',' << p.hi << ']';
  }
  return os << '}';
}

}  // namespace vchoq
