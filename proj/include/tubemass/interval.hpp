#pragma once

#include <algorithm>
#include <cmath>

namespace tubemass {

/// Closed interval [lo, hi] with outward-conservative arithmetic (no directed
/// rounding; enclosures are used only for pruning with a safety margin).
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  static Interval point(double v) { return {v, v}; }
  double width() const { return hi - lo; }
  double mag() const { return std::max(std::abs(lo), std::abs(hi)); }
  bool contains(double v) const { return lo <= v && v <= hi; }
  bool intersects(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, const Interval& b);
Interval operator*(double s, const Interval& a);
/// a^k for k >= 0, tight for even powers.
Interval pow(const Interval& a, int k);

/// Rectangular complex interval.
struct CInterval {
  Interval re;
  Interval im;
};

CInterval operator+(const CInterval& a, const CInterval& b);
CInterval operator*(const CInterval& a, const CInterval& b);
CInterval pow(const CInterval& a, int k);
/// Upper bound of |z| over the rectangle.
double mag(const CInterval& a);

}  // namespace tubemass
