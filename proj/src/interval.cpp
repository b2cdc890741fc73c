#include "tubemass/interval.hpp"

namespace tubemass {

Interval operator+(const Interval& a, const Interval& b) { return {a.lo + b.lo, a.hi + b.hi}; }

Interval operator-(const Interval& a, const Interval& b) { return {a.lo - b.hi, a.hi - b.lo}; }

Interval operator*(const Interval& a, const Interval& b) {
  const double p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
  return {std::min({p1, p2, p3, p4}), std::max({p1, p2, p3, p4})};
}

Interval operator*(double s, const Interval& a) {
  return s >= 0 ? Interval{s * a.lo, s * a.hi} : Interval{s * a.hi, s * a.lo};
}

Interval pow(const Interval& a, int k) {
  if (k == 0) return Interval::point(1.0);
  if (k % 2 == 1) return {std::pow(a.lo, k), std::pow(a.hi, k)};
  if (a.lo >= 0) return {std::pow(a.lo, k), std::pow(a.hi, k)};
  if (a.hi <= 0) return {std::pow(a.hi, k), std::pow(a.lo, k)};
  return {0.0, std::pow(a.mag(), k)};
}

CInterval operator+(const CInterval& a, const CInterval& b) { return {a.re + b.re, a.im + b.im}; }

CInterval operator*(const CInterval& a, const CInterval& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

CInterval pow(const CInterval& a, int k) {
  CInterval r{Interval::point(1.0), Interval::point(0.0)};
  for (int i = 0; i < k; ++i) r = r * a;
  return r;
}

double mag(const CInterval& a) { return std::hypot(a.re.mag(), a.im.mag()); }

}  // namespace tubemass
