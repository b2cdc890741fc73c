#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "tubemass/interval.hpp"
#include "tubemass/types.hpp"

namespace tubemass {

/// Real polynomial in up to 2*kMaxDim real variables.
class RealPoly {
 public:
  static constexpr int kMaxVars = 2 * kMaxDim;
  struct Term {
    std::array<std::uint8_t, kMaxVars> exponents{};
    double coeff = 0.0;
  };
  struct Jet {
    double value = 0.0;
    RVector grad;
    RMatrix hess;
  };

  RealPoly() = default;
  explicit RealPoly(int nvars);
  RealPoly(int nvars, std::vector<Term> terms);

  static RealPoly constant(int nvars, double c);
  static RealPoly variable(int nvars, int index);

  int nvars() const { return nvars_; }
  const std::vector<Term>& terms() const { return terms_; }
  int degree() const;
  bool is_zero() const { return terms_.empty(); }

  double value(std::span<const double> x) const;
  Jet jet(std::span<const double> x) const;
  Interval enclose(std::span<const Interval> box) const;
  RealPoly derivative(int var) const;

  RealPoly operator+(const RealPoly& o) const;
  RealPoly operator-(const RealPoly& o) const;
  RealPoly operator*(const RealPoly& o) const;
  RealPoly operator*(double s) const;

 private:
  void normalize();
  int nvars_ = 0;
  std::vector<Term> terms_;
};

/// Holomorphic polynomial in up to kMaxDim complex variables.
class HoloPoly {
 public:
  struct Term {
    std::array<std::uint8_t, kMaxDim> exponents{};
    cd coeff{};
  };

  HoloPoly() = default;
  explicit HoloPoly(int nvars);
  HoloPoly(int nvars, std::vector<Term> terms);

  static HoloPoly constant(int nvars, cd c);
  static HoloPoly variable(int nvars, int index);

  int nvars() const { return nvars_; }
  const std::vector<Term>& terms() const { return terms_; }
  int degree() const;
  int max_exponent() const;
  bool is_zero() const { return terms_.empty(); }

  cd value(std::span<const cd> z) const;
  cd value(const CVector& z) const { return value(std::span<const cd>(z.data(), static_cast<std::size_t>(z.size()))); }
  /// Complex gradient (df/dz_j).
  CVector gradient(const CVector& z) const;
  HoloPoly derivative(int var) const;
  CInterval enclose(std::span<const CInterval> box) const;

  /// (Re f, Im f) as real polynomials in (x_1..x_k, y_1..y_k).
  std::pair<RealPoly, RealPoly> real_parts() const;

  HoloPoly operator+(const HoloPoly& o) const;
  HoloPoly operator-(const HoloPoly& o) const { return *this + o * cd(-1.0); }
  HoloPoly operator*(const HoloPoly& o) const;
  HoloPoly operator*(cd s) const;

 private:
  void normalize();
  int nvars_ = 0;
  std::vector<Term> terms_;
};

}  // namespace tubemass
