#pragma once

// Radial mass functions of discrete measures, Lelong-type monotonicity,
// Riesz and Newton kernels, the Jensen exponential bound, the singular kernel
// integrated over M and clipped exponential integrals of psh functions.

#include <cstdint>
#include <span>
#include <vector>

#include "tubemass/currents.hpp"
#include "tubemass/jets.hpp"
#include "tubemass/manifold.hpp"

namespace tubemass::potentials {

using manifold::WeightedPointCloud;

/// Cloud repacked once into coordinate rows for repeated kernel sums.
class PackedCloud {
 public:
  explicit PackedCloud(const WeightedPointCloud& mu);
  /// Empty measure on C^n.
  explicit PackedCloud(int n);
  int n() const { return n_; }
  std::size_t size() const { return weights_.size(); }
  double total_mass() const { return total_; }
  const kernels::PointBlock& block() const { return block_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  int n_ = 0;
  kernels::PointBlock block_;
  std::vector<double> weights_;
  double total_ = 0.0;
};

/// Measure of open balls B(z, s) as an exact step function of s.
class RadialMass {
 public:
  RadialMass(const PackedCloud& mu, const Point& center, std::span<const double> s_grid);

  int n() const { return n_; }
  const Point& center() const { return center_; }
  /// Sorted atom distances and the weights in that order.
  const std::vector<double>& radii() const { return radii_; }
  const std::vector<double>& sorted_weights() const { return weights_; }
  const std::vector<double>& s() const { return s_; }
  const std::vector<double>& cumulative() const { return cumulative_; }
  const std::vector<double>& normalized() const { return normalized_; }

  /// Mass of |zeta - z| < s.
  double mu(double s) const;
  /// Mass of |zeta - z| <= s.
  double mu_closed(double s) const;
  /// mu(s) / s^(2n-2), s > 0.
  double nu(double s) const;

 private:
  double mu_at(double s) const;

  int n_;
  Point center_;
  std::vector<double> radii_, weights_, prefix_;
  std::vector<double> s_, cumulative_, normalized_;
};

RadialMass radial_mass(const PackedCloud& mu, const Point& z, std::span<const double> s_grid);
RadialMass radial_mass(const WeightedPointCloud& mu, const Point& z, std::span<const double> s_grid);

struct MonotoneVerdict {
  bool monotone = true;
  /// Largest relative drop nu(s_i) - nu(s_{i+1}) over nu(s_i).
  double max_violation = 0.0;
};

MonotoneVerdict nu_monotone(const RadialMass& rm, double tolerance = 1e-9);

/// Kernel distances below this are clipped and counted.
inline constexpr double kKernelFloor = 1e-8;

struct KernelSum {
  double value = 0.0;
  std::size_t clipped = 0;
};

/// sum_j w_j |z - zeta_j|^(-exponent).
KernelSum riesz_sum(const PackedCloud& mu, const Point& z, double exponent);
KernelSum riesz_sum(const WeightedPointCloud& mu, const Point& z, double exponent);

/// U(z) = sum_j w_j |z - zeta_j|^(2-2n).
KernelSum newton_potential(const WeightedPointCloud& mu, const Point& z);

struct ExpBound {
  double potential = 0.0;  // U(z) of the normalized measure
  double lhs = 0.0;        // exp(alpha U / (2n-2))
  double rhs = 0.0;        // sum w |z - zeta|^(2-2n-alpha)
  double implied_c = 0.0;
  double scale = 1.0;      // factor applied to reach total mass 1
  std::size_t clipped = 0;
  bool excluded = false;   // atom at z
};

/// The measure is rescaled to total mass exactly 1 first.
ExpBound exp_bound_check(const PackedCloud& mu, const Point& z, double alpha);
ExpBound exp_bound_check(const WeightedPointCloud& mu, const Point& z, double alpha);

struct IbpCheck {
  double direct = 0.0;    // integral over (0,1) of s^-(2n-2+alpha) d mu_z
  double by_parts = 0.0;  // (2n-2) int s^(-1-alpha) nu ds + int s^-alpha d nu
  double rel_err = 0.0;
  bool atom_at_center = false;
};

/// Integration by parts of the Riesz integral against the step function nu.
IbpCheck ibp_identity(const RadialMass& rm, double alpha);

struct KernelValue {
  double d = 0.0;  // distance from zeta to M
  double value = 0.0;
  std::size_t near_points = 0;  // cloud points within 10 d of zeta
  bool sparse = false;          // fewer than 100 near points
  std::size_t clipped = 0;
};

/// I = sum w |z - zeta|^-(2n-2+alpha) over a surface cloud on K.
KernelValue kernel_on_M(const WeightedPointCloud& cloud, const manifold::DefiningSystem& ds, const Point& zeta,
                        double alpha);

struct KernelSweep {
  std::vector<KernelValue> rows;
  double slope = 0.0;
  double expected_slope = 0.0;  // -(m - 2 + alpha)
};

/// zeta = chart(foot) + delta * (first unit normal), one graded surface cloud
/// per delta. `order` Gauss nodes per panel.
KernelSweep kernel_sweep(const manifold::DefiningSystem& ds, const sampling::Box& k_box, const RVector& foot,
                         double alpha, std::span<const double> deltas, int order = 8);

struct ClipLevel {
  double level = 0.0;
  double estimate = 0.0;
  double increment = 0.0;  // relative change from the previous level
};

struct ExpIntegral {
  std::vector<ClipLevel> levels;
  bool converged = false;  // last relative increment below 1%
};

/// Estimates of the integral of exp(-alpha max(phi, log L)) dM over the cloud
/// for each clip level L (decreasing).
ExpIntegral exp_integral(const jets::ScalarField& phi, const WeightedPointCloud& cloud, double alpha,
                         std::span<const double> clip_levels);

// --- measure builders

/// Lebesgue measure of B(0, radius): midpoint grid of the cube [-r, r]^(2n)
/// restricted to the ball.
WeightedPointCloud ball_grid_cloud(int n, double radius, int per_axis);

/// Trace measure 2^n tr(H_phi) dV on the ball grid.
WeightedPointCloud trace_measure_cloud(const jets::ScalarField& phi, double radius, int per_axis);

/// Area measure of a parametrized variety with a rectangle or disc domain per
/// factor, on a midpoint grid.
WeightedPointCloud variety_grid_cloud(const currents::ParametrizedVariety& v, int per_axis);

/// Points of B(0, radius) in C^n from a Halton sequence.
std::vector<Point> halton_ball(int n, double radius, std::size_t count);

}  // namespace tubemass::potentials
