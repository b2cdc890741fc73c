#pragma once

// Real submanifolds M = {rho_1 = ... = rho_m = 0} of C^n: the generating
// test, Euclidean distance, sampled surface measure and the tube weights
// w, h, v, u_tilde, u.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tubemass/forms.hpp"
#include "tubemass/jets.hpp"
#include "tubemass/kernels.hpp"
#include "tubemass/quadrature.hpp"
#include "tubemass/sampling.hpp"

namespace tubemass::manifold {

using sampling::Box;

/// Parametrisation of a patch of M by a box in R^k, k = 2n - m.
class Chart {
 public:
  using MapFn = std::function<RVector(const RVector&)>;
  using JacobianFn = std::function<RMatrix(const RVector&)>;

  /// coords[d] is real coordinate d of C^n (x's then y's) as a polynomial in
  /// the k parameters.
  static Chart polynomial(int n, std::vector<RealPoly> coords, Box params);
  /// `image` must enclose the image of the whole parameter box.
  static Chart programmatic(int n, Box params, MapFn map, JacobianFn jacobian, Box image);

  int ambient_dim() const { return n_; }
  int param_dim() const { return params_.dim(); }
  const Box& params() const { return params_; }
  /// Axis-aligned enclosure of the image in real coordinates.
  const Box& image_bounds() const { return image_; }

  RVector map_real(const RVector& p) const { return map_(p); }
  Point map(const RVector& p) const { return from_real(map_(p)); }
  /// 2n x k real Jacobian.
  RMatrix jacobian(const RVector& p) const { return jac_(p); }
  /// sqrt(det(J^T J)), the k-dimensional area factor.
  double gram_factor(const RVector& p) const;

  /// Same map on params intersected with `sub`.
  Chart restricted(const Box& sub) const;

 private:
  Chart() = default;
  int n_ = 0;
  Box params_;
  Box image_;
  MapFn map_;
  JacobianFn jac_;
  std::vector<RealPoly> polys_;
};

struct WeightedPointCloud {
  std::vector<Point> points;
  std::vector<double> weights;

  void add(Point p, double w);
  std::size_t size() const { return points.size(); }
  double total_mass() const;
};

struct RankResult {
  int rank = 0;
  /// m-th singular value of the m x n matrix of d rho_j (0 when m > rank).
  double min_singular_value = 0.0;
};

struct GeneratingReport {
  bool generating = false;
  /// Minimum over samples of the squared m-th singular value.
  double delta_min = 0.0;
  int samples = 0;
};

struct DistanceResult {
  double distance = 0.0;
  Point foot;
  bool reduced_accuracy = false;
  int iterations = 0;
};

class DefiningSystem {
 public:
  DefiningSystem(int n, std::vector<jets::ScalarField> rho, double domain_radius, std::optional<Chart> chart = {},
                 std::string name = {});

  int n() const { return n_; }
  int m() const { return static_cast<int>(rho_.size()); }
  const std::string& name() const { return name_; }
  double domain_radius() const { return domain_radius_; }
  const std::vector<jets::ScalarField>& rho() const { return rho_; }
  bool has_chart() const { return chart_.has_value(); }
  /// Throws DomainError when no chart was supplied.
  const Chart& chart() const;
  /// Every rho_j is a polynomial of degree <= 1.
  bool is_linear() const { return linear_; }

  RVector residual(const Point& z) const;
  /// m x 2n matrix of real gradients.
  RMatrix real_jacobian(const Point& z) const;
  /// m x n matrix whose rows are the complex gradients d rho_j.
  CMatrix complex_jacobian(const Point& z) const;

  DistanceResult project(const Point& z) const;
  double distance(const Point& z) const { return project(z).distance; }

 private:
  DistanceResult project_linear(const Point& z) const;
  DistanceResult project_chart(const Point& z) const;

  int n_;
  std::vector<jets::ScalarField> rho_;
  double domain_radius_;
  std::optional<Chart> chart_;
  std::string name_;
  bool linear_ = false;
  // Linear case: rho(xi) = G xi + c.
  RMatrix g_;
  RVector c_;
  RMatrix gram_inv_;
  // Seed grid over the chart parameters and the matching points of M.
  std::vector<RVector> seed_params_;
  kernels::PointBlock seed_points_;
};

/// Distance tolerance of the Gauss-Newton projection (step size).
inline constexpr double kProjectionTolerance = 1e-10;
inline constexpr int kProjectionMaxIterations = 50;

/// Requires |rho(p)| < 1e-8.
RankResult generating_rank(const DefiningSystem& ds, const Point& p);
GeneratingReport assert_generating(const DefiningSystem& ds, int samples, std::uint64_t seed);

/// N pseudorandom chart points in `sub` with weights gram * vol(sub) / N.
WeightedPointCloud sample_surface(const DefiningSystem& ds, const Box& sub, std::size_t count, std::uint64_t seed);

/// Deterministic surface measure on the chart: tensor product of one rule per
/// parameter axis, weighted by the Gram factor.
WeightedPointCloud tensor_surface(const DefiningSystem& ds, std::span<const quadrature::Rule> rules);

struct TubeWeight {
  jets::ScalarField w;
  jets::ScalarField h;
  jets::ScalarField v;
  jets::ScalarField u_tilde;
  jets::ScalarField cutoff;
  jets::ScalarField u;
  double a = 0.0;
  double inner_radius = 0.0;
  double smoothing = 0.0;
};

/// `smoothing` <= 0 selects 1e-6 times the largest u_tilde sampled in the
/// inner ball.
TubeWeight build_tube_weight(const DefiningSystem& ds, double a, double inner_radius, double smoothing = 0.0);

struct PshReport {
  /// min over samples of the best c with (dd^c u_tilde)^{m-1} ^ beta^{n-m} >= c beta^{n-1}.
  double delta_prime = 0.0;
  /// Same functional for dd^c v = dd^c sqrt(u_tilde).
  double min_sqrt_coeff = 0.0;
  int samples = 0;
  bool passed(double tolerance = 1e-8) const { return delta_prime > 0.0 && min_sqrt_coeff >= -tolerance; }
};

/// Samples points p + s*nu with p on M inside the inner ball, nu a unit
/// normal and 0 < s <= t_max.
PshReport verify_psh_bound(const TubeWeight& tw, const DefiningSystem& ds, int samples, double t_max,
                           std::uint64_t seed);

inline constexpr double kSweepA[] = {1.0, 4.0, 16.0, 64.0, 256.0};

struct SweepResult {
  std::optional<double> a;  // smallest passing A
  PshReport report;
};

SweepResult sweep_a(const DefiningSystem& ds, double inner_radius, int samples, double t_max, std::uint64_t seed);

/// Largest candidate t for which verify_psh_bound passes with the given A.
std::optional<double> select_t0(const DefiningSystem& ds, double a, double inner_radius,
                                std::span<const double> candidates, int samples, std::uint64_t seed);

/// Bundled submanifolds used by tests and scenarios.
namespace catalog {
/// R^n = {y = 0}.
DefiningSystem real_space(int n, double radius = 1.0);
/// {y_1 = y_2 = 0} in C^n (n >= 2).
DefiningSystem real_plane_pair(int n, double radius = 1.0);
/// C x {0} in C^2; not generating.
DefiningSystem complex_line(double radius = 1.0);
/// Graph y = g(x) in C^2 with g(x) = eps (x1 x2, (x1^2 - x2^2)/2).
DefiningSystem small_graph(double eps = 0.1, double radius = 1.0);
/// {y_1 = x_2^2, y_2 = 0} in C^2.
DefiningSystem curved(double radius = 1.0);
/// Hypersurface y_1 = x_1^2 + |z_2|^2 in C^2.
DefiningSystem siegel(double radius = 1.0);
/// C x R x {0} in C^3; not generating, m = n = 3.
DefiningSystem c_r_zero(double radius = 1.0);
/// Unit sphere |z| = 1 in C^2.
DefiningSystem sphere(double radius = 2.0);
}  // namespace catalog

}  // namespace tubemass::manifold
