#pragma once

// Tube-mass profiles sigma(t), their normalised ratios and the monotonicity
// verdicts built on them.

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tubemass/currents.hpp"
#include "tubemass/manifold.hpp"
#include "tubemass/region.hpp"

namespace tubemass::mass {

struct SamplingSpec {
  std::uint64_t seed = 0;
  std::size_t samples = 1'000'000;
  int batches = 32;
  /// Coarea epsilon as a fraction of the tube radius t.
  double epsilon_factor = 0.05;
};

struct ProfileMeta {
  int n = 0;
  int m = 0;
  double r = 0.0;
  double exponent = 0.0;  // ratio = sigma / t^exponent
  std::string current;
  std::string manifold;
  std::uint64_t seed = 0;
};

struct MassProfile {
  std::vector<double> t;
  std::vector<double> sigma;
  std::vector<double> se;
  std::vector<double> ratio;
  std::vector<double> ratio_se;
  ProfileMeta meta;
  /// Trace mass over the whole domain ball, when computed.
  std::optional<sampling::Estimate> total_mass;
  std::vector<std::string> warnings;

  std::size_t size() const { return t.size(); }
};

/// `points` geometric values from t0/span to t0.
std::vector<double> geometric_grid(double t0, int points = 12, double span = 100.0);

/// sigma(t) = trace mass of the current in {distance to M < t} within B(0, r).
/// Grid values above t0 (when given) are dropped with a warning.
MassProfile sigma_profile(const currents::CurrentSpec& current, std::shared_ptr<const manifold::DefiningSystem> ds,
                          double r, std::span<const double> t_grid, const SamplingSpec& spec,
                          std::optional<double> t0 = {});

struct MonotoneReport {
  double c_measured = 1.0;
  double c_se = 0.0;
  double t = 0.0;  // worst pair t < s
  double s = 0.0;
  bool all_zero = false;
};

/// C = max over t < s of ratio(t) / ratio(s).
MonotoneReport almost_monotone_report(const MassProfile& profile);

struct NondecreasingCheck {
  bool ok = true;
  /// Largest drop ratio(t) - ratio(s), t < s, in units of the combined SE.
  double worst_drop_in_se = 0.0;
  double worst_drop = 0.0;
};

/// Ratios are nondecreasing unless some drop exceeds k_se combined SE.
NondecreasingCheck check_nondecreasing(const MassProfile& profile, double k_se = 3.0);

/// sigma(t) = integral over {sqrt(u) < t} of theta ^ (dd u/2)^{m-1} ^ beta^{n-m},
/// density taken w.r.t. Lebesgue measure; ratio sigma / t^{m-1}. All grid
/// values share one set of sample points.
MassProfile sigma_u_profile(const currents::SmoothPotential& phi, const manifold::TubeWeight& tw,
                            const manifold::DefiningSystem& ds, std::span<const double> t_grid,
                            const SamplingSpec& spec, bool weight_validated);

/// sigma(t) over {dist(z, K) < t} for convex K in R^n; ratio sigma / t^{n-1}.
MassProfile convex_profile(const currents::CurrentSpec& current, const currents::ConvexBody& body,
                           std::span<const double> t_grid, const SamplingSpec& spec);

/// Closed form sigma(t) for V = {z_1 = 0} and M = R^2 inside B(0, r).
double plane_profile_exact(double t, double r);

}  // namespace tubemass::mass
