#pragma once

// Zeros of holomorphic polynomials on M, separated packings of them, and the
// packing, Hausdorff and ball-area estimates built on those packings.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tubemass/currents.hpp"
#include "tubemass/manifold.hpp"

namespace tubemass::zeros {

using sampling::Box;

struct ZeroSet {
  std::vector<Point> points;
  std::size_t candidates = 0;
  /// Candidate cells where Newton failed even after one subdivision.
  std::size_t skipped = 0;
};

/// Newton refinement of f restricted to the chart, started from grid cells
/// (grid points per parameter axis over K) where |f| is small relative to the
/// local variation. Returned points have |f| < 1e-10 and are deduplicated.
ZeroSet zeros_on_M(const HoloPoly& f, const manifold::DefiningSystem& ds, const Box& k_box, int grid);

enum class PackOrder { input, shuffled, chain };

struct PackingResult {
  double epsilon = 0.0;
  std::vector<Point> points;
  std::size_t n = 0;
  bool maximal = false;
};

/// Greedy maximal subset with pairwise distances > 2 epsilon. `chain` visits
/// points along a nearest-neighbour path, `shuffled` in a seeded random order.
PackingResult greedy_pack(std::span<const Point> points, double epsilon, PackOrder order = PackOrder::input,
                          std::uint64_t seed = 0);

/// True if every pair of packing points is more than 2 epsilon apart.
bool is_separated(const PackingResult& pr);

struct PackingBound {
  double c_measured = 0.0;
  /// |V| = 0 with N > 0.
  bool inconsistent = false;
};

/// N * epsilon^(2n-1-m) / |V|.
PackingBound packing_bound(const PackingResult& pr, double mass_v, int n, int m);

/// Volume of the unit ball of R^p.
double unit_ball_volume(int p);

struct HausdorffPoint {
  double epsilon = 0.0;
  std::size_t n = 0;
  double estimate = 0.0;  // c_p * N * epsilon^p
  bool coarse = false;    // N < 5
};

std::vector<HausdorffPoint> hausdorff_estimate(std::span<const Point> zeros, std::span<const double> epsilons, int p,
                                               PackOrder order = PackOrder::chain);

/// Omega: the chart image of K enlarged by 0.2 times the diameter of K.
Box neighbourhood(const manifold::DefiningSystem& ds, const Box& k_box);

struct BallArea {
  double ratio = 0.0;
  double se = 0.0;
  bool inconclusive = false;  // relative SE above 5%
};

/// area(V cap B(z0, eps)) / (pi^{n-1} eps^{2n-2} / (n-1)!).
BallArea ball_area_bound(const HoloPoly& f, const Point& z0, double epsilon, const sampling::Options& opts);

}  // namespace tubemass::zeros
