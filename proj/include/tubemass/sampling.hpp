#pragma once

// Seeded, batch-parallel Monte Carlo over unions of axis-aligned cells.
//
// A root box is refined into cells by a caller-supplied classifier that may
// discard cells on which the integrand provably vanishes. Each batch draws a
// systematic sample over the cumulative cell volume (one random offset per
// batch) with uniform jitter inside the chosen cell. Standard errors come
// from the spread of the batch estimates.

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "tubemass/interval.hpp"
#include "tubemass/kernels.hpp"
#include "tubemass/types.hpp"

namespace tubemass::sampling {

struct Box {
  std::vector<Interval> axes;

  Box() = default;
  explicit Box(std::vector<Interval> a) : axes(std::move(a)) {}

  int dim() const { return static_cast<int>(axes.size()); }
  double volume() const;
  double diameter() const;
  int widest_axis() const;
  std::pair<Box, Box> split(int axis) const;
  RVector center() const;
  /// Squared Euclidean distance from the box to the origin and its maximum.
  Interval sq_norm_range() const;
};

struct Estimate {
  double value = 0.0;
  double se = 0.0;
  std::size_t samples = 0;

  double rel_se() const { return value != 0.0 ? se / std::abs(value) : 0.0; }
};

struct Options {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::size_t samples = 1'000'000;
  int batches = 32;
};

/// Independent 64-bit seed for (seed, stream, batch) via SplitMix64 mixing.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t batch);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  /// Uniform double in [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

enum class Verdict { drop, keep, split };

struct Decision {
  Verdict verdict = Verdict::keep;
  int axis = -1;  // for split; -1 means widest axis
};

using Classifier = std::function<Decision(const Box&)>;

struct RefineOptions {
  std::size_t max_cells = 8192;
  int max_depth = 40;
};

/// Breadth-first refinement. Once the cell budget is exhausted the remaining
/// cells are kept as they are (never dropped without the classifier's say).
std::vector<Box> refine(const Box& root, const Classifier& classify, const RefineOptions& opts = {});

/// Fills `out[i]` with the integrand at block point i.
using BlockIntegrand = std::function<void(const kernels::PointBlock&, std::span<double>)>;

/// Integral of the integrand over the union of cells.
Estimate integrate(std::span<const Box> cells, const BlockIntegrand& integrand, const Options& opts);

/// Fills `out[k * count + i]` with integrand k at block point i.
using MultiIntegrand = std::function<void(const kernels::PointBlock&, std::span<double>)>;

/// Several integrands over the same sample points (common random numbers).
std::vector<Estimate> integrate_many(std::span<const Box> cells, int outputs, const MultiIntegrand& integrand,
                                     const Options& opts);

/// Least-squares slope of log(y) against log(x); nonpositive entries are skipped.
double loglog_slope(std::span<const double> x, std::span<const double> y);

/// Worker count: TUBEMASS_THREADS if set (>= 1), else hardware concurrency.
unsigned worker_count();

/// Runs body(i) for i in [0, count) on up to worker_count() threads. The first
/// exception thrown by any task is rethrown after all workers stop.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace tubemass::sampling
