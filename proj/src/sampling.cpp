#include "tubemass/sampling.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <exception>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>

namespace tubemass::sampling {

double Box::volume() const {
  double v = 1.0;
  for (const auto& a : axes) v *= a.width();
  return v;
}

double Box::diameter() const {
  double s = 0.0;
  for (const auto& a : axes) s += a.width() * a.width();
  return std::sqrt(s);
}

int Box::widest_axis() const {
  int best = 0;
  for (int d = 1; d < dim(); ++d)
    if (axes[d].width() > axes[best].width()) best = d;
  return best;
}

std::pair<Box, Box> Box::split(int axis) const {
  Box lo = *this;
  Box hi = *this;
  const double mid = 0.5 * (axes[axis].lo + axes[axis].hi);
  lo.axes[axis].hi = mid;
  hi.axes[axis].lo = mid;
  return {std::move(lo), std::move(hi)};
}

RVector Box::center() const {
  RVector c(dim());
  for (int d = 0; d < dim(); ++d) c[d] = 0.5 * (axes[d].lo + axes[d].hi);
  return c;
}

Interval Box::sq_norm_range() const {
  Interval s{0.0, 0.0};
  for (const auto& a : axes) s = s + pow(a, 2);
  return s;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t batch) {
  auto splitmix = [](std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  };
  return splitmix(splitmix(splitmix(seed) ^ stream) ^ batch);
}

double Rng::normal() {
  // Box-Muller on (0,1] x [0,1); one variate per call keeps the stream simple.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::vector<Box> refine(const Box& root, const Classifier& classify, const RefineOptions& opts) {
  std::vector<Box> done;
  std::deque<std::pair<Box, int>> queue;
  queue.emplace_back(root, 0);
  while (!queue.empty()) {
    auto [box, depth] = std::move(queue.front());
    queue.pop_front();
    const Decision d = classify(box);
    if (d.verdict == Verdict::drop) continue;
    const bool budget_left = done.size() + queue.size() + 2 <= opts.max_cells;
    if (d.verdict == Verdict::split && depth < opts.max_depth && budget_left) {
      const int axis = d.axis >= 0 ? d.axis : box.widest_axis();
      auto [lo, hi] = box.split(axis);
      queue.emplace_back(std::move(lo), depth + 1);
      queue.emplace_back(std::move(hi), depth + 1);
    } else {
      done.push_back(std::move(box));
    }
  }
  return done;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionError("slope inputs differ in length");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int k = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0)) continue;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++k;
  }
  if (k < 2) throw NumericalError("log-log slope needs two positive points");
  const double den = k * sxx - sx * sx;
  if (den == 0.0) throw NumericalError("log-log slope with coincident abscissae");
  return (k * sxy - sx * sy) / den;
}

unsigned worker_count() {
  static const unsigned count = [] {
    if (const char* env = std::getenv("TUBEMASS_THREADS")) {
      char* end = nullptr;
      const long v = std::strtol(env, &end, 10);
      if (end != env && v >= 1) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
  }();
  return count;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_count(), count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
}

std::vector<Estimate> integrate_many(std::span<const Box> cells, int outputs, const MultiIntegrand& integrand,
                                     const Options& opts) {
  if (opts.batches < 1) throw DomainError("integrate needs at least one batch");
  if (outputs < 1) throw DomainError("integrate needs at least one output");
  const auto k_out = static_cast<std::size_t>(outputs);
  std::vector<Estimate> est(k_out);
  if (cells.empty() || opts.samples == 0) return est;
  const int dim = cells.front().dim();
  std::vector<double> cumulative(cells.size());
  double total = 0.0;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    total += cells[c].volume();
    cumulative[c] = total;
  }
  if (!(total > 0.0)) return est;

  const std::size_t nb = static_cast<std::size_t>(opts.batches);
  auto batch_count = [&](std::size_t b) { return opts.samples / nb + (b < opts.samples % nb ? 1 : 0); };
  std::vector<double> batch_value(nb * k_out, 0.0);
  constexpr std::size_t kBlock = 256;

  parallel_for(nb, [&](std::size_t b) {
    const std::size_t count = batch_count(b);
    if (count == 0) return;
    Rng rng(mix_seed(opts.seed, opts.stream, b));
    const double offset = rng.uniform();
    kernels::PointBlock block(dim, kBlock);
    std::vector<double> values(kBlock * k_out);
    std::vector<double> sum(k_out, 0.0);
    std::size_t cell = 0;
    for (std::size_t start = 0; start < count; start += kBlock) {
      const std::size_t len = std::min(kBlock, count - start);
      block.count = len;
      for (std::size_t i = 0; i < len; ++i) {
        const double pos = (static_cast<double>(start + i) + offset) / static_cast<double>(count) * total;
        while (cell + 1 < cells.size() && cumulative[cell] <= pos) ++cell;
        const Box& bx = cells[cell];
        for (int d = 0; d < dim; ++d) block.row(d)[i] = rng.uniform(bx.axes[d].lo, bx.axes[d].hi);
      }
      integrand(block, std::span<double>(values.data(), len * k_out));
      for (std::size_t k = 0; k < k_out; ++k)
        for (std::size_t i = 0; i < len; ++i) sum[k] += values[k * len + i];
    }
    for (std::size_t k = 0; k < k_out; ++k) batch_value[b * k_out + k] = total * sum[k] / static_cast<double>(count);
  });

  std::size_t used = 0;
  while (used < nb && batch_count(used) > 0) ++used;
  for (std::size_t k = 0; k < k_out; ++k) {
    double mean = 0.0;
    for (std::size_t b = 0; b < used; ++b) mean += batch_value[b * k_out + k];
    mean /= static_cast<double>(used);
    double var = 0.0;
    for (std::size_t b = 0; b < used; ++b) {
      const double d = batch_value[b * k_out + k] - mean;
      var += d * d;
    }
    est[k].value = mean;
    est[k].se = used > 1 ? std::sqrt(var / static_cast<double>(used - 1) / static_cast<double>(used)) : 0.0;
    est[k].samples = opts.samples;
  }
  return est;
}

Estimate integrate(std::span<const Box> cells, const BlockIntegrand& integrand, const Options& opts) {
  return integrate_many(cells, 1, integrand, opts).front();
}

}  // namespace tubemass::sampling
