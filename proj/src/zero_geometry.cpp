#include "tubemass/zero_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <Eigen/SVD>
#include <fmt/format.h>

#include "tubemass/region.hpp"

namespace tubemass::zeros {

namespace {

constexpr double kZeroTol = 1e-10;
constexpr int kNewtonIters = 40;

// g(p) = (Re f, Im f) at chart(p), with its 2 x k real Jacobian.
struct Restricted {
  const HoloPoly& f;
  const manifold::Chart& chart;
  int n;

  Eigen::Vector2d value(const RVector& p, Point* z_out = nullptr) const {
    const Point z = chart.map(p);
    if (z_out) *z_out = z;
    const cd v = f.value(z);
    return {v.real(), v.imag()};
  }

  Eigen::MatrixXd jacobian(const RVector& p) const {
    const Point z = chart.map(p);
    const CVector grad = f.gradient(z);
    const RMatrix jc = chart.jacobian(p);  // rows x_1..x_n, y_1..y_n
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(2, jc.cols());
    for (int j = 0; j < n; ++j) {
      // df = f_j (dx_j + i dy_j)
      for (Eigen::Index c = 0; c < jc.cols(); ++c) {
        const cd d = grad[j] * cd(jc(j, c), jc(n + j, c));
        out(0, c) += d.real();
        out(1, c) += d.imag();
      }
    }
    return out;
  }
};

bool inside(const Box& b, const RVector& p, double slack) {
  for (int d = 0; d < b.dim(); ++d)
    if (p[d] < b.axes[d].lo - slack || p[d] > b.axes[d].hi + slack) return false;
  return true;
}

enum class Outcome { converged, outside, failed };

Outcome newton(const Restricted& g, const Box& k_box, RVector& p, Point& z) {
  const double slack = 1e-12 * (1.0 + k_box.diameter());
  for (int it = 0; it < kNewtonIters; ++it) {
    const Eigen::Vector2d r = g.value(p, &z);
    if (!std::isfinite(r.norm())) return Outcome::failed;
    if (r.norm() < 1e-3 * kZeroTol) break;
    const Eigen::MatrixXd jac = g.jacobian(p);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-12);
    if (svd.rank() == 0) return Outcome::failed;
    const Eigen::VectorXd step = svd.solve(-r);
    p += step;
    if (step.norm() > 10.0 * (1.0 + k_box.diameter())) return Outcome::failed;
  }
  const Eigen::Vector2d r = g.value(p, &z);
  if (!(r.norm() < kZeroTol)) return Outcome::failed;
  return inside(k_box, p, slack) ? Outcome::converged : Outcome::outside;
}

struct CellScan {
  std::vector<Point> zeros;
  std::size_t candidates = 0;
  std::size_t skipped = 0;
};

void try_cell(const Restricted& g, const Box& k_box, const RVector& center, const RVector& half, CellScan& out) {
  ++out.candidates;
  RVector p = center;
  Point z;
  Outcome o = newton(g, k_box, p, z);
  if (o == Outcome::converged) {
    out.zeros.push_back(z);
    return;
  }
  if (o == Outcome::outside) return;
  // one subdivision: restart from the 2^k sub-cell centres
  const int k = static_cast<int>(center.size());
  bool any = false;
  for (int mask = 0; mask < (1 << k); ++mask) {
    RVector q = center;
    for (int d = 0; d < k; ++d) q[d] += ((mask >> d) & 1 ? 0.5 : -0.5) * half[d];
    o = newton(g, k_box, q, z);
    if (o == Outcome::converged) {
      out.zeros.push_back(z);
      any = true;
    } else if (o == Outcome::outside) {
      any = true;
    }
  }
  if (!any) ++out.skipped;
}

void dedupe(std::vector<Point>& pts) {
  auto key = [](const Point& z) {
    std::vector<double> r(static_cast<std::size_t>(2 * z.size()));
    for (Eigen::Index j = 0; j < z.size(); ++j) {
      r[static_cast<std::size_t>(2 * j)] = z[j].real();
      r[static_cast<std::size_t>(2 * j + 1)] = z[j].imag();
    }
    return r;
  };
  std::sort(pts.begin(), pts.end(), [&](const Point& a, const Point& b) { return key(a) < key(b); });
  std::vector<Point> out;
  for (const Point& z : pts) {
    bool dup = false;
    // neighbours in sorted order are the only cheap candidates; exact
    // duplicates from shared Newton limits land next to each other
    for (auto it = out.rbegin(); it != out.rend() && it - out.rbegin() < 8; ++it)
      if ((*it - z).norm() < 1e-9 * (1.0 + z.norm())) {
        dup = true;
        break;
      }
    if (!dup) out.push_back(z);
  }
  pts = std::move(out);
}

std::vector<std::size_t> chain_order(std::span<const Point> pts) {
  const std::size_t n = pts.size();
  std::vector<std::size_t> order;
  if (n == 0) return order;
  order.reserve(n);
  std::vector<char> used(n, 0);
  // start from the point farthest from the centroid, an end of the set
  Point c = Point::Zero(pts[0].size());
  for (const Point& z : pts) c += z;
  c /= static_cast<double>(n);
  std::size_t cur = 0;
  for (std::size_t i = 1; i < n; ++i)
    if ((pts[i] - c).norm() > (pts[cur] - c).norm()) cur = i;
  for (std::size_t step = 0; step < n; ++step) {
    used[cur] = 1;
    order.push_back(cur);
    std::size_t best = n;
    double best_d = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j]) continue;
      const double d = (pts[j] - pts[cur]).squaredNorm();
      if (best == n || d < best_d) {
        best = j;
        best_d = d;
      }
    }
    if (best == n) break;
    cur = best;
  }
  return order;
}

}  // namespace

ZeroSet zeros_on_M(const HoloPoly& f, const manifold::DefiningSystem& ds, const Box& k_box, int grid) {
  if (!ds.has_chart()) throw ConfigError(fmt::format("zero search on '{}' needs a chart", ds.name()));
  if (f.nvars() != ds.n()) throw DimensionError("polynomial and manifold dimensions differ");
  if (grid < 2) throw DomainError("zero search grid needs at least 2 points per axis");
  const manifold::Chart& chart = ds.chart();
  const int k = chart.param_dim();
  if (k_box.dim() != k) throw DimensionError(fmt::format("K needs {} parameter axes, got {}", k, k_box.dim()));
  double cells = 1.0;
  for (int d = 0; d < k; ++d) cells *= grid;
  if (cells > 5e7) throw DomainError(fmt::format("zero search grid of {:.3g} cells is too large", cells));

  const Restricted g{f, chart, ds.n()};
  RVector half(k);
  for (int d = 0; d < k; ++d) half[d] = 0.5 * k_box.axes[d].width() / grid;
  const double half_diag = half.norm();

  // Rows along the first axis run in parallel; results merge in row order.
  std::vector<CellScan> rows(static_cast<std::size_t>(grid));
  const std::size_t per_row = static_cast<std::size_t>(cells) / static_cast<std::size_t>(grid);
  sampling::parallel_for(rows.size(), [&](std::size_t row) {
    CellScan& out = rows[row];
    RVector center(k);
    for (std::size_t idx = 0; idx < per_row; ++idx) {
      std::size_t rest = idx;
      center[0] = k_box.axes[0].lo + (2.0 * static_cast<double>(row) + 1.0) * half[0];
      for (int d = 1; d < k; ++d) {
        const std::size_t i = rest % static_cast<std::size_t>(grid);
        rest /= static_cast<std::size_t>(grid);
        center[d] = k_box.axes[d].lo + (2.0 * static_cast<double>(i) + 1.0) * half[d];
      }
      const double r = g.value(center).norm();
      const double slope = g.jacobian(center).norm();
      // linear reach across the cell with a margin for curvature
      if (r <= 2.0 * slope * half_diag + kZeroTol) try_cell(g, k_box, center, half, out);
    }
  });

  ZeroSet zs;
  for (CellScan& r : rows) {
    zs.candidates += r.candidates;
    zs.skipped += r.skipped;
    zs.points.insert(zs.points.end(), r.zeros.begin(), r.zeros.end());
  }
  dedupe(zs.points);
  return zs;
}

PackingResult greedy_pack(std::span<const Point> points, double epsilon, PackOrder order, std::uint64_t seed) {
  if (!(epsilon > 0.0)) throw DomainError("packing radius must be positive");
  std::vector<std::size_t> idx;
  switch (order) {
    case PackOrder::input:
      idx.resize(points.size());
      std::iota(idx.begin(), idx.end(), std::size_t{0});
      break;
    case PackOrder::shuffled: {
      idx.resize(points.size());
      std::iota(idx.begin(), idx.end(), std::size_t{0});
      std::mt19937_64 rng(sampling::mix_seed(seed, 0x7061636b, 0));
      std::shuffle(idx.begin(), idx.end(), rng);
      break;
    }
    case PackOrder::chain:
      idx = chain_order(points);
      break;
  }
  PackingResult pr;
  pr.epsilon = epsilon;
  const double sep2 = 4.0 * epsilon * epsilon;
  for (std::size_t i : idx) {
    bool ok = true;
    for (const Point& q : pr.points)
      if ((points[i] - q).squaredNorm() <= sep2) {
        ok = false;
        break;
      }
    if (ok) pr.points.push_back(points[i]);
  }
  pr.n = pr.points.size();
  pr.maximal = std::all_of(points.begin(), points.end(), [&](const Point& z) {
    return std::any_of(pr.points.begin(), pr.points.end(),
                       [&](const Point& q) { return (z - q).squaredNorm() <= sep2; });
  });
  return pr;
}

bool is_separated(const PackingResult& pr) {
  const double sep2 = 4.0 * pr.epsilon * pr.epsilon;
  for (std::size_t i = 0; i < pr.points.size(); ++i)
    for (std::size_t j = i + 1; j < pr.points.size(); ++j)
      if ((pr.points[i] - pr.points[j]).squaredNorm() <= sep2) return false;
  return true;
}

PackingBound packing_bound(const PackingResult& pr, double mass_v, int n, int m) {
  const int p = 2 * n - 1 - m;
  if (p < 0) throw DimensionError("packing exponent 2n-1-m is negative");
  PackingBound b;
  if (mass_v <= 0.0) {
    b.inconsistent = pr.n > 0;
    return b;
  }
  b.c_measured = static_cast<double>(pr.n) * std::pow(pr.epsilon, p) / mass_v;
  return b;
}

double unit_ball_volume(int p) {
  if (p < 0) throw DomainError("ball dimension must be nonnegative");
  return std::pow(std::numbers::pi, 0.5 * p) / std::tgamma(0.5 * p + 1.0);
}

std::vector<HausdorffPoint> hausdorff_estimate(std::span<const Point> zeros, std::span<const double> epsilons, int p,
                                               PackOrder order) {
  const double cp = unit_ball_volume(p);
  std::vector<HausdorffPoint> out;
  for (double eps : epsilons) {
    const PackingResult pr = greedy_pack(zeros, eps, order);
    out.push_back({eps, pr.n, cp * static_cast<double>(pr.n) * std::pow(eps, p), pr.n < 5});
  }
  return out;
}

Box neighbourhood(const manifold::DefiningSystem& ds, const Box& k_box) {
  Box img = ds.chart().restricted(k_box).image_bounds();
  const double grow = 0.2 * k_box.diameter();
  for (Interval& a : img.axes) {
    a.lo -= grow;
    a.hi += grow;
  }
  return img;
}

BallArea ball_area_bound(const HoloPoly& f, const Point& z0, double epsilon, const sampling::Options& opts) {
  const int n = f.nvars();
  if (static_cast<int>(z0.size()) != n) throw DimensionError("ball centre and polynomial dimensions differ");
  if (!(epsilon > 0.0)) throw DomainError("ball radius must be positive");
  if (n < 2) throw DimensionError("ball area bound needs n >= 2");
  const currents::RegionPtr ball = currents::ball(z0, epsilon);
  const auto m = currents::divisor_mass(f, *ball, currents::default_epsilon(*ball), opts);
  const double norm = std::pow(std::numbers::pi, n - 1) * std::pow(epsilon, 2 * n - 2) / std::tgamma(n);
  BallArea r;
  r.ratio = m.area.value / norm;
  r.se = m.area.se / norm;
  r.inconclusive = m.area.rel_se() > 0.05;
  return r;
}

}  // namespace tubemass::zeros
