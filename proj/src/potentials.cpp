#include "tubemass/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/SVD>
#include <fmt/format.h>

#include "tubemass/quadrature.hpp"

namespace tubemass::potentials {

namespace {

int cloud_dim(const WeightedPointCloud& mu) {
  if (mu.points.empty()) throw DomainError("measure cloud is empty");
  return static_cast<int>(mu.points.front().size());
}

// |z - zeta|^(-exponent) from the squared distance, clipped at kKernelFloor.
double kernel(double d2, double exponent, std::size_t& clipped) {
  constexpr double floor2 = kKernelFloor * kKernelFloor;
  if (d2 < floor2) {
    ++clipped;
    d2 = floor2;
  }
  if (exponent == 2.0) return 1.0 / d2;
  return std::pow(d2, -0.5 * exponent);
}

double radical_inverse(std::size_t i, unsigned base) {
  double f = 1.0, r = 0.0;
  while (i > 0) {
    f /= base;
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

}  // namespace

// ------------------------------------------------------------ radial mass

RadialMass::RadialMass(const PackedCloud& mu, const Point& center, std::span<const double> s_grid)
    : n_(static_cast<int>(center.size())), center_(center) {
  check_dim(n_);
  if (mu.size() > 0 && mu.n() != n_) throw DimensionError("measure and centre dimensions differ");
  const RVector q = to_real(center);
  std::vector<double> d2(mu.size());
  if (mu.size() > 0)
    kernels::sq_dist_batch(mu.block(), std::span<const double>(q.data(), static_cast<std::size_t>(q.size())), d2);
  std::vector<std::pair<double, double>> atoms;
  atoms.reserve(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) atoms.emplace_back(std::sqrt(d2[i]), mu.weights()[i]);
  std::sort(atoms.begin(), atoms.end());
  prefix_.assign(1, 0.0);
  for (const auto& [r, w] : atoms) {
    radii_.push_back(r);
    weights_.push_back(w);
    prefix_.push_back(prefix_.back() + w);
  }
  s_.assign(s_grid.begin(), s_grid.end());
  if (!std::is_sorted(s_.begin(), s_.end())) throw DomainError("radius grid must be sorted");
  for (double s : s_) {
    if (!(s > 0.0)) throw DomainError("radius grid values must be positive");
    cumulative_.push_back(mu_at(s));
    normalized_.push_back(nu(s));
  }
}

double RadialMass::mu_at(double s) const {
  const auto k = std::lower_bound(radii_.begin(), radii_.end(), s) - radii_.begin();
  return prefix_[static_cast<std::size_t>(k)];
}

double RadialMass::mu(double s) const { return mu_at(s); }

double RadialMass::mu_closed(double s) const {
  const auto k = std::upper_bound(radii_.begin(), radii_.end(), s) - radii_.begin();
  return prefix_[static_cast<std::size_t>(k)];
}

double RadialMass::nu(double s) const {
  if (!(s > 0.0)) throw DomainError("nu is defined for s > 0 only");
  return mu_at(s) / std::pow(s, 2 * n_ - 2);
}

RadialMass radial_mass(const PackedCloud& mu, const Point& z, std::span<const double> s_grid) {
  return RadialMass(mu, z, s_grid);
}

RadialMass radial_mass(const WeightedPointCloud& mu, const Point& z, std::span<const double> s_grid) {
  if (mu.points.empty()) return RadialMass(PackedCloud(static_cast<int>(z.size())), z, s_grid);
  return RadialMass(PackedCloud(mu), z, s_grid);
}

MonotoneVerdict nu_monotone(const RadialMass& rm, double tolerance) {
  const auto& nu = rm.normalized();
  if (nu.size() < 2) throw DomainError("monotonicity needs at least two radii");
  MonotoneVerdict v;
  for (std::size_t i = 0; i + 1 < nu.size(); ++i) {
    const double drop = nu[i] - nu[i + 1];
    const double rel = nu[i] > 0.0 ? drop / nu[i] : (drop > 0.0 ? 1.0 : 0.0);
    v.max_violation = std::max(v.max_violation, rel);
  }
  v.monotone = v.max_violation <= tolerance;
  return v;
}

// ---------------------------------------------------------------- kernels

PackedCloud::PackedCloud(int n) : n_(n), block_(2 * n, 0) {}

PackedCloud::PackedCloud(const WeightedPointCloud& mu) : n_(cloud_dim(mu)), block_(2 * n_, mu.size()) {
  block_.count = mu.size();
  weights_ = mu.weights;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const Point& p = mu.points[i];
    for (int j = 0; j < n_; ++j) {
      block_.row(j)[i] = p[j].real();
      block_.row(n_ + j)[i] = p[j].imag();
    }
  }
  total_ = std::accumulate(weights_.begin(), weights_.end(), 0.0);
}

KernelSum riesz_sum(const PackedCloud& mu, const Point& z, double exponent) {
  if (static_cast<int>(z.size()) != mu.n()) throw DimensionError("point and measure dimensions differ");
  const RVector q = to_real(z);
  std::vector<double> d2(mu.size());
  kernels::sq_dist_batch(mu.block(), std::span<const double>(q.data(), static_cast<std::size_t>(q.size())), d2);
  KernelSum out;
  const auto& w = mu.weights();
  for (std::size_t i = 0; i < d2.size(); ++i) out.value += w[i] * kernel(d2[i], exponent, out.clipped);
  return out;
}

KernelSum riesz_sum(const WeightedPointCloud& mu, const Point& z, double exponent) {
  return riesz_sum(PackedCloud(mu), z, exponent);
}

KernelSum newton_potential(const WeightedPointCloud& mu, const Point& z) {
  const int n = static_cast<int>(z.size());
  if (n < 2) throw DimensionError("the Newton kernel needs n >= 2");
  return riesz_sum(mu, z, 2.0 * n - 2.0);
}

ExpBound exp_bound_check(const PackedCloud& mu, const Point& z, double alpha) {
  const int n = mu.n();
  if (n < 2) throw DimensionError("the exponential bound needs n >= 2");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  if (!(mu.total_mass() > 0.0)) throw DomainError("measure has no mass");
  ExpBound b;
  b.scale = 1.0 / mu.total_mass();
  const KernelSum u = riesz_sum(mu, z, 2.0 * n - 2.0);
  const KernelSum r = riesz_sum(mu, z, 2.0 * n - 2.0 + alpha);
  b.clipped = u.clipped;
  b.excluded = u.clipped > 0;
  b.potential = u.value * b.scale;
  b.lhs = std::exp(alpha * b.potential / (2.0 * n - 2.0));
  b.rhs = r.value * b.scale;
  b.implied_c = b.rhs > 0.0 ? b.lhs / b.rhs : std::numeric_limits<double>::infinity();
  return b;
}

ExpBound exp_bound_check(const WeightedPointCloud& mu, const Point& z, double alpha) {
  return exp_bound_check(PackedCloud(mu), z, alpha);
}

IbpCheck ibp_identity(const RadialMass& rm, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  const int p = 2 * rm.n() - 2;
  const double q = p + alpha;
  IbpCheck c;
  std::vector<double> breaks;
  for (std::size_t i = 0; i < rm.radii().size(); ++i) {
    const double r = rm.radii()[i];
    if (r >= 1.0) break;
    if (r <= 0.0) {
      c.atom_at_center = true;
      continue;
    }
    c.direct += rm.sorted_weights()[i] * std::pow(r, -q);
    if (breaks.empty() || breaks.back() != r) breaks.push_back(r);
  }
  if (breaks.empty()) return c;

  // Jumps of nu read off the step function itself.
  double jumps = 0.0;
  for (double r : breaks) jumps += std::pow(r, -alpha) * (rm.mu_closed(r) - rm.mu(r)) / std::pow(r, p);

  // Smooth parts on each gap between atoms, split so that panel end ratios
  // stay below 2; 16 Gauss nodes are then exact to rounding for powers.
  double smooth = 0.0;
  breaks.push_back(1.0);
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    double a = breaks[i];
    const double b = breaks[i + 1];
    const double m = rm.mu(0.5 * (a + b));
    while (a < b) {
      const double e = std::min(b, 2.0 * a);
      const auto g = quadrature::gauss_legendre(16, a, e);
      for (std::size_t k = 0; k < g.nodes.size(); ++k) {
        const double s = g.nodes[k];
        const double nu = rm.nu(s);
        const double dnu = -p * m * std::pow(s, -p - 1);
        smooth += g.weights[k] * (p * std::pow(s, -1.0 - alpha) * nu + std::pow(s, -alpha) * dnu);
      }
      a = e;
    }
  }
  c.by_parts = jumps + smooth;
  c.rel_err = c.direct != 0.0 ? std::abs(c.by_parts - c.direct) / std::abs(c.direct) : std::abs(c.by_parts);
  return c;
}

// ------------------------------------------------------------ kernel on M

KernelValue kernel_on_M(const WeightedPointCloud& cloud, const manifold::DefiningSystem& ds, const Point& zeta,
                        double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  const int n = ds.n();
  if (static_cast<int>(zeta.size()) != n) throw DimensionError("point and manifold dimensions differ");
  KernelValue kv;
  kv.d = ds.distance(zeta);
  const PackedCloud packed(cloud);
  const KernelSum s = riesz_sum(packed, zeta, 2.0 * n - 2.0 + alpha);
  kv.value = s.value;
  kv.clipped = s.clipped;
  const double near = 10.0 * kv.d;
  for (const Point& p : cloud.points)
    if ((p - zeta).norm() < near) ++kv.near_points;
  kv.sparse = kv.near_points < 100;
  return kv;
}

KernelSweep kernel_sweep(const manifold::DefiningSystem& ds, const sampling::Box& k_box, const RVector& foot,
                         double alpha, std::span<const double> deltas, int order) {
  const manifold::Chart& ch = ds.chart();
  const int k = ch.param_dim();
  if (foot.size() != k || k_box.dim() != k) throw DimensionError("foot point and K must use the chart parameters");
  const RMatrix jac = ch.jacobian(foot);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Eigen::MatrixXd(jac), Eigen::ComputeFullU);
  if (svd.rank() < k) throw NumericalError("chart is degenerate at the foot point");
  const RVector normal = svd.matrixU().col(k);
  const RVector base = ch.map_real(foot);

  KernelSweep out;
  out.expected_slope = -(ds.m() - 2.0 + alpha);
  std::vector<double> xs, ys;
  for (double delta : deltas) {
    if (!(delta > 0.0)) throw DomainError("distances must be positive");
    std::vector<quadrature::Rule> rules;
    for (int d = 0; d < k; ++d)
      rules.push_back(quadrature::graded_rule(k_box.axes[d].lo, k_box.axes[d].hi, foot[d], 0.1 * delta, order));
    const auto cloud = manifold::tensor_surface(ds, rules);
    const Point zeta = from_real(base + delta * normal);
    out.rows.push_back(kernel_on_M(cloud, ds, zeta, alpha));
    xs.push_back(out.rows.back().d);
    ys.push_back(out.rows.back().value);
  }
  if (xs.size() >= 2) out.slope = sampling::loglog_slope(xs, ys);
  return out;
}

ExpIntegral exp_integral(const jets::ScalarField& phi, const WeightedPointCloud& cloud, double alpha,
                         std::span<const double> clip_levels) {
  if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
  if (clip_levels.empty()) throw DomainError("at least one clip level is needed");
  std::vector<double> values(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) values[i] = phi.value(cloud.points[i]);
  ExpIntegral out;
  double prev_level = std::numeric_limits<double>::infinity();
  for (double level : clip_levels) {
    if (!(level > 0.0) || !(level < prev_level)) throw DomainError("clip levels must be positive and decreasing");
    prev_level = level;
    const double floor = std::log(level);
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) s += cloud.weights[i] * std::exp(-alpha * std::max(values[i], floor));
    ClipLevel cl{level, s, 0.0};
    if (!out.levels.empty()) cl.increment = (s - out.levels.back().estimate) / out.levels.back().estimate;
    out.levels.push_back(cl);
  }
  out.converged = out.levels.size() >= 2 && std::isfinite(out.levels.back().estimate) &&
                  std::abs(out.levels.back().increment) < 0.01;
  return out;
}

// ------------------------------------------------------- measure builders

namespace {

template <class Visit>
void ball_grid(int n, double radius, int per_axis, Visit&& visit) {
  check_dim(n);
  if (per_axis < 1) throw DomainError("grid needs at least one point per axis");
  if (!(radius > 0.0)) throw DomainError("ball radius must be positive");
  const int dim = 2 * n;
  const double h = 2.0 * radius / per_axis;
  const double cell = std::pow(h, dim);
  std::size_t total = 1;
  for (int d = 0; d < dim; ++d) total *= static_cast<std::size_t>(per_axis);
  RVector xi(dim);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    for (int d = dim - 1; d >= 0; --d) {
      xi[d] = -radius + (static_cast<double>(rest % static_cast<std::size_t>(per_axis)) + 0.5) * h;
      rest /= static_cast<std::size_t>(per_axis);
    }
    if (xi.squaredNorm() < radius * radius) visit(xi, cell);
  }
}

}  // namespace

WeightedPointCloud ball_grid_cloud(int n, double radius, int per_axis) {
  WeightedPointCloud c;
  ball_grid(n, radius, per_axis, [&](const RVector& xi, double cell) { c.add(from_real(xi), cell); });
  return c;
}

WeightedPointCloud trace_measure_cloud(const jets::ScalarField& phi, double radius, int per_axis) {
  WeightedPointCloud c;
  ball_grid(phi.dim(), radius, per_axis, [&](const RVector& xi, double cell) {
    const Point z = from_real(xi);
    const auto d = currents::trace_density_smooth(phi, z);
    if (!d.psh) throw DomainError(fmt::format("potential is not psh at a grid point of the ball"));
    c.add(z, d.density * cell);
  });
  return c;
}

WeightedPointCloud variety_grid_cloud(const currents::ParametrizedVariety& v, int per_axis) {
  const int n = v.dim();
  const int k = n - 1;
  if (static_cast<int>(v.domain.size()) != k) throw DimensionError("variety needs one domain factor per parameter");
  if (per_axis < 1) throw DomainError("grid needs at least one point per axis");
  std::vector<std::vector<std::pair<cd, double>>> nodes(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) {
    const auto& f = v.domain[static_cast<std::size_t>(j)];
    const bool disc = f.kind == currents::ParamFactor::Kind::disc;
    const Interval re = disc ? Interval{-f.radius, f.radius} : f.re;
    const Interval im = disc ? Interval{-f.radius, f.radius} : f.im;
    const double hr = re.width() / per_axis, hi = im.width() / per_axis;
    for (int a = 0; a < per_axis; ++a)
      for (int b = 0; b < per_axis; ++b) {
        const cd u(re.lo + (a + 0.5) * hr, im.lo + (b + 0.5) * hi);
        if (disc && std::abs(u) >= f.radius) continue;
        nodes[static_cast<std::size_t>(j)].emplace_back(u, hr * hi);
      }
  }
  std::vector<std::vector<HoloPoly>> jac(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < k; ++j) jac[static_cast<std::size_t>(i)].push_back(v.map[static_cast<std::size_t>(i)].derivative(j));
  std::size_t total = 1;
  for (const auto& r : nodes) total *= r.size();
  WeightedPointCloud c;
  CVector u(k);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    double w = 1.0;
    for (int j = k - 1; j >= 0; --j) {
      const auto& r = nodes[static_cast<std::size_t>(j)];
      const auto& [node, weight] = r[rest % r.size()];
      rest /= r.size();
      u[j] = node;
      w *= weight;
    }
    Point z(n);
    CMatrix jm(n, k);
    for (int i = 0; i < n; ++i) {
      z[i] = v.map[static_cast<std::size_t>(i)].value(u);
      for (int j = 0; j < k; ++j) jm(i, j) = jac[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].value(u);
    }
    c.add(z, w * (jm.adjoint() * jm).determinant().real());
  }
  return c;
}

std::vector<Point> halton_ball(int n, double radius, std::size_t count) {
  check_dim(n);
  static constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19};
  const int dim = 2 * n;
  std::vector<Point> out;
  RVector xi(dim);
  for (std::size_t i = 1; out.size() < count; ++i) {
    for (int d = 0; d < dim; ++d) xi[d] = radius * (2.0 * radical_inverse(i, kPrimes[d]) - 1.0);
    if (xi.squaredNorm() < radius * radius) out.push_back(from_real(xi));
  }
  return out;
}

}  // namespace tubemass::potentials
