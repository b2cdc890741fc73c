#include "tubemass/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace tubemass::manifold {

namespace {

Box enclose_image(const std::vector<RealPoly>& polys, const Box& params) {
  std::vector<Interval> out;
  out.reserve(polys.size());
  for (const auto& p : polys) out.push_back(p.enclose(params.axes));
  return Box(std::move(out));
}

Box intersect(const Box& a, const Box& b) {
  if (a.dim() != b.dim()) throw DimensionError("box dimension mismatch");
  Box r = a;
  for (int d = 0; d < a.dim(); ++d) {
    r.axes[d].lo = std::max(a.axes[d].lo, b.axes[d].lo);
    r.axes[d].hi = std::min(a.axes[d].hi, b.axes[d].hi);
    if (r.axes[d].lo > r.axes[d].hi) throw DomainError("parameter sub-box does not meet the chart box");
  }
  return r;
}

RVector clamp(const RVector& p, const Box& box) {
  RVector q = p;
  for (int d = 0; d < box.dim(); ++d) q[d] = std::clamp(q[d], box.axes[d].lo, box.axes[d].hi);
  return q;
}

RVector random_in(const Box& box, sampling::Rng& rng) {
  RVector p(box.dim());
  for (int d = 0; d < box.dim(); ++d) p[d] = rng.uniform(box.axes[d].lo, box.axes[d].hi);
  return p;
}

std::span<const double> view(const RVector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

}  // namespace

// ------------------------------------------------------------------ Chart

Chart Chart::polynomial(int n, std::vector<RealPoly> coords, Box params) {
  check_dim(n);
  if (static_cast<int>(coords.size()) != 2 * n)
    throw DimensionError(fmt::format("chart needs {} coordinate polynomials, got {}", 2 * n, coords.size()));
  for (const auto& c : coords)
    if (c.nvars() != params.dim()) throw DimensionError("chart polynomial arity differs from parameter dimension");
  Chart ch;
  ch.n_ = n;
  ch.params_ = std::move(params);
  ch.polys_ = std::move(coords);
  ch.image_ = enclose_image(ch.polys_, ch.params_);
  // Capture the polynomials by value so copies of the chart stay independent.
  auto polys = ch.polys_;
  ch.map_ = [polys](const RVector& p) {
    RVector out(static_cast<Eigen::Index>(polys.size()));
    for (std::size_t d = 0; d < polys.size(); ++d) out[static_cast<Eigen::Index>(d)] = polys[d].value(view(p));
    return out;
  };
  ch.jac_ = [polys](const RVector& p) {
    RMatrix j(static_cast<Eigen::Index>(polys.size()), p.size());
    for (std::size_t d = 0; d < polys.size(); ++d) j.row(static_cast<Eigen::Index>(d)) = polys[d].jet(view(p)).grad;
    return j;
  };
  return ch;
}

Chart Chart::programmatic(int n, Box params, MapFn map, JacobianFn jacobian, Box image) {
  check_dim(n);
  if (image.dim() != 2 * n) throw DimensionError("chart image box must have 2n axes");
  Chart ch;
  ch.n_ = n;
  ch.params_ = std::move(params);
  ch.image_ = std::move(image);
  ch.map_ = std::move(map);
  ch.jac_ = std::move(jacobian);
  return ch;
}

double Chart::gram_factor(const RVector& p) const {
  const RMatrix j = jacobian(p);
  const RMatrix g = j.transpose() * j;
  return std::sqrt(std::max(0.0, g.determinant()));
}

Chart Chart::restricted(const Box& sub) const {
  Chart ch = *this;
  ch.params_ = intersect(params_, sub);
  if (!polys_.empty()) ch.image_ = enclose_image(polys_, ch.params_);
  return ch;
}

WeightedPointCloud tensor_surface(const DefiningSystem& ds, std::span<const quadrature::Rule> rules) {
  const Chart& ch = ds.chart();
  const int k = ch.param_dim();
  if (static_cast<int>(rules.size()) != k) throw DimensionError("one quadrature rule per chart parameter is needed");
  std::size_t total = 1;
  for (const auto& r : rules) total *= r.nodes.size();
  WeightedPointCloud cloud;
  cloud.points.reserve(total);
  cloud.weights.reserve(total);
  RVector p(k);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    double w = 1.0;
    for (int d = k - 1; d >= 0; --d) {
      const auto& r = rules[static_cast<std::size_t>(d)];
      const std::size_t i = rest % r.nodes.size();
      rest /= r.nodes.size();
      p[d] = r.nodes[i];
      w *= r.weights[i];
    }
    cloud.add(ch.map(p), ch.gram_factor(p) * w);
  }
  return cloud;
}

// ------------------------------------------------------------ point cloud

void WeightedPointCloud::add(Point p, double w) {
  if (!(w >= 0.0)) throw DomainError("point cloud weights must be nonnegative");
  points.push_back(std::move(p));
  weights.push_back(w);
}

double WeightedPointCloud::total_mass() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

// -------------------------------------------------------- DefiningSystem

DefiningSystem::DefiningSystem(int n, std::vector<jets::ScalarField> rho, double domain_radius,
                               std::optional<Chart> chart, std::string name)
    : n_(n), rho_(std::move(rho)), domain_radius_(domain_radius), chart_(std::move(chart)), name_(std::move(name)) {
  check_dim(n);
  const int m = static_cast<int>(rho_.size());
  if (m < 1) throw DomainError("a defining system needs at least one function");
  if (m > n)
    throw DomainError(fmt::format(
        "codimension {} exceeds n = {}: the {} complex differentials cannot be independent, so M is never generating",
        m, n, m));
  for (const auto& r : rho_)
    if (r.dim() != n) throw DimensionError("defining function dimension differs from n");
  if (!(domain_radius_ > 0.0)) throw DomainError("domain radius must be positive");
  if (chart_ && chart_->ambient_dim() != n) throw DimensionError("chart ambient dimension differs from n");
  if (chart_ && chart_->param_dim() != 2 * n - m)
    throw DimensionError(fmt::format("chart has {} parameters, expected {}", chart_->param_dim(), 2 * n - m));

  linear_ = std::all_of(rho_.begin(), rho_.end(), [](const jets::ScalarField& f) {
    const RealPoly* p = f.as_polynomial();
    return p && p->degree() <= 1;
  });
  if (linear_) {
    g_ = RMatrix::Zero(m, 2 * n);
    c_ = RVector::Zero(m);
    const RVector origin = RVector::Zero(2 * n);
    for (int j = 0; j < m; ++j) {
      const auto jet = rho_[j].as_polynomial()->jet(view(origin));
      c_[j] = jet.value;
      g_.row(j) = jet.grad.transpose();
    }
    const RMatrix gg = g_ * g_.transpose();
    Eigen::FullPivLU<RMatrix> lu(gg);
    if (lu.rank() < m) throw DomainError("linear defining functions are dependent");
    gram_inv_ = lu.inverse();
  } else if (chart_) {
    const int k = chart_->param_dim();
    const int per_axis =
        std::max(2, std::min(20, static_cast<int>(std::floor(std::pow(1e5, 1.0 / static_cast<double>(k))))));
    std::size_t total = 1;
    for (int d = 0; d < k; ++d) total *= static_cast<std::size_t>(per_axis);
    seed_points_ = kernels::PointBlock(2 * n, total);
    seed_points_.count = total;
    seed_params_.reserve(total);
    const Box& box = chart_->params();
    for (std::size_t idx = 0; idx < total; ++idx) {
      RVector p(k);
      std::size_t rest = idx;
      for (int d = 0; d < k; ++d) {
        const auto i = static_cast<double>(rest % static_cast<std::size_t>(per_axis));
        rest /= static_cast<std::size_t>(per_axis);
        p[d] = box.axes[d].lo + (i + 0.5) / per_axis * box.axes[d].width();
      }
      const RVector x = chart_->map_real(p);
      for (int d = 0; d < 2 * n; ++d) seed_points_.row(d)[idx] = x[d];
      seed_params_.push_back(std::move(p));
    }
  }
}

const Chart& DefiningSystem::chart() const {
  if (!chart_) throw DomainError(fmt::format("manifold '{}' has no chart", name_));
  return *chart_;
}

RVector DefiningSystem::residual(const Point& z) const {
  RVector r(m());
  for (int j = 0; j < m(); ++j) r[j] = rho_[j].value(z);
  return r;
}

RMatrix DefiningSystem::real_jacobian(const Point& z) const {
  RMatrix out(m(), 2 * n_);
  for (int j = 0; j < m(); ++j) {
    const jets::Jet2 jet = rho_[j].jet(z);
    // df/dz = (f_x - i f_y)/2, so f_x = 2 Re, f_y = -2 Im.
    for (int a = 0; a < n_; ++a) {
      out(j, a) = 2.0 * jet.grad[a].real();
      out(j, n_ + a) = -2.0 * jet.grad[a].imag();
    }
  }
  return out;
}

CMatrix DefiningSystem::complex_jacobian(const Point& z) const {
  CMatrix out(m(), n_);
  for (int j = 0; j < m(); ++j) out.row(j) = rho_[j].jet(z).grad.transpose();
  return out;
}

DistanceResult DefiningSystem::project(const Point& z) const {
  if (z.size() != n_) throw DimensionError("point dimension differs from n");
  if (linear_) return project_linear(z);
  if (!chart_) throw DomainError(fmt::format("distance to nonlinear manifold '{}' needs a chart", name_));
  return project_chart(z);
}

DistanceResult DefiningSystem::project_linear(const Point& z) const {
  const RVector xi = to_real(z);
  const RVector r = g_ * xi + c_;
  const RVector lambda = gram_inv_ * r;
  DistanceResult out;
  out.distance = std::sqrt(std::max(0.0, r.dot(lambda)));
  out.foot = from_real(xi - g_.transpose() * lambda);
  return out;
}

DistanceResult DefiningSystem::project_chart(const Point& z) const {
  const Chart& ch = *chart_;
  const RVector xi = to_real(z);
  std::vector<double> d2(seed_points_.count);
  kernels::sq_dist_batch(seed_points_, view(xi), d2);
  const auto best = static_cast<std::size_t>(std::min_element(d2.begin(), d2.end()) - d2.begin());

  RVector p = seed_params_[best];
  RVector x = ch.map_real(p);
  double err = (x - xi).norm();
  DistanceResult out;
  bool converged = false;
  int it = 0;
  for (; it < kProjectionMaxIterations; ++it) {
    const RMatrix j = ch.jacobian(p);
    const RVector step = -j.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(RVector(x - xi));
    double scale = 1.0;
    RVector q;
    RVector xq;
    double eq = std::numeric_limits<double>::infinity();
    for (int halve = 0; halve < 30; ++halve, scale *= 0.5) {
      q = clamp(p + scale * step, ch.params());
      xq = ch.map_real(q);
      eq = (xq - xi).norm();
      if (eq <= err) break;
    }
    const double moved = (q - p).norm();
    if (eq <= err) {
      p = q;
      x = xq;
      err = eq;
    }
    if (moved < kProjectionTolerance * (1.0 + p.norm())) {
      converged = true;
      break;
    }
  }
  out.distance = err;
  out.foot = from_real(x);
  out.iterations = it;
  out.reduced_accuracy = !converged;
  return out;
}

// --------------------------------------------------------- generating test

RankResult generating_rank(const DefiningSystem& ds, const Point& p) {
  if (ds.residual(p).norm() >= 1e-8) throw DomainError("generating_rank: point is not on M");
  const CMatrix jac = ds.complex_jacobian(p);
  Eigen::JacobiSVD<CMatrix> svd(jac);
  const auto& sv = svd.singularValues();
  const double scale = std::max(1.0, sv.size() > 0 ? sv[0] : 0.0);
  RankResult r;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > 1e-10 * scale) ++r.rank;
  r.min_singular_value = ds.m() <= sv.size() ? sv[ds.m() - 1] : 0.0;
  return r;
}

GeneratingReport assert_generating(const DefiningSystem& ds, int samples, std::uint64_t seed) {
  const Chart& ch = ds.chart();
  sampling::Rng rng(sampling::mix_seed(seed, 0x67656e, 0));
  GeneratingReport rep;
  rep.generating = true;
  rep.delta_min = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    const Point p = ch.map(random_in(ch.params(), rng));
    const RankResult r = generating_rank(ds, p);
    rep.generating = rep.generating && r.rank == ds.m();
    rep.delta_min = std::min(rep.delta_min, r.min_singular_value * r.min_singular_value);
    ++rep.samples;
  }
  return rep;
}

WeightedPointCloud sample_surface(const DefiningSystem& ds, const Box& sub, std::size_t count, std::uint64_t seed) {
  if (count == 0) throw DomainError("sample_surface needs at least one point");
  const Chart ch = ds.chart().restricted(sub);
  const double w = ch.params().volume() / static_cast<double>(count);
  sampling::Rng rng(sampling::mix_seed(seed, 0x737266, 0));
  WeightedPointCloud cloud;
  cloud.points.reserve(count);
  cloud.weights.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const RVector p = random_in(ch.params(), rng);
    cloud.add(ch.map(p), ch.gram_factor(p) * w);
  }
  return cloud;
}

// ------------------------------------------------------------ tube weights

TubeWeight build_tube_weight(const DefiningSystem& ds, double a, double inner_radius, double smoothing) {
  if (!(a >= 0.0)) throw DomainError("tube weight constant A must be nonnegative");
  if (!(inner_radius > 0.0 && inner_radius < ds.domain_radius()))
    throw DomainError("inner radius must lie in (0, domain radius)");
  const int n = ds.n();
  jets::ScalarField w = jets::ScalarField::constant(n, 0.0);
  for (const auto& r : ds.rho()) w = w + 0.5 * (r * r);
  const jets::ScalarField h = jets::sqrt(w);
  const jets::ScalarField v = h + a * w;
  const jets::ScalarField u_tilde = jets::square(v);
  const jets::ScalarField cutoff =
      jets::chain(jets::fn::pos_part_squared(),
                  jets::ScalarField::norm_squared(n) - jets::ScalarField::constant(n, inner_radius * inner_radius));
  if (smoothing <= 0.0) {
    sampling::Rng rng(sampling::mix_seed(0, 0x736d6f, 0));
    double top = 0.0;
    int kept = 0;
    while (kept < 4096) {
      Point z(n);
      for (int j = 0; j < n; ++j) z[j] = cd(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)) * inner_radius;
      if (z.norm() >= inner_radius) continue;
      ++kept;
      top = std::max(top, u_tilde.value(z));
    }
    smoothing = top > 0.0 ? 1e-6 * top : 1e-12;
  }
  jets::ScalarField u = jets::smooth_max(u_tilde, jets::square(cutoff), smoothing);
  TubeWeight tw{w, h, v, u_tilde, cutoff, std::move(u), a, inner_radius, smoothing};
  return tw;
}

PshReport verify_psh_bound(const TubeWeight& tw, const DefiningSystem& ds, int samples, double t_max,
                           std::uint64_t seed) {
  if (!(t_max > 0.0)) throw DomainError("t_max must be positive");
  const Chart& ch = ds.chart();
  const int m = ds.m();
  sampling::Rng rng(sampling::mix_seed(seed, 0x707368, 0));
  PshReport rep;
  rep.delta_prime = std::numeric_limits<double>::infinity();
  rep.min_sqrt_coeff = std::numeric_limits<double>::infinity();
  const long max_attempts = 200L * samples + 1000;
  for (long attempt = 0; attempt < max_attempts && rep.samples < samples; ++attempt) {
    const RVector p = random_in(ch.params(), rng);
    const RVector foot = ch.map_real(p);
    if (foot.norm() >= tw.inner_radius) continue;
    // Orthonormal basis of the normal space from the gradients of rho.
    const RMatrix grads = ds.real_jacobian(from_real(foot)).transpose();
    Eigen::HouseholderQR<RMatrix> qr(grads);
    const RMatrix normals = RMatrix(qr.householderQ()).leftCols(m);
    RVector dir(m);
    for (int j = 0; j < m; ++j) dir[j] = rng.normal();
    if (dir.norm() == 0.0) continue;
    dir.normalize();
    const double s = t_max * (0.01 + 0.99 * rng.uniform());
    const Point z = from_real(foot + s * (normals * dir));
    if (z.norm() >= tw.inner_radius) continue;
    const double d = ds.distance(z);
    if (!(d > 0.0 && d < t_max)) continue;
    const auto hu = tw.u_tilde.jet(z).hess_form();
    const auto hv = tw.v.jet(z).hess_form();
    rep.delta_prime = std::min(rep.delta_prime, forms::power_lower_bound(hu, m - 1));
    rep.min_sqrt_coeff = std::min(rep.min_sqrt_coeff, forms::power_lower_bound(hv, m - 1));
    ++rep.samples;
  }
  if (rep.samples == 0) throw NumericalError("verify_psh_bound: no sample points landed in the tube");
  return rep;
}

SweepResult sweep_a(const DefiningSystem& ds, double inner_radius, int samples, double t_max, std::uint64_t seed) {
  SweepResult out;
  for (double a : kSweepA) {
    const TubeWeight tw = build_tube_weight(ds, a, inner_radius);
    out.report = verify_psh_bound(tw, ds, samples, t_max, seed);
    if (out.report.passed()) {
      out.a = a;
      return out;
    }
  }
  return out;
}

std::optional<double> select_t0(const DefiningSystem& ds, double a, double inner_radius,
                                std::span<const double> candidates, int samples, std::uint64_t seed) {
  const TubeWeight tw = build_tube_weight(ds, a, inner_radius);
  std::optional<double> best;
  for (double t : candidates) {
    if (verify_psh_bound(tw, ds, samples, t, seed).passed() && (!best || t > *best)) best = t;
  }
  return best;
}

// ----------------------------------------------------------------- catalog

namespace catalog {

namespace {

RealPoly var(int nv, int i) { return RealPoly::variable(nv, i); }
RealPoly zero(int nv) { return RealPoly(nv); }

Box cube(int k, double half) { return Box(std::vector<Interval>(static_cast<std::size_t>(k), Interval{-half, half})); }

jets::ScalarField field(int n, RealPoly p) { return jets::ScalarField::polynomial(n, std::move(p)); }

}  // namespace

DefiningSystem real_space(int n, double radius) {
  check_dim(n);
  std::vector<jets::ScalarField> rho;
  for (int j = 0; j < n; ++j) rho.push_back(jets::ScalarField::y(n, j));
  std::vector<RealPoly> coords;
  for (int j = 0; j < n; ++j) coords.push_back(var(n, j));
  for (int j = 0; j < n; ++j) coords.push_back(zero(n));
  return DefiningSystem(n, std::move(rho), radius, Chart::polynomial(n, std::move(coords), cube(n, radius)),
                        fmt::format("R^{}", n));
}

DefiningSystem real_plane_pair(int n, double radius) {
  if (n < 2) throw DimensionError("real_plane_pair needs n >= 2");
  check_dim(n);
  const int k = 2 * n - 2;
  std::vector<jets::ScalarField> rho{jets::ScalarField::y(n, 0), jets::ScalarField::y(n, 1)};
  // Parameters: x_1..x_n, y_3..y_n.
  std::vector<RealPoly> coords;
  for (int j = 0; j < n; ++j) coords.push_back(var(k, j));
  coords.push_back(zero(k));
  coords.push_back(zero(k));
  for (int j = 2; j < n; ++j) coords.push_back(var(k, n + j - 2));
  return DefiningSystem(n, std::move(rho), radius, Chart::polynomial(n, std::move(coords), cube(k, radius)),
                        fmt::format("y1=y2=0 in C^{}", n));
}

DefiningSystem complex_line(double radius) {
  std::vector<jets::ScalarField> rho{jets::ScalarField::x(2, 1), jets::ScalarField::y(2, 1)};
  std::vector<RealPoly> coords{var(2, 0), zero(2), var(2, 1), zero(2)};
  return DefiningSystem(2, std::move(rho), radius, Chart::polynomial(2, std::move(coords), cube(2, radius)),
                        "C x {0}");
}

DefiningSystem small_graph(double eps, double radius) {
  const RealPoly x1 = var(4, 0), x2 = var(4, 1), y1 = var(4, 2), y2 = var(4, 3);
  std::vector<jets::ScalarField> rho{field(2, y1 - x1 * x2 * eps), field(2, y2 - (x1 * x1 - x2 * x2) * (0.5 * eps))};
  const RealPoly p1 = var(2, 0), p2 = var(2, 1);
  std::vector<RealPoly> coords{p1, p2, p1 * p2 * eps, (p1 * p1 - p2 * p2) * (0.5 * eps)};
  return DefiningSystem(2, std::move(rho), radius, Chart::polynomial(2, std::move(coords), cube(2, radius)),
                        "graph y = g(x)");
}

DefiningSystem curved(double radius) {
  const RealPoly x2 = var(4, 1), y1 = var(4, 2), y2 = var(4, 3);
  std::vector<jets::ScalarField> rho{field(2, y1 - x2 * x2), field(2, y2)};
  const RealPoly p1 = var(2, 0), p2 = var(2, 1);
  std::vector<RealPoly> coords{p1, p2, p2 * p2, zero(2)};
  return DefiningSystem(2, std::move(rho), radius, Chart::polynomial(2, std::move(coords), cube(2, radius)),
                        "y1 = x2^2, y2 = 0");
}

DefiningSystem siegel(double radius) {
  const RealPoly x1 = var(4, 0), x2 = var(4, 1), y1 = var(4, 2), y2 = var(4, 3);
  std::vector<jets::ScalarField> rho{field(2, y1 - x1 * x1 - x2 * x2 - y2 * y2)};
  const RealPoly p1 = var(3, 0), p2 = var(3, 1), p3 = var(3, 2);
  std::vector<RealPoly> coords{p1, p2, p1 * p1 + p2 * p2 + p3 * p3, p3};
  return DefiningSystem(2, std::move(rho), radius, Chart::polynomial(2, std::move(coords), cube(3, radius)),
                        "y1 = x1^2 + |z2|^2");
}

DefiningSystem c_r_zero(double radius) {
  std::vector<jets::ScalarField> rho{jets::ScalarField::y(3, 1), jets::ScalarField::x(3, 2),
                                     jets::ScalarField::y(3, 2)};
  // Parameters (x1, y1, x2); layout (x1, x2, x3, y1, y2, y3).
  std::vector<RealPoly> coords{var(3, 0), var(3, 2), zero(3), var(3, 1), zero(3), zero(3)};
  return DefiningSystem(3, std::move(rho), radius, Chart::polynomial(3, std::move(coords), cube(3, radius)),
                        "C x R x {0}");
}

DefiningSystem sphere(double radius) {
  std::vector<jets::ScalarField> rho{jets::ScalarField::norm_squared(2) - jets::ScalarField::constant(2, 1.0)};
  const double two_pi = 2.0 * M_PI;
  Box params({Interval{0.0, M_PI / 2}, Interval{0.0, two_pi}, Interval{0.0, two_pi}});
  auto map = [](const RVector& p) {
    RVector x(4);
    x << std::cos(p[0]) * std::cos(p[1]), std::sin(p[0]) * std::cos(p[2]), std::cos(p[0]) * std::sin(p[1]),
        std::sin(p[0]) * std::sin(p[2]);
    return x;
  };
  auto jac = [](const RVector& p) {
    const double ca = std::cos(p[0]), sa = std::sin(p[0]);
    const double cb = std::cos(p[1]), sb = std::sin(p[1]);
    const double cc = std::cos(p[2]), sc = std::sin(p[2]);
    RMatrix j(4, 3);
    j << -sa * cb, -ca * sb, 0.0,  //
        ca * cc, 0.0, -sa * sc,    //
        -sa * sb, ca * cb, 0.0,    //
        ca * sc, 0.0, sa * cc;
    return j;
  };
  return DefiningSystem(2, std::move(rho), radius,
                        Chart::programmatic(2, std::move(params), map, jac, cube(4, 1.0)), "unit sphere in C^2");
}

}  // namespace catalog

}  // namespace tubemass::manifold
