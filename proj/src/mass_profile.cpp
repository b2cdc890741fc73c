#include "tubemass/mass_profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "tubemass/forms.hpp"

namespace tubemass::mass {

using sampling::Box;

namespace {

void check_grid(std::span<const double> t) {
  if (t.empty()) throw DomainError("empty t grid");
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] > 0.0)) throw DomainError("t grid values must be positive");
    if (i > 0 && !(t[i] > t[i - 1])) throw DomainError("t grid must be strictly increasing");
  }
}

void fill_ratio(MassProfile& p) {
  p.ratio.resize(p.t.size());
  p.ratio_se.resize(p.t.size());
  for (std::size_t i = 0; i < p.t.size(); ++i) {
    const double scale = std::pow(p.t[i], p.meta.exponent);
    p.ratio[i] = p.sigma[i] / scale;
    p.ratio_se[i] = p.se[i] / scale;
  }
}

sampling::Options batch_options(const SamplingSpec& spec, std::uint64_t stream) {
  return {spec.seed, stream, spec.samples, spec.batches};
}

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

}  // namespace

std::vector<double> geometric_grid(double t0, int points, double span) {
  if (!(t0 > 0.0) || points < 2 || !(span > 1.0)) throw DomainError("invalid geometric grid");
  std::vector<double> t(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i)
    t[static_cast<std::size_t>(i)] = t0 * std::pow(span, -1.0 + static_cast<double>(i) / (points - 1));
  t.back() = t0;
  return t;
}

MassProfile sigma_profile(const currents::CurrentSpec& current, std::shared_ptr<const manifold::DefiningSystem> ds,
                          double r, std::span<const double> t_grid, const SamplingSpec& spec,
                          std::optional<double> t0) {
  check_grid(t_grid);
  if (currents::dim(current) != ds->n()) throw DimensionError("current and manifold dimensions differ");
  if (!(r > 0.0 && r < ds->domain_radius())) throw DomainError("r must lie in (0, domain radius)");
  MassProfile p;
  p.meta = {ds->n(), ds->m(), r, static_cast<double>(ds->m() - 1), currents::kind_name(current), ds->name(),
            spec.seed};
  std::uint64_t stream = 1;
  for (double t : t_grid) {
    ++stream;
    if (t0 && t > *t0 * (1.0 + 1e-12)) {
      p.warnings.push_back(fmt::format("t = {} exceeds t0 = {}; dropped", t, *t0));
      continue;
    }
    const auto region = currents::tube(ds, t, r);
    const auto m = currents::current_mass(current, *region, spec.epsilon_factor * t, batch_options(spec, stream));
    if (m.flagged) p.warnings.push_back(fmt::format("relative SE above 20% at t = {}", t));
    p.t.push_back(t);
    p.sigma.push_back(m.trace.value);
    p.se.push_back(m.trace.se);
  }
  if (p.t.empty()) throw DomainError("no grid value at or below t0");
  const auto whole = currents::ball(Point::Zero(ds->n()), ds->domain_radius());
  const double eps = currents::default_epsilon(*whole);
  p.total_mass = currents::current_mass(current, *whole, eps, batch_options(spec, 1)).trace;
  fill_ratio(p);
  return p;
}

MonotoneReport almost_monotone_report(const MassProfile& profile) {
  if (profile.size() < 3) throw DomainError("almost_monotone_report needs at least three grid points");
  MonotoneReport rep;
  rep.all_zero = true;
  for (double v : profile.ratio) rep.all_zero = rep.all_zero && v == 0.0;
  if (rep.all_zero) return rep;
  rep.c_measured = 1.0;
  rep.t = profile.t.front();
  rep.s = profile.t.front();
  for (std::size_t i = 0; i < profile.size(); ++i) {
    for (std::size_t j = i + 1; j < profile.size(); ++j) {
      const double a = profile.ratio[i], b = profile.ratio[j];
      double c;
      if (b > 0.0)
        c = a / b;
      else
        c = a > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
      if (c > rep.c_measured) {
        rep.c_measured = c;
        rep.t = profile.t[i];
        rep.s = profile.t[j];
        const double ra = a > 0.0 ? profile.ratio_se[i] / a : 0.0;
        const double rb = b > 0.0 ? profile.ratio_se[j] / b : 0.0;
        rep.c_se = std::isfinite(c) ? c * std::sqrt(ra * ra + rb * rb) : 0.0;
      }
    }
  }
  return rep;
}

NondecreasingCheck check_nondecreasing(const MassProfile& profile, double k_se) {
  NondecreasingCheck out;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    for (std::size_t j = i + 1; j < profile.size(); ++j) {
      const double drop = profile.ratio[i] - profile.ratio[j];
      if (drop <= 0.0) continue;
      const double se = std::hypot(profile.ratio_se[i], profile.ratio_se[j]);
      const double units = se > 0.0 ? drop / se : std::numeric_limits<double>::infinity();
      if (units > out.worst_drop_in_se) {
        out.worst_drop_in_se = units;
        out.worst_drop = drop;
      }
      if (drop > k_se * se) out.ok = false;
    }
  }
  return out;
}

MassProfile sigma_u_profile(const currents::SmoothPotential& phi, const manifold::TubeWeight& tw,
                            const manifold::DefiningSystem& ds, std::span<const double> t_grid,
                            const SamplingSpec& spec, bool weight_validated) {
  check_grid(t_grid);
  const int n = ds.n();
  const int m = ds.m();
  if (phi.phi.dim() != n) throw DimensionError("potential and manifold dimensions differ");
  MassProfile p;
  p.meta = {n, m, tw.inner_radius, static_cast<double>(m - 1), "smooth", ds.name(), spec.seed};
  if (!weight_validated) p.warnings.push_back("tube weight not validated by verify_psh_bound");

  // sqrt(u) < t forces (|z|^2 - R^2)^2 < t and h = sqrt(w) < t, since
  // u >= max(u_tilde, cutoff^2) and v >= h.
  const double t_max = t_grid.back();
  const double radius = std::sqrt(tw.inner_radius * tw.inner_radius + std::sqrt(t_max));
  Box root(std::vector<Interval>(static_cast<std::size_t>(2 * n), Interval{-radius, radius}));
  std::vector<const RealPoly*> rho_polys;
  for (const auto& f : ds.rho()) rho_polys.push_back(f.as_polynomial());
  const bool prune_w = std::all_of(rho_polys.begin(), rho_polys.end(), [](const RealPoly* q) { return q != nullptr; });
  auto classify = [&](const Box& box) -> sampling::Decision {
    if (box.sq_norm_range().lo > radius * radius) return {sampling::Verdict::drop};
    if (prune_w) {
      double w_lo = 0.0;
      for (const RealPoly* q : rho_polys) w_lo += 0.5 * pow(q->enclose(box.axes), 2).lo;
      if (w_lo > t_max * t_max * (1.0 + 1e-9)) return {sampling::Verdict::drop};
    }
    return {sampling::Verdict::split};
  };
  const auto cells = sampling::refine(root, classify, {4096, 40});
  const double top_norm = factorial(n) * std::ldexp(1.0, n);
  const auto k_out = t_grid.size();
  std::vector<double> grid(t_grid.begin(), t_grid.end());

  auto integrand = [&](const kernels::PointBlock& block, std::span<double> out) {
    const std::size_t len = block.count;
    std::fill(out.begin(), out.end(), 0.0);
    RVector xi(2 * n);
    for (std::size_t i = 0; i < len; ++i) {
      for (int d = 0; d < 2 * n; ++d) xi[d] = block.row(d)[i];
      const Point z = from_real(xi);
      const double level = std::sqrt(tw.u.value(z));
      if (!(level < t_max)) continue;
      double density;
      try {
        std::vector<forms::HermitianForm> fs;
        fs.push_back(phi.phi.jet(z).hess_form());
        const auto hu = tw.u.jet(z).hess_form() * 0.5;
        for (int k = 0; k < m - 1; ++k) fs.push_back(hu);
        density = top_norm * forms::wedge_coefficient(fs, n);
      } catch (const DomainError&) {
        continue;  // exactly on M, a null set
      }
      for (std::size_t k = 0; k < k_out; ++k)
        if (level < grid[k]) out[k * len + i] = density;
    }
  };
  const auto est = sampling::integrate_many(cells, static_cast<int>(k_out), integrand, batch_options(spec, 1));
  for (std::size_t k = 0; k < k_out; ++k) {
    p.t.push_back(grid[k]);
    p.sigma.push_back(est[k].value);
    p.se.push_back(est[k].se);
  }
  fill_ratio(p);
  return p;
}

MassProfile convex_profile(const currents::CurrentSpec& current, const currents::ConvexBody& body,
                           std::span<const double> t_grid, const SamplingSpec& spec) {
  check_grid(t_grid);
  const int n = body.dim();
  if (currents::dim(current) != n) throw DimensionError("current and convex body dimensions differ");
  MassProfile p;
  p.meta = {n, n, 0.0, static_cast<double>(n - 1), currents::kind_name(current), "convex body", spec.seed};
  std::uint64_t stream = 1;
  for (double t : t_grid) {
    ++stream;
    const auto region = currents::convex_tube(body, t);
    const auto m = currents::current_mass(current, *region, spec.epsilon_factor * t, batch_options(spec, stream));
    if (m.flagged) p.warnings.push_back(fmt::format("relative SE above 20% at t = {}", t));
    p.t.push_back(t);
    p.sigma.push_back(m.trace.value);
    p.se.push_back(m.trace.se);
  }
  fill_ratio(p);
  return p;
}

double plane_profile_exact(double t, double r) {
  if (t >= r) return currents::kappa(2) * M_PI * r * r;
  return currents::kappa(2) * (2.0 * t * std::sqrt(r * r - t * t) + 2.0 * r * r * std::asin(t / r));
}

}  // namespace tubemass::mass
