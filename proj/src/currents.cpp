#include "tubemass/currents.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "tubemass/quadrature.hpp"

namespace tubemass::currents {

double kappa(int n) {
  check_dim(n);
  return std::ldexp(1.0, n - 1);
}

CurrentSpec make_divisor(HoloPoly f) {
  if (f.is_zero()) throw DomainError("divisor of the zero polynomial");
  check_dim(f.nvars());
  return Divisor{std::move(f)};
}

CurrentSpec make_variety(ParametrizedVariety v) {
  const int n = v.dim();
  check_dim(n);
  if (n < 2) throw DimensionError("a parametrised hypersurface needs n >= 2");
  if (static_cast<int>(v.domain.size()) != n - 1)
    throw DimensionError(fmt::format("parameter domain has {} factors, expected {}", v.domain.size(), n - 1));
  for (const auto& p : v.map)
    if (p.nvars() != n - 1) throw DimensionError("map components must be polynomials in n-1 variables");
  return v;
}

CurrentSpec make_smooth(jets::ScalarField phi, double radius, int samples, std::uint64_t seed) {
  const int n = phi.dim();
  sampling::Rng rng(sampling::mix_seed(seed, 0x707368, 1));
  for (int s = 0; s < samples; ++s) {
    Point z(n);
    do {
      for (int j = 0; j < n; ++j) z[j] = cd(rng.uniform(-radius, radius), rng.uniform(-radius, radius));
    } while (z.norm() >= radius);
    const SmoothDensity d = trace_density_smooth(phi, z);
    if (!d.psh)
      throw DomainError(fmt::format("potential is not plurisubharmonic: Hessian eigenvalue {:.3e}", d.min_eigenvalue));
  }
  return SmoothPotential{std::move(phi)};
}

int dim(const CurrentSpec& c) {
  return std::visit(
      [](const auto& v) -> int {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Divisor>)
          return v.f.nvars();
        else if constexpr (std::is_same_v<T, ParametrizedVariety>)
          return v.dim();
        else
          return v.phi.dim();
      },
      c);
}

std::string kind_name(const CurrentSpec& c) {
  switch (c.index()) {
    case 0:
      return "divisor";
    case 1:
      return "variety";
    default:
      return "smooth";
  }
}

SmoothDensity trace_density_smooth(const jets::ScalarField& phi, const Point& z, double tolerance) {
  const auto h = phi.jet(z).hess_form();
  SmoothDensity d;
  d.min_eigenvalue = h.min_eigenvalue();
  d.psh = d.min_eigenvalue >= -tolerance;
  d.density = std::ldexp(h.trace(), h.dim());
  return d;
}

double default_epsilon(const Region& region) {
  const Box b = region.bounds();
  double w = 0.0;
  for (const auto& a : b.axes) w = std::max(w, a.width());
  return 0.02 * w;
}

namespace {

double gap(const Interval& v) {
  if (v.lo > 0.0) return v.lo;
  if (v.hi < 0.0) return -v.hi;
  return 0.0;
}

std::vector<CInterval> complex_box(const Box& box, int n) {
  std::vector<CInterval> out(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(j)] = {box.axes[j], box.axes[n + j]};
  return out;
}

}  // namespace

MassEstimate divisor_mass(const HoloPoly& f, const Region& region, double epsilon, const sampling::Options& opts) {
  const int n = f.nvars();
  if (region.dim() != n) throw DimensionError("region and polynomial dimensions differ");
  if (!(epsilon > 0.0)) throw DomainError("coarea epsilon must be positive");
  std::vector<HoloPoly> partials;
  for (int j = 0; j < n; ++j) partials.push_back(f.derivative(j));

  auto classify = [&](const Box& box) -> sampling::Decision {
    if (!region.may_meet(box)) return {sampling::Verdict::drop};
    const auto cbox = complex_box(box, n);
    const CInterval fe = f.enclose(cbox);
    const double gr = gap(fe.re), gi = gap(fe.im);
    if (std::sqrt(gr * gr + gi * gi) > epsilon * (1.0 + 1e-9)) return {sampling::Verdict::drop};
    if (std::max(fe.re.width(), fe.im.width()) <= 2.0 * epsilon) return {sampling::Verdict::keep};
    int best = 0;
    double best_score = -1.0;
    for (int d = 0; d < 2 * n; ++d) {
      const double score = box.axes[d].width() * mag(partials[static_cast<std::size_t>(d % n)].enclose(cbox));
      if (score > best_score) {
        best_score = score;
        best = d;
      }
    }
    return {sampling::Verdict::split, best};
  };
  const auto cells = sampling::refine(region.bounds(), classify);

  const kernels::HoloPlan plan(f);
  const double eps2 = epsilon * epsilon;
  const double norm = 1.0 / (std::numbers::pi * eps2);
  auto integrand = [&](const kernels::PointBlock& block, std::span<double> out) {
    kernels::HoloValues vals;
    kernels::holo_eval_batch(plan, block, vals);
    RVector xi(2 * n);
    for (std::size_t i = 0; i < block.count; ++i) {
      out[i] = 0.0;
      if (vals.re[i] * vals.re[i] + vals.im[i] * vals.im[i] >= eps2) continue;
      for (int d = 0; d < 2 * n; ++d) xi[d] = block.row(d)[i];
      if (region.contains(xi)) out[i] = vals.grad_sq[i] * norm;
    }
  };
  MassEstimate m;
  m.area = sampling::integrate(cells, integrand, opts);
  m.kappa = kappa(n);
  m.trace = {m.area.value * m.kappa, m.area.se * m.kappa, m.area.samples};
  m.epsilon = epsilon;
  m.cells = cells.size();
  m.flagged = m.area.value > 0.0 && m.area.rel_se() > 0.2;
  return m;
}

namespace {

struct Node2 {
  cd u;
  double w;
};

std::vector<Node2> factor_rule(const ParamFactor& f, int nodes) {
  std::vector<Node2> out;
  if (f.kind == ParamFactor::Kind::disc) {
    const auto r = quadrature::gauss_legendre(nodes, 0.0, f.radius);
    const auto th = quadrature::gauss_legendre(nodes, 0.0, 2.0 * std::numbers::pi);
    for (std::size_t i = 0; i < r.nodes.size(); ++i)
      for (std::size_t k = 0; k < th.nodes.size(); ++k)
        out.push_back({std::polar(r.nodes[i], th.nodes[k]), r.weights[i] * th.weights[k] * r.nodes[i]});
  } else {
    const auto a = quadrature::gauss_legendre(nodes, f.re.lo, f.re.hi);
    const auto b = quadrature::gauss_legendre(nodes, f.im.lo, f.im.hi);
    for (std::size_t i = 0; i < a.nodes.size(); ++i)
      for (std::size_t k = 0; k < b.nodes.size(); ++k)
        out.push_back({cd(a.nodes[i], b.nodes[k]), a.weights[i] * b.weights[k]});
  }
  return out;
}

// Sub-intervals of [a, b] on which `inside` holds, located by a scan of 256
// steps and bisection of every change.
template <class Pred>
std::vector<Interval> inside_segments(const Pred& inside, double a, double b) {
  constexpr int kScan = 256;
  std::vector<Interval> out;
  auto at = [&](int i) { return a + (b - a) * (static_cast<double>(i) + 0.5) / kScan; };
  bool prev = inside(at(0));
  double start = a;
  for (int i = 1; i < kScan; ++i) {
    const bool cur = inside(at(i));
    if (cur == prev) continue;
    double lo = at(i - 1), hi = at(i);
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (inside(mid) == prev ? lo : hi) = mid;
    }
    const double edge = 0.5 * (lo + hi);
    if (prev) out.push_back({start, edge});
    start = edge;
    prev = cur;
  }
  if (prev) out.push_back({start, b});
  return out;
}

}  // namespace

VarietyMass variety_mass(const ParametrizedVariety& v, const Region& region, int nodes) {
  const int n = v.dim();
  if (region.dim() != n) throw DimensionError("region and variety dimensions differ");
  const int k = n - 1;
  // Outer factors use fixed tensor rules; the last factor is integrated
  // along rays (disc) or horizontal lines (rect) split at region boundaries.
  std::vector<std::vector<Node2>> rules;
  for (int j = 0; j + 1 < k; ++j) rules.push_back(factor_rule(v.domain[static_cast<std::size_t>(j)], nodes));
  const ParamFactor& last = v.domain.back();
  std::vector<std::vector<HoloPoly>> jac(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < k; ++j) jac[static_cast<std::size_t>(i)].push_back(v.map[static_cast<std::size_t>(i)].derivative(j));

  CVector u(k);
  auto image = [&]() {
    Point z(n);
    for (int i = 0; i < n; ++i) z[i] = v.map[static_cast<std::size_t>(i)].value(u);
    return z;
  };
  auto density = [&]() {
    CMatrix jm(n, k);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < k; ++j) jm(i, j) = jac[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].value(u);
    return (jm.adjoint() * jm).determinant().real();
  };
  const bool disc = last.kind == ParamFactor::Kind::disc;
  const auto outer_rule = disc ? quadrature::gauss_legendre(nodes, 0.0, 2.0 * std::numbers::pi)
                               : quadrature::gauss_legendre(nodes, last.im.lo, last.im.hi);
  const double line_lo = disc ? 0.0 : last.re.lo;
  const double line_hi = disc ? last.radius : last.re.hi;

  auto last_factor = [&]() {
    double sum = 0.0;
    for (std::size_t q = 0; q < outer_rule.nodes.size(); ++q) {
      const double c = outer_rule.nodes[q];
      auto point = [&](double s) { return disc ? std::polar(s, c) : cd(s, c); };
      auto inside = [&](double s) {
        u[k - 1] = point(s);
        return region.contains(to_real(image()));
      };
      for (const Interval& seg : inside_segments(inside, line_lo, line_hi)) {
        const auto g = quadrature::gauss_legendre(nodes, seg.lo, seg.hi);
        for (std::size_t i = 0; i < g.nodes.size(); ++i) {
          u[k - 1] = point(g.nodes[i]);
          sum += outer_rule.weights[q] * g.weights[i] * (disc ? g.nodes[i] : 1.0) * density();
        }
      }
    }
    return sum;
  };

  std::vector<std::size_t> idx(rules.size(), 0);
  double area = 0.0;
  for (;;) {
    double w = 1.0;
    for (std::size_t j = 0; j < rules.size(); ++j) {
      u[static_cast<Eigen::Index>(j)] = rules[j][idx[j]].u;
      w *= rules[j][idx[j]].w;
    }
    area += w * last_factor();
    std::size_t j = 0;
    for (; j < rules.size(); ++j) {
      if (++idx[j] < rules[j].size()) break;
      idx[j] = 0;
    }
    if (j == rules.size()) break;
  }
  return {area, area * kappa(n)};
}

sampling::Estimate smooth_mass(const jets::ScalarField& phi, const Region& region, const sampling::Options& opts) {
  const int n = phi.dim();
  if (region.dim() != n) throw DimensionError("region and potential dimensions differ");
  auto classify = [&](const Box& box) -> sampling::Decision {
    if (!region.may_meet(box)) return {sampling::Verdict::drop};
    return {sampling::Verdict::split};
  };
  const auto cells = sampling::refine(region.bounds(), classify, {1024, 40});
  auto integrand = [&](const kernels::PointBlock& block, std::span<double> out) {
    RVector xi(2 * n);
    for (std::size_t i = 0; i < block.count; ++i) {
      for (int d = 0; d < 2 * n; ++d) xi[d] = block.row(d)[i];
      out[i] = region.contains(xi) ? trace_density_smooth(phi, from_real(xi)).density : 0.0;
    }
  };
  return sampling::integrate(cells, integrand, opts);
}

MassEstimate current_mass(const CurrentSpec& c, const Region& region, double epsilon, const sampling::Options& opts) {
  if (const auto* d = std::get_if<Divisor>(&c)) return divisor_mass(d->f, region, epsilon, opts);
  MassEstimate m;
  m.kappa = kappa(dim(c));
  if (const auto* v = std::get_if<ParametrizedVariety>(&c)) {
    const VarietyMass vm = variety_mass(*v, region);
    m.area = {vm.area, 0.0, 0};
    m.trace = {vm.trace, 0.0, 0};
    return m;
  }
  const auto& s = std::get<SmoothPotential>(c);
  m.trace = smooth_mass(s.phi, region, opts);
  m.area = {m.trace.value / m.kappa, m.trace.se / m.kappa, m.trace.samples};
  m.flagged = m.trace.value > 0.0 && m.trace.rel_se() > 0.2;
  return m;
}

}  // namespace tubemass::currents
