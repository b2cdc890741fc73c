#include "tubemass/runner/run.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "json_util.hpp"
#include "tubemass/mass_profile.hpp"
#include "tubemass/potentials.hpp"
#include "tubemass/quadrature.hpp"
#include "tubemass/verify/exterior_algebra.hpp"
#include "tubemass/zero_geometry.hpp"

namespace tubemass::runner {

using namespace json_util;

namespace {

constexpr int kGeneratingSamples = 256;

struct Output {
  Report report;
  Table table{{}};
  std::optional<PlotSpec> plot;
  Json meta = Json::object();
};

mass::SamplingSpec profile_spec(const Scenario& s) {
  return {s.sampling.seed, s.sampling.samples, s.sampling.batches, s.sampling.epsilon_factor};
}

sampling::Options mc_options(const Scenario& s, std::uint64_t stream) {
  sampling::Options o;
  o.seed = s.sampling.seed;
  o.stream = stream;
  o.samples = s.sampling.samples;
  o.batches = s.sampling.batches;
  return o;
}

std::vector<double> t_grid(const Json& profile, const std::string& path) {
  if (profile.contains("t_grid")) {
    auto g = numbers(profile, "t_grid", path);
    if (g.empty() || !std::is_sorted(g.begin(), g.end()) || g.front() <= 0.0)
      throw ConfigError(fmt::format("{}.t_grid must be increasing and positive", path));
    return g;
  }
  const double t0 = positive(profile, "t0", path);
  const long long points = integer_or(profile, "points", 12, path);
  const double span = number_or(profile, "span", 100.0, path);
  if (points < 2 || !(span > 1.0)) throw ConfigError(fmt::format("{} needs points >= 2 and span > 1", path));
  return mass::geometric_grid(t0, static_cast<int>(points), span);
}

Table profile_table(const mass::MassProfile& p) {
  Table t({"t", "sigma", "se", "ratio", "ratio_se"});
  for (std::size_t i = 0; i < p.size(); ++i) t.add({p.t[i], p.sigma[i], p.se[i], p.ratio[i], p.ratio_se[i]});
  return t;
}

Json profile_meta(const mass::MassProfile& p) {
  return {{"n", p.meta.n},           {"m", p.meta.m},       {"r", p.meta.r},
          {"exponent", p.meta.exponent}, {"current", p.meta.current}, {"manifold", p.meta.manifold},
          {"seed", p.meta.seed}};
}

PlotSpec ratio_plot(const std::string& title) {
  PlotSpec ps;
  ps.title = title;
  ps.x = "t";
  ps.y = "ratio";
  ps.err = "ratio_se";
  ps.err_scale = 3.0;
  ps.logx = true;
  return ps;
}

// Largest ratio(t_i) / ratio(t_j) over pairs with t_j >= 10 t_i.
double decade_growth(const mass::MassProfile& p) {
  double g = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      if (p.t[j] >= 10.0 * p.t[i] * (1.0 - 1e-12) && p.ratio[j] > 0.0) g = std::max(g, p.ratio[i] / p.ratio[j]);
  return g;
}

Output tube_mass(const Scenario& s) {
  const int n = s.n;
  const auto ds = parse_manifold(s.doc["manifold"], n, "$.manifold");
  const auto current = parse_current(s.doc["current"], n, s.sampling.seed, "$.current");
  const Json& pj = s.doc["profile"];
  allow_keys(pj, {"r", "t0", "points", "span", "t_grid", "c_bound"}, "$.profile");
  const double r = positive(pj, "r", "$.profile");
  const double c_bound = number_or(pj, "c_bound", 1.2, "$.profile");
  const auto grid = t_grid(pj, "$.profile");
  std::optional<double> t0;
  if (pj.contains("t0")) t0 = positive(pj, "t0", "$.profile");

  const auto gen = manifold::assert_generating(*ds, kGeneratingSamples, s.sampling.seed);
  const auto prof = mass::sigma_profile(current, ds, r, grid, profile_spec(s), t0);
  Output o;
  o.table = profile_table(prof);
  o.meta = profile_meta(prof);
  o.report.warnings = prof.warnings;
  const auto mono = mass::almost_monotone_report(prof);
  const double growth = decade_growth(prof);
  o.report.metrics = {{"generating", gen.generating}, {"delta_min", gen.delta_min},
                      {"c_measured", mono.c_measured}, {"c_se", mono.c_se},
                      {"decade_growth", growth}};
  if (gen.generating) {
    o.report.verdict = mono.c_measured <= c_bound ? "pass" : "fail";
    o.report.detail = fmt::format("almost-monotone constant {:.4f} (bound {})", mono.c_measured, c_bound);
  } else if (growth > 10.0) {
    o.report.verdict = "bound violated (expected)";
    o.report.detail = fmt::format("M is not generating; ratio grows by {:.3g} over a decade of t", growth);
  } else {
    o.report.verdict = "inconclusive";
    o.report.detail = fmt::format("M is not generating; decade growth {:.3g} does not exceed 10", growth);
  }
  o.plot = ratio_plot(fmt::format("{}: sigma(t) / t^{}", s.name, prof.meta.exponent));
  return o;
}

Output monotone(const Scenario& s) {
  const int n = s.n;
  const auto ds = parse_manifold(s.doc["manifold"], n, "$.manifold");
  const auto current = parse_current(s.doc["current"], n, s.sampling.seed, "$.current");
  const auto* smooth = std::get_if<currents::SmoothPotential>(&current);
  if (!smooth) throw ConfigError("$.current: the monotone task needs a smooth current");
  const Json& wj = s.doc["weight"];
  allow_keys(wj, {"a", "inner_radius", "t0", "psh_samples"}, "$.weight");
  const double inner = positive(wj, "inner_radius", "$.weight");
  const double t0 = positive(wj, "t0", "$.weight");
  const long long psh_samples = integer_or(wj, "psh_samples", 2000, "$.weight");
  if (psh_samples < 1) throw ConfigError("$.weight.psh_samples must be positive");
  const Json& pj = s.doc["profile"];
  allow_keys(pj, {"points", "span", "t_grid"}, "$.profile");
  Json grid_src = pj;
  if (!pj.contains("t_grid")) grid_src["t0"] = t0;
  const auto grid = t_grid(grid_src, "$.profile");

  double a = 0.0;
  Output o;
  const Json& aj = need(wj, "a", "$.weight");
  if (aj.is_string()) {
    if (aj.get<std::string>() != "auto") throw ConfigError("$.weight.a must be a number or \"auto\"");
    const auto sw = manifold::sweep_a(*ds, inner, static_cast<int>(psh_samples), t0, s.sampling.seed);
    if (!sw.a) {
      o.report.verdict = "inconclusive";
      o.report.detail = "no A in the sweep makes sqrt(u) psh on the tube";
    }
    a = sw.a.value_or(std::end(manifold::kSweepA)[-1]);
  } else {
    a = as_number(aj, "$.weight.a");
    if (a < 0.0) throw ConfigError("$.weight.a must be nonnegative");
  }
  const auto tw = manifold::build_tube_weight(*ds, a, inner);
  const auto psh = manifold::verify_psh_bound(tw, *ds, static_cast<int>(psh_samples), t0, s.sampling.seed);
  const auto prof = mass::sigma_u_profile(*smooth, tw, *ds, grid, profile_spec(s), psh.passed());
  const auto check = mass::check_nondecreasing(prof, 3.0);
  o.table = profile_table(prof);
  o.meta = profile_meta(prof);
  o.meta["a"] = a;
  o.report.warnings = prof.warnings;
  o.report.metrics = {{"a", a},
                      {"delta_prime", psh.delta_prime},
                      {"min_sqrt_coeff", psh.min_sqrt_coeff},
                      {"worst_drop_in_se", check.worst_drop_in_se}};
  if (o.report.verdict.empty()) {
    if (!psh.passed()) {
      o.report.verdict = "inconclusive";
      o.report.detail = fmt::format("weight not validated (delta' {:.3g}, sqrt coefficient {:.3g})", psh.delta_prime,
                                    psh.min_sqrt_coeff);
    } else {
      o.report.verdict = check.ok ? "pass" : "fail";
      o.report.detail = fmt::format("largest drop {:.3g} combined SE", check.worst_drop_in_se);
    }
  }
  o.plot = ratio_plot(fmt::format("{}: sigma_u(t) / t^{}", s.name, prof.meta.exponent));
  return o;
}

Output convex(const Scenario& s) {
  const int n = s.n;
  const auto current = parse_current(s.doc["current"], n, s.sampling.seed, "$.current");
  const auto body = parse_convex(s.doc["convex"], n, "$.convex");
  const Json& pj = s.doc["profile"];
  allow_keys(pj, {"t0", "points", "span", "t_grid"}, "$.profile");
  const auto grid = t_grid(pj, "$.profile");
  const auto prof = mass::convex_profile(current, body, grid, profile_spec(s));
  const auto check = mass::check_nondecreasing(prof, 3.0);
  Output o;
  o.table = profile_table(prof);
  o.meta = profile_meta(prof);
  o.report.warnings = prof.warnings;
  const double slope = prof.size() >= 2 ? sampling::loglog_slope(prof.t, prof.ratio) : 0.0;
  o.report.metrics = {{"worst_drop_in_se", check.worst_drop_in_se}, {"ratio_slope", slope}};
  o.report.verdict = check.ok ? "pass" : "fail";
  o.report.detail = fmt::format("largest drop {:.3g} combined SE, log-log slope of the ratio {:.4f}",
                                check.worst_drop_in_se, slope);
  o.plot = ratio_plot(fmt::format("{}: sigma(t) / t^{}", s.name, prof.meta.exponent));
  o.plot->logy = true;
  return o;
}

Output zeros(const Scenario& s, bool hausdorff) {
  const int n = s.n;
  const auto ds = parse_manifold(s.doc["manifold"], n, "$.manifold");
  const auto current = parse_current(s.doc["current"], n, s.sampling.seed, "$.current");
  const auto* div = std::get_if<currents::Divisor>(&current);
  if (!div) throw ConfigError("$.current: zero tasks need a divisor");
  const Json& zj = s.doc["zeros"];
  allow_keys(zj, {"k_box", "grid", "epsilons", "order"}, "$.zeros");
  const auto k_box = parse_box(need(zj, "k_box", "$.zeros"), "$.zeros.k_box");
  const long long grid = integer_or(zj, "grid", 400, "$.zeros");
  auto eps = numbers(zj, "epsilons", "$.zeros");
  if (eps.empty() || std::any_of(eps.begin(), eps.end(), [](double e) { return !(e > 0.0); }))
    throw ConfigError("$.zeros.epsilons must be positive");
  std::sort(eps.rbegin(), eps.rend());
  const std::string order_name = string_or(zj, "order", "chain", "$.zeros");
  zeros::PackOrder order = zeros::PackOrder::chain;
  if (order_name == "input") order = zeros::PackOrder::input;
  else if (order_name == "shuffled") order = zeros::PackOrder::shuffled;
  else if (order_name != "chain") throw ConfigError("$.zeros.order must be chain, input or shuffled");
  if (!ds->has_chart()) throw ConfigError("$.manifold: zero tasks need a chart");
  if (k_box.dim() != ds->chart().param_dim())
    throw ConfigError(fmt::format("$.zeros.k_box needs {} axes", ds->chart().param_dim()));
  if (grid < 2) throw ConfigError("$.zeros.grid must be at least 2");

  const auto zs = zeros::zeros_on_M(div->f, *ds, k_box, static_cast<int>(grid));
  const auto omega = currents::box_region(zeros::neighbourhood(*ds, k_box));
  const auto vmass = currents::divisor_mass(div->f, *omega, currents::default_epsilon(*omega), mc_options(s, 0x5a));
  const double mass_v = vmass.area.value;
  const int m = ds->m();
  const int p = 2 * n - m - 1;
  const double cp = p >= 0 ? zeros::unit_ball_volume(p) : 0.0;

  Output o;
  o.table = Table({"epsilon", "N", "C_measured", "hausdorff_p", "hausdorff_estimate"});
  double c_min = std::numeric_limits<double>::infinity(), c_max = 0.0;
  bool coarse = false, inconsistent = false;
  std::vector<double> xs, ns;
  double h_last = 0.0;
  for (double e : eps) {
    const auto pr = zeros::greedy_pack(zs.points, e, order, s.sampling.seed);
    if (!zeros::is_separated(pr)) throw NumericalError("packing output is not 2 epsilon separated");
    const auto pb = zeros::packing_bound(pr, mass_v, n, m);
    const double h = cp * static_cast<double>(pr.n) * std::pow(e, p);
    o.table.add({e, static_cast<double>(pr.n), pb.c_measured, static_cast<double>(p), h});
    inconsistent = inconsistent || pb.inconsistent;
    coarse = coarse || pr.n < 5;
    if (pr.n > 0) {
      c_min = std::min(c_min, pb.c_measured);
      c_max = std::max(c_max, pb.c_measured);
      xs.push_back(e);
      ns.push_back(static_cast<double>(pr.n));
    }
    h_last = h;
  }
  const double variation = c_max > 0.0 ? c_max / c_min : 1.0;
  const double slope = xs.size() >= 2 ? sampling::loglog_slope(xs, ns) : 0.0;
  o.report.metrics = {{"zeros", zs.points.size()},   {"skipped_cells", zs.skipped}, {"mass_v", mass_v},
                      {"mass_v_se", vmass.area.se},  {"c_max", c_max},              {"c_variation", variation},
                      {"n_slope", slope},            {"c_p", cp}};
  o.meta = {{"n", n}, {"m", m}, {"p", p}, {"manifold", ds->name()}, {"order", order_name}, {"seed", s.sampling.seed}};
  if (coarse) o.report.warnings.push_back("some epsilon has N < 5; the estimate there is coarse");
  if (zs.skipped > 0) o.report.warnings.push_back(fmt::format("{} cells skipped after Newton failures", zs.skipped));
  if (inconsistent) {
    o.report.verdict = "fail";
    o.report.detail = "|V| = 0 on Omega but zeros were found";
  } else if (!hausdorff) {
    o.report.verdict = variation < 2.0 ? "pass" : "fail";
    o.report.detail = fmt::format("C_measured in [{:.4g}, {:.4g}], variation {:.3f}", c_max > 0 ? c_min : 0.0, c_max,
                                  variation);
  } else {
    // Literal comparison against the packing constant. The estimate carries
    // the covering factor c_p, so c_p C |V| is reported alongside.
    const double bound = c_max * mass_v;
    o.report.metrics["hausdorff"] = h_last;
    o.report.metrics["bound"] = bound;
    o.report.metrics["ratio"] = bound > 0.0 ? h_last / bound : 0.0;
    o.report.metrics["covering_bound"] = cp * bound;
    if (coarse) {
      o.report.verdict = "inconclusive";
    } else {
      o.report.verdict = h_last <= bound ? "pass" : "fail";
    }
    o.report.detail = fmt::format("H_{} estimate {:.4g} against C |V| = {:.4g} (c_p C |V| = {:.4g})", p, h_last,
                                  bound, cp * bound);
  }
  PlotSpec ps;
  ps.title = fmt::format("{}: packing count", s.name);
  ps.x = "epsilon";
  ps.y = "N";
  ps.logx = ps.logy = true;
  ps.annotation = fmt::format("fitted slope {:.3f}", slope);
  o.plot = ps;
  return o;
}

manifold::WeightedPointCloud parse_measure(const Json& j, int n, const std::string& path) {
  const std::string kind = string_or(j, "kind", "", path);
  if (kind == "ball") {
    allow_keys(j, {"kind", "radius", "per_axis"}, path);
    return potentials::ball_grid_cloud(n, positive(j, "radius", path),
                                       static_cast<int>(integer_or(j, "per_axis", 24, path)));
  }
  if (kind == "trace") {
    allow_keys(j, {"kind", "phi", "radius", "per_axis"}, path);
    const auto phi = parse_field(need(j, "phi", path), n, path + ".phi");
    return potentials::trace_measure_cloud(phi, positive(j, "radius", path),
                                           static_cast<int>(integer_or(j, "per_axis", 24, path)));
  }
  if (kind == "atoms") {
    allow_keys(j, {"kind", "points", "weights"}, path);
    const Json& pts = array_of(need(j, "points", path), path + ".points");
    const auto w = numbers(j, "weights", path);
    if (w.size() != pts.size()) throw ConfigError(fmt::format("{}: one weight per point", path));
    manifold::WeightedPointCloud c;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const std::string pp = fmt::format("{}.points[{}]", path, i);
      const Json& a = array_of(pts[i], pp);
      if (a.size() != static_cast<std::size_t>(2 * n)) throw ConfigError(fmt::format("{} needs 2n reals", pp));
      RVector xi(2 * n);
      for (int d = 0; d < 2 * n; ++d) xi[d] = as_number(a[static_cast<std::size_t>(d)], pp);
      if (!(w[i] >= 0.0)) throw ConfigError(fmt::format("{}.weights must be nonnegative", path));
      c.add(from_real(xi), w[i]);
    }
    return c;
  }
  throw ConfigError(fmt::format("{}.kind must be ball, trace or atoms", path));
}

double alpha_in_unit(const Json& j, const std::string& path) {
  const double a = number(j, "alpha", path);
  if (!(a > 0.0 && a < 1.0)) throw ConfigError(fmt::format("{}.alpha must lie in (0, 1)", path));
  return a;
}

Output potential(const Scenario& s) {
  const int n = s.n;
  const Json& pj = s.doc["potential"];
  const std::string mode = string_or(pj, "mode", "exp-bound", "$.potential");
  Output o;
  if (mode == "kernel") {
    allow_keys(pj, {"mode", "alpha", "k_box", "foot", "deltas", "order"}, "$.potential");
    const auto ds = parse_manifold(need(s.doc, "manifold", "$"), n, "$.manifold");
    const double alpha = alpha_in_unit(pj, "$.potential");
    const auto k_box = parse_box(need(pj, "k_box", "$.potential"), "$.potential.k_box");
    const auto foot_v = numbers(pj, "foot", "$.potential");
    const auto deltas = numbers(pj, "deltas", "$.potential");
    const long long order = integer_or(pj, "order", 8, "$.potential");
    if (!ds->has_chart() || k_box.dim() != ds->chart().param_dim() ||
        foot_v.size() != static_cast<std::size_t>(k_box.dim()))
      throw ConfigError("$.potential: k_box and foot must match the chart parameters");
    if (order < 1 || order > 64) throw ConfigError("$.potential.order must lie in [1, 64]");
    RVector foot(k_box.dim());
    for (int d = 0; d < k_box.dim(); ++d) foot[d] = foot_v[static_cast<std::size_t>(d)];
    const auto sw = potentials::kernel_sweep(*ds, k_box, foot, alpha, deltas, static_cast<int>(order));
    o.table = Table({"d", "I", "near_points", "sparse"});
    bool sparse = false;
    for (const auto& r : sw.rows) {
      o.table.add({r.d, r.value, static_cast<double>(r.near_points), r.sparse ? 1.0 : 0.0});
      sparse = sparse || r.sparse;
    }
    if (sparse) o.report.warnings.push_back("cloud sparse near the foot point for some distance");
    o.report.metrics = {{"slope", sw.slope}, {"expected_slope", sw.expected_slope}};
    o.report.verdict = std::abs(sw.slope - sw.expected_slope) <= 0.1 ? "pass" : "fail";
    o.report.detail = fmt::format("log I against log d: slope {:.4f}, expected {:.4f}", sw.slope, sw.expected_slope);
    o.meta = {{"n", n}, {"m", ds->m()}, {"alpha", alpha}, {"manifold", ds->name()}};
    PlotSpec ps;
    ps.title = fmt::format("{}: kernel on M", s.name);
    ps.x = "d";
    ps.y = "I";
    ps.logx = ps.logy = true;
    ps.annotation = fmt::format("fitted slope {:.3f}", sw.slope);
    o.plot = ps;
    return o;
  }
  if (mode != "exp-bound") throw ConfigError("$.potential.mode must be exp-bound or kernel");
  allow_keys(pj, {"mode", "alpha", "measure", "z_radius", "z_count", "s_grid"}, "$.potential");
  if (n < 2) throw ConfigError("$.n: the exponential bound needs n >= 2");
  const double alpha = alpha_in_unit(pj, "$.potential");
  const auto mu = parse_measure(need(pj, "measure", "$.potential"), n, "$.potential.measure");
  if (mu.size() == 0 || !(mu.total_mass() > 0.0)) throw ConfigError("$.potential.measure has no mass");
  const double z_radius = positive(pj, "z_radius", "$.potential");
  const long long z_count = integer_or(pj, "z_count", 100, "$.potential");
  if (z_count < 1) throw ConfigError("$.potential.z_count must be positive");
  std::vector<double> s_grid = pj.contains("s_grid") ? numbers(pj, "s_grid", "$.potential")
                                                     : std::vector<double>{0.25, 0.35, 0.45, 0.55, 0.65, 0.75, 0.85, 0.95};
  const auto zs = potentials::halton_ball(n, z_radius, static_cast<std::size_t>(z_count));
  const potentials::PackedCloud packed(mu);
  std::vector<potentials::ExpBound> rows(zs.size());
  std::vector<char> mono(zs.size(), 0);
  sampling::parallel_for(zs.size(), [&](std::size_t i) {
    rows[i] = potentials::exp_bound_check(packed, zs[i], alpha);
    mono[i] = potentials::nu_monotone(potentials::radial_mass(packed, zs[i], s_grid)).monotone;
  });
  o.table = Table({"index", "abs_z", "U", "lhs", "rhs", "implied_C", "nu_monotone"});
  double sup = 0.0;
  std::size_t excluded = 0, not_mono = 0;
  for (std::size_t i = 0; i < zs.size(); ++i) {
    const auto& r = rows[i];
    o.table.add({static_cast<double>(i), zs[i].norm(), r.potential, r.lhs, r.rhs, r.implied_c, mono[i] ? 1.0 : 0.0});
    if (r.excluded) {
      ++excluded;
      continue;
    }
    if (!mono[i]) ++not_mono;
    sup = std::max(sup, r.implied_c);
  }
  o.report.metrics = {{"sup_implied_c", sup}, {"excluded", excluded}, {"nu_not_monotone", not_mono},
                      {"scale", rows.empty() ? 1.0 : rows[0].scale}};
  if (excluded) o.report.warnings.push_back(fmt::format("{} points hit an atom and were excluded", excluded));
  if (not_mono) o.report.warnings.push_back(fmt::format("{} points violate the nu monotonicity hypothesis", not_mono));
  o.report.verdict = std::isfinite(sup) && excluded < zs.size() ? "pass" : "fail";
  o.report.detail = fmt::format("sup of implied C over {} points: {:.5g}", zs.size() - excluded, sup);
  o.meta = {{"n", n}, {"alpha", alpha}, {"mass_scale", rows.empty() ? 1.0 : rows[0].scale}, {"seed", s.sampling.seed}};
  PlotSpec ps;
  ps.title = fmt::format("{}: implied constant", s.name);
  ps.x = "abs_z";
  ps.y = "implied_C";
  o.plot = ps;
  return o;
}

Output expint(const Scenario& s) {
  const int n = s.n;
  const auto ds = parse_manifold(s.doc["manifold"], n, "$.manifold");
  const Json& ej = s.doc["expint"];
  allow_keys(ej, {"phi", "alpha", "clip_levels", "rules"}, "$.expint");
  const auto phi = parse_field(need(ej, "phi", "$.expint"), n, "$.expint.phi");
  const double alpha = positive(ej, "alpha", "$.expint");
  const auto levels = numbers(ej, "clip_levels", "$.expint");
  if (!ds->has_chart()) throw ConfigError("$.manifold: expint needs a chart");
  const Json& rj = array_of(need(ej, "rules", "$.expint"), "$.expint.rules");
  if (rj.size() != static_cast<std::size_t>(ds->chart().param_dim()))
    throw ConfigError(fmt::format("$.expint.rules needs {} entries", ds->chart().param_dim()));
  std::vector<quadrature::Rule> rules;
  for (std::size_t i = 0; i < rj.size(); ++i) {
    const std::string rp = fmt::format("$.expint.rules[{}]", i);
    allow_keys(rj[i], {"kind", "lo", "hi", "order", "focus", "floor"}, rp);
    const double lo = number(rj[i], "lo", rp), hi = number(rj[i], "hi", rp);
    const long long order = integer_or(rj[i], "order", 8, rp);
    if (!(hi > lo) || order < 1 || order > 64) throw ConfigError(fmt::format("{} needs lo < hi and order in [1, 64]", rp));
    const std::string kind = string_or(rj[i], "kind", "gauss", rp);
    if (kind == "gauss") {
      rules.push_back(quadrature::gauss_legendre(static_cast<int>(order), lo, hi));
    } else if (kind == "graded") {
      rules.push_back(quadrature::graded_rule(lo, hi, number(rj[i], "focus", rp), positive(rj[i], "floor", rp),
                                              static_cast<int>(order)));
    } else {
      throw ConfigError(fmt::format("{}.kind must be gauss or graded", rp));
    }
  }
  const auto cloud = manifold::tensor_surface(*ds, rules);
  if (levels.empty() || !std::is_sorted(levels.rbegin(), levels.rend()) || !(levels.back() > 0.0))
    throw ConfigError("$.expint.clip_levels must be positive and decreasing");
  const auto res = potentials::exp_integral(phi, cloud, alpha, levels);
  Output o;
  o.table = Table({"level", "estimate", "increment"});
  for (const auto& l : res.levels) o.table.add({l.level, l.estimate, l.increment});
  o.report.metrics = {{"converged", res.converged}, {"last", res.levels.back().estimate}, {"points", cloud.size()}};
  o.report.verdict = res.converged ? "pass" : "not confirmed";
  o.report.detail = res.converged
                        ? fmt::format("estimates settle at {:.6g}", res.levels.back().estimate)
                        : fmt::format("integrability not confirmed at alpha = {}", alpha);
  o.meta = {{"n", n}, {"alpha", alpha}, {"manifold", ds->name()}};
  PlotSpec ps;
  ps.title = fmt::format("{}: clipped exponential integral", s.name);
  ps.x = "level";
  ps.y = "estimate";
  ps.logx = true;
  o.plot = ps;
  return o;
}

Output verify_forms(const Scenario& s) {
  const Json& fj = s.doc["forms"];
  allow_keys(fj, {"n_max", "count"}, "$.forms");
  const long long n_max = integer_or(fj, "n_max", 3, "$.forms");
  const long long count = integer_or(fj, "count", 100, "$.forms");
  if (n_max < 1 || n_max > kMaxDim || count < 1) throw ConfigError("$.forms needs n_max in [1, 4] and count >= 1");
  sampling::Rng rng(sampling::mix_seed(s.sampling.seed, 0xf0, 0));
  Output o;
  o.table = Table({"n", "k", "trial", "value", "oracle", "rel_err"});
  double worst = 0.0;
  for (long long t = 0; t < count; ++t) {
    const int n = 1 + static_cast<int>(t % n_max);
    const int k = 1 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(n));
    std::vector<forms::HermitianForm> fs;
    for (int i = 0; i < k; ++i) {
      CMatrix a(n, n);
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) a(r, c) = cd(rng.normal(), rng.normal());
      fs.emplace_back(a);
    }
    const double v = forms::wedge_coefficient(fs, n);
    const double oracle = verify::wedge_oracle(fs, n);
    const double rel = std::abs(v - oracle) / std::max(std::abs(oracle), 1e-300);
    worst = std::max(worst, rel);
    o.table.add({static_cast<double>(n), static_cast<double>(k), static_cast<double>(t), v, oracle, rel});
  }
  o.report.metrics = {{"max_rel_err", worst}};
  o.report.verdict = worst < 1e-10 ? "pass" : "fail";
  o.report.detail = fmt::format("largest relative error {:.3g} over {} tuples", worst, count);
  o.meta = {{"n_max", n_max}, {"count", count}, {"seed", s.sampling.seed}};
  return o;
}

}  // namespace

Report run_scenario(const Scenario& s, const RunOptions& options) {
  Output o;
  switch (s.task) {
    case Task::tube_mass: o = tube_mass(s); break;
    case Task::monotone: o = monotone(s); break;
    case Task::convex: o = convex(s); break;
    case Task::zeros: o = zeros(s, false); break;
    case Task::hausdorff: o = zeros(s, true); break;
    case Task::potential: o = potential(s); break;
    case Task::expint: o = expint(s); break;
    case Task::verify_forms: o = verify_forms(s); break;
  }
  std::error_code ec;
  std::filesystem::create_directories(options.out, ec);
  if (ec) throw Error(fmt::format("cannot create output directory {}: {}", options.out.string(), ec.message()));

  Report& r = o.report;
  r.name = s.name;
  r.task = s.task;
  r.seed = s.sampling.seed;
  r.config_hash = s.config_hash;
  const std::string csv = s.name + ".csv";
  write_text(options.out / csv, o.table.csv());
  r.tables.push_back(csv);
  Json meta = o.meta;
  meta["task"] = task_name(s.task);
  meta["config_hash"] = s.config_hash;
  meta["columns"] = o.table.columns;
  write_text(options.out / (s.name + ".meta.json"), meta.dump(2) + "\n");
  if (options.plot && o.plot && !o.table.empty()) {
    const std::string svg = s.name + ".svg";
    emit_plot(o.table, *o.plot, options.out / svg);
    r.figures.push_back(svg);
  }
  write_text(options.out / (s.name + ".report.json"), r.to_json().dump(2) + "\n");
  return r;
}

Report run_scenario(const std::filesystem::path& config, const RunOptions& options) {
  return run_scenario(load_scenario(config), options);
}

}  // namespace tubemass::runner
