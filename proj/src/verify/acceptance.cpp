#include "tubemass/verify/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include <fmt/format.h>

#include "tubemass/currents.hpp"
#include "tubemass/jets.hpp"
#include "tubemass/manifold.hpp"
#include "tubemass/mass_profile.hpp"
#include "tubemass/potentials.hpp"
#include "tubemass/runner/report.hpp"
#include "tubemass/runner/run.hpp"
#include "tubemass/zero_geometry.hpp"

#ifndef TUBEMASS_SCENARIO_DIR
#define TUBEMASS_SCENARIO_DIR "scenarios"
#endif

namespace tubemass::verify {

namespace fs = std::filesystem;
using runner::Report;
using runner::Table;

namespace {

// Tolerances, one per checked quantity.
constexpr double kFormsRelTol = 1e-10;
constexpr double kFormsSeconds = 5.0;
constexpr double kJetRelTol = 1e-6;
constexpr double kAreaRelTol = 0.02;
constexpr double kAreaPairRelTol = 0.03;
constexpr double kAreaSeconds = 60.0;
constexpr double kProfileRelTol = 0.05;
constexpr double kAlmostMonotoneMax = 1.2;
constexpr double kSqrtCoeffTol = 1e-8;
constexpr double kSlopeTol = 0.1;
constexpr double kCounterexampleGrowth = 10.0;
constexpr double kPackingVariation = 2.0;
constexpr double kLengthRelTol = 0.10;
constexpr double kLelongLinearTol = 0.03;
constexpr double kLelongDoubleTol = 0.06;
constexpr double kStabilityRatio = 1.2;
constexpr double kIbpRelTol = 1e-8;
constexpr double kExpIntegralRelTol = 0.05;
constexpr double kSuiteSeconds = 900.0;

constexpr std::uint64_t kDefaultSeed = 1234;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Context {
  fs::path dir;        // this criterion's output directory
  fs::path scenarios;  // bundled scenarios
  std::uint64_t seed = kDefaultSeed;
  bool seed_override = false;
  double suite_elapsed = 0.0;
  std::vector<fs::path> outputs;
};

struct Outcome {
  bool pass = false;
  std::string detail;
};

runner::Scenario bundled(const Context& ctx, const std::string& name) {
  runner::Scenario s = runner::load_scenario(ctx.scenarios / (name + ".json"));
  if (ctx.seed_override) s.sampling.seed = ctx.seed;
  return s;
}

Report run_bundled(Context& ctx, const std::string& name, const fs::path& out) {
  const runner::Scenario s = bundled(ctx, name);
  runner::RunOptions opt;
  opt.out = out;
  Report r = runner::run_scenario(s, opt);
  for (const auto& t : r.tables) ctx.outputs.push_back(out / t);
  return r;
}

Report run_bundled(Context& ctx, const std::string& name) { return run_bundled(ctx, name, ctx.dir); }

void save(Context& ctx, const std::string& file, const Table& table) {
  runner::write_text(ctx.dir / file, table.csv());
  ctx.outputs.push_back(ctx.dir / file);
}

std::string yes(bool b) { return b ? "yes" : "no"; }

// --- 1
Outcome forms_algebra(Context& ctx) {
  const auto t0 = Clock::now();
  const Report r = run_bundled(ctx, "forms_wedge");
  const double secs = seconds_since(t0);
  const double err = r.metrics.at("max_rel_err").get<double>();
  return {err < kFormsRelTol && secs < kFormsSeconds,
          fmt::format("max rel err {:.2e} (< {:.0e}), {:.2f} s (< {} s)", err, kFormsRelTol, secs, kFormsSeconds)};
}

// --- 2
struct FdJet {
  CVector grad;
  CMatrix hess;
  // Norms of the real gradient and Hessian; they set the error scale when
  // the complex parts vanish, as for pluriharmonic fields.
  double grad_scale = 0.0;
  double hess_scale = 0.0;
};

// Richardson-extrapolated central differences of the value in real
// coordinates, assembled into d/dz and d^2/dz dzbar.
FdJet finite_difference(const jets::ScalarField& f, const Point& z, double h) {
  const int n = static_cast<int>(z.size());
  const RVector xi = to_real(z);
  auto val = [&](const RVector& p) { return f.value(from_real(p)); };
  auto unit = [&](int d) {
    RVector e = RVector::Zero(2 * n);
    e[d] = 1.0;
    return e;
  };
  auto grad_at = [&](double s, int a) {
    return (val(xi + s * unit(a)) - val(xi - s * unit(a))) / (2.0 * s);
  };
  auto hess_at = [&](double s, int a, int b) {
    const RVector ea = s * unit(a), eb = s * unit(b);
    return (val(xi + ea + eb) - val(xi + ea - eb) - val(xi - ea + eb) + val(xi - ea - eb)) / (4.0 * s * s);
  };
  RVector g(2 * n);
  RMatrix hr(2 * n, 2 * n);
  for (int a = 0; a < 2 * n; ++a) {
    g[a] = (4.0 * grad_at(h / 2, a) - grad_at(h, a)) / 3.0;
    for (int b = a; b < 2 * n; ++b) {
      hr(a, b) = (4.0 * hess_at(h / 2, a, b) - hess_at(h, a, b)) / 3.0;
      hr(b, a) = hr(a, b);
    }
  }
  FdJet out{CVector(n), CMatrix(n, n), g.norm() / 2.0, hr.norm() / 4.0};
  for (int j = 0; j < n; ++j) {
    out.grad[j] = cd(g[j], -g[n + j]) / 2.0;
    for (int k = 0; k < n; ++k)
      out.hess(j, k) = cd(hr(j, k) + hr(n + j, n + k), hr(j, n + k) - hr(n + j, k)) / 4.0;
  }
  return out;
}

// Halves the step from 1e-2 until two successive estimates agree, so thin
// layers of large curvature get a step that resolves them.
FdJet adaptive_difference(const jets::ScalarField& f, const Point& z) {
  FdJet prev = finite_difference(f, z, 1e-2);
  for (double h = 5e-3; h >= 1e-4; h /= 2) {
    FdJet cur = finite_difference(f, z, h);
    const double dg = (cur.grad - prev.grad).norm() / std::max(cur.grad_scale, 1e-12);
    const double dh = (cur.hess - prev.hess).norm() / std::max(cur.hess_scale, 1e-12);
    prev = std::move(cur);
    if (dg < 1e-8 && dh < 1e-8) break;
  }
  return prev;
}

struct FieldCase {
  std::string name;
  jets::ScalarField field;
  std::function<bool(const Point&)> admissible;
};

Outcome jet_correctness(Context& ctx) {
  using jets::ScalarField;
  const int n = 2;
  const auto curved = manifold::catalog::curved();
  // The default smoothing of u makes its max layer far thinner than any
  // usable difference step, so the weights here use 1e-2.
  const auto tw = manifold::build_tube_weight(curved, 4.0, 0.5, 1e-2);
  const auto plane = manifold::catalog::real_space(2);
  const auto tw_plane = manifold::build_tube_weight(plane, 1.0, 0.5, 1e-2);
  const ScalarField one = ScalarField::constant(n, 1.0);
  auto anywhere = [](const Point&) { return true; };
  // Points at least 0.05 from M, away from the cutoff sphere |z| = 0.5.
  auto off_m = [](const manifold::DefiningSystem& ds) {
    return [&ds](const Point& z) {
      return ds.residual(z).norm() > 0.05 && std::abs(z.norm() - 0.5) > 0.02;
    };
  };
  std::vector<FieldCase> cases = {
      {"norm_squared", ScalarField::norm_squared(n), anywhere},
      {"log_1_plus_norm_squared", jets::log(one + ScalarField::norm_squared(n)), anywhere},
      {"sqrt_1_plus_norm_squared", jets::sqrt(one + ScalarField::norm_squared(n)), anywhere},
      {"exp_x2", jets::exp(ScalarField::x(n, 1)), anywhere},
      {"log_abs_z1", 0.5 * jets::log(ScalarField::x(n, 0) * ScalarField::x(n, 0) + ScalarField::y(n, 0) * ScalarField::y(n, 0)),
       [](const Point& z) { return std::abs(z[0]) > 0.2; }},
      {"curved_w", tw.w, anywhere},
      {"curved_h", tw.h, off_m(curved)},
      {"curved_v", tw.v, off_m(curved)},
      {"curved_u_tilde", tw.u_tilde, off_m(curved)},
      {"curved_u", tw.u, off_m(curved)},
      {"plane_h", tw_plane.h, off_m(plane)},
      {"plane_u", tw_plane.u, off_m(plane)},
  };
  sampling::Rng rng(sampling::mix_seed(ctx.seed, 0x6a657473, 0));
  Table t({"field", "point", "grad_rel_err", "hess_rel_err"});
  Table summary({"field", "max_grad_rel_err", "max_hess_rel_err"});
  double worst = 0.0;
  std::string worst_name;
  constexpr int kPoints = 100;
  for (std::size_t c = 0; c < cases.size(); ++c) {
    double wg = 0.0, wh = 0.0;
    int kept = 0;
    while (kept < kPoints) {
      Point z(n);
      for (int j = 0; j < n; ++j) z[j] = cd(rng.uniform(-0.7, 0.7), rng.uniform(-0.7, 0.7));
      if (!cases[c].admissible(z)) continue;
      const jets::Jet2 exact = cases[c].field.jet(z);
      const FdJet fd = adaptive_difference(cases[c].field, z);
      const double eg = (exact.grad - fd.grad).norm() / std::max({exact.grad.norm(), fd.grad_scale, 1e-12});
      const double eh = (exact.hess - fd.hess).norm() / std::max({exact.hess.norm(), fd.hess_scale, 1e-12});
      t.add({static_cast<double>(c), static_cast<double>(kept), eg, eh});
      wg = std::max(wg, eg);
      wh = std::max(wh, eh);
      ++kept;
    }
    summary.add({static_cast<double>(c), wg, wh});
    if (std::max(wg, wh) > worst) {
      worst = std::max(wg, wh);
      worst_name = cases[c].name;
    }
  }
  save(ctx, "jets.csv", t);
  save(ctx, "jets_summary.csv", summary);
  std::string names;
  for (std::size_t c = 0; c < cases.size(); ++c) names += fmt::format("{}{}={}", c ? "," : "", c, cases[c].name);
  runner::write_text(ctx.dir / "jets_fields.txt", names + "\n");
  return {worst < kJetRelTol, fmt::format("{} fields x {} points, worst rel err {:.2e} ({})", cases.size(), kPoints,
                                          worst, worst_name)};
}

// --- 3
Outcome generating_classifier(Context& ctx) {
  using namespace manifold::catalog;
  struct Case {
    manifold::DefiningSystem ds;
    bool expected;
  };
  std::vector<Case> suite = {{real_space(2), true},  {complex_line(), false}, {small_graph(), true},
                             {curved(), true},       {siegel(), true},        {c_r_zero(), false}};
  Table t({"case", "m", "expected", "generating", "delta_min"});
  int wrong = 0;
  double r2_delta = -1.0;
  for (std::size_t i = 0; i < suite.size(); ++i) {
    const auto g = manifold::assert_generating(suite[i].ds, 256, ctx.seed);
    if (g.generating != suite[i].expected) ++wrong;
    if (i == 0) r2_delta = g.delta_min;
    t.add({static_cast<double>(i), static_cast<double>(suite[i].ds.m()), suite[i].expected ? 1.0 : 0.0,
           g.generating ? 1.0 : 0.0, g.delta_min});
  }
  save(ctx, "generating.csv", t);
  const bool exact = std::abs(r2_delta - 0.25) <= 1e-12;
  return {wrong == 0 && exact,
          fmt::format("{} misclassified of {}; delta_min(R^2) = {:.15g}", wrong, suite.size(), r2_delta)};
}

// --- 4
Outcome divisor_calibration(Context& ctx) {
  const auto t0 = Clock::now();
  const auto ball = currents::ball(Point::Zero(2), 1.0);
  sampling::Options o;
  o.seed = ctx.seed;
  o.stream = 4;
  o.samples = 1'000'000;
  o.batches = 32;
  const HoloPoly z1 = HoloPoly::variable(2, 0), z2 = HoloPoly::variable(2, 1);
  const auto line = currents::divisor_mass(z1, *ball, currents::default_epsilon(*ball), o);
  const double secs = seconds_since(t0);
  o.stream = 5;
  const auto pair = currents::divisor_mass(z1 * z2, *ball, currents::default_epsilon(*ball), o);
  const double kappa = currents::kappa(2);
  Table t({"case", "area", "area_se", "exact_area", "trace", "kappa"});
  t.add({1.0, line.area.value, line.area.se, M_PI, line.trace.value, line.kappa});
  t.add({2.0, pair.area.value, pair.area.se, 2 * M_PI, pair.trace.value, pair.kappa});
  save(ctx, "divisor_mass.csv", t);
  const double e1 = std::abs(line.area.value / M_PI - 1.0);
  const double e2 = std::abs(pair.area.value / (2 * M_PI) - 1.0);
  const bool kappa_ok = line.kappa == kappa && pair.kappa == kappa &&
                        line.trace.value == kappa * line.area.value && pair.trace.value == kappa * pair.area.value;
  return {e1 < kAreaRelTol && e2 < kAreaPairRelTol && kappa_ok && secs < kAreaSeconds,
          fmt::format("z1: {:.4f} vs pi ({:.2f}%), z1 z2: {:.4f} vs 2 pi ({:.2f}%), kappa {} reused: {}, {:.1f} s",
                      line.area.value, 100 * e1, pair.area.value, 100 * e2, kappa, yes(kappa_ok), secs)};
}

// --- 5
Outcome hyperplane_exponent(Context& ctx) {
  const Report r = run_bundled(ctx, "r2_hyperplane_tube");
  const runner::Scenario s = bundled(ctx, "r2_hyperplane_tube");
  const double radius = s.doc["profile"]["r"].get<double>();
  std::ifstream in(ctx.dir / "r2_hyperplane_tube.csv");
  std::string header, line;
  std::getline(in, header);
  Table t({"t", "ratio", "exact_ratio", "rel_err"});
  double worst = 0.0;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(ls, cell, ',')) v.push_back(std::stod(cell));
    const double exact = mass::plane_profile_exact(v[0], radius) / v[0];
    const double e = std::abs(v[3] / exact - 1.0);
    worst = std::max(worst, e);
    t.add({v[0], v[3], exact, e});
  }
  save(ctx, "r2_hyperplane_exact.csv", t);
  const double c = r.metrics.at("c_measured").get<double>();
  return {worst < kProfileRelTol && c < kAlmostMonotoneMax && !t.empty(),
          fmt::format("worst rel err vs closed form {:.2f}% over {} points, C_measured {:.4f} (< {})", 100 * worst,
                      t.rows.size(), c, kAlmostMonotoneMax)};
}

// --- 6
Outcome exact_monotonicity(Context& ctx) {
  const Report r2 = run_bundled(ctx, "r2_monotone");
  const Report r1 = run_bundled(ctx, "r1_monotone_m1");
  const double drop2 = r2.metrics.at("worst_drop_in_se").get<double>();
  const double drop1 = r1.metrics.at("worst_drop_in_se").get<double>();
  return {r2.verdict == "pass" && r1.verdict == "pass" && drop1 <= 0.0,
          fmt::format("R^2: {} (worst drop {:.3g} SE, A = {}), m = 1: {} (worst drop {:.3g} SE)", r2.verdict, drop2,
                      r2.metrics.at("a").get<double>(), r1.verdict, drop1)};
}

// --- 7
Outcome psh_inequality(Context& ctx) {
  using namespace manifold::catalog;
  struct Case {
    manifold::DefiningSystem ds;
    double inner;
  };
  std::vector<Case> cases = {{real_space(2), 0.5}, {real_plane_pair(3), 0.5}, {small_graph(), 0.5},
                             {curved(), 0.5},      {siegel(), 0.5},           {sphere(), 1.5}};
  const std::vector<double> candidates = {0.2, 0.1, 0.05};
  constexpr int kSamples = 1000;
  Table t({"case", "a", "t0", "delta_prime", "min_sqrt_coeff"});
  bool ok = true;
  double min_dp = std::numeric_limits<double>::infinity(), min_sqrt = min_dp;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& ds = cases[i].ds;
    const auto sw = manifold::sweep_a(ds, cases[i].inner, kSamples, candidates.back(), ctx.seed);
    if (!sw.a) {
      ok = false;
      t.add({static_cast<double>(i), -1.0, 0.0, sw.report.delta_prime, sw.report.min_sqrt_coeff});
      continue;
    }
    const auto t0 = manifold::select_t0(ds, *sw.a, cases[i].inner, candidates, kSamples, ctx.seed);
    const double tm = t0.value_or(candidates.back());
    const auto rep =
        manifold::verify_psh_bound(manifold::build_tube_weight(ds, *sw.a, cases[i].inner), ds, kSamples, tm, ctx.seed);
    ok = ok && t0.has_value() && rep.delta_prime > 0.0 && rep.min_sqrt_coeff >= -kSqrtCoeffTol;
    min_dp = std::min(min_dp, rep.delta_prime);
    min_sqrt = std::min(min_sqrt, rep.min_sqrt_coeff);
    t.add({static_cast<double>(i), *sw.a, tm, rep.delta_prime, rep.min_sqrt_coeff});
  }
  const auto cv = curved();
  const auto bare = manifold::verify_psh_bound(manifold::build_tube_weight(cv, 0.0, 0.5), cv, kSamples, 0.1, ctx.seed);
  t.add({-1.0, 0.0, 0.1, bare.delta_prime, bare.min_sqrt_coeff});
  save(ctx, "psh.csv", t);
  return {ok && bare.min_sqrt_coeff < 0.0,
          fmt::format("{} generating manifolds: min delta' {:.4g}, min sqrt coeff {:.4g}; curved with A = 0: {:.4g}",
                      cases.size(), min_dp, min_sqrt, bare.min_sqrt_coeff)};
}

// --- 8
Outcome convex_monotonicity(Context& ctx) {
  const Report pt = run_bundled(ctx, "convex_point");
  const Report bx = run_bundled(ctx, "convex_box");
  const double slope = pt.metrics.at("ratio_slope").get<double>();
  return {pt.verdict == "pass" && bx.verdict == "pass" && std::abs(slope - 1.0) <= kSlopeTol,
          fmt::format("point K: {}, box K: {}, point-K log-log slope {:.4f} (1 +- {})", pt.verdict, bx.verdict, slope,
                      kSlopeTol)};
}

// --- 9
Outcome counterexample(Context& ctx) {
  const Report r = run_bundled(ctx, "counterexample_c_r_zero");
  const double g = r.metrics.at("decade_growth").get<double>();
  return {r.verdict == "bound violated (expected)" && g > kCounterexampleGrowth && !r.metrics.at("generating").get<bool>(),
          fmt::format("verdict '{}', ratio grows by {:.3f} over a decade of t", r.verdict, g)};
}

// --- 10
Outcome packing_constant(Context& ctx) {
  const Report r = run_bundled(ctx, "segment_zeros");
  const double v = r.metrics.at("c_variation").get<double>();
  return {r.verdict == "pass" && v < kPackingVariation,
          fmt::format("C_measured max/min {:.4f} (< {}), |V| = {:.4f}", v, kPackingVariation,
                      r.metrics.at("mass_v").get<double>())};
}

// --- 11
Outcome hausdorff_bound(Context& ctx) {
  const Report seg = run_bundled(ctx, "segment_hausdorff");
  const Report circ = run_bundled(ctx, "circle_hausdorff");
  const double hs = seg.metrics.at("hausdorff").get<double>();
  const double hc = circ.metrics.at("hausdorff").get<double>();
  const double es = std::abs(hs / 2.0 - 1.0), ec = std::abs(hc / (2 * M_PI) - 1.0);
  const double bound = seg.metrics.at("bound").get<double>();
  const double covering = seg.metrics.at("covering_bound").get<double>();
  const bool literal = hs <= bound;
  return {es < kLengthRelTol && ec < kLengthRelTol && literal,
          fmt::format("segment {:.4f} vs 2 ({:.1f}%), circle {:.4f} vs 2 pi ({:.1f}%); H <= C |V|: {:.4f} <= {:.4f} "
                      "{} (ratio {:.3f}; c_p C |V| = {:.4f})",
                      hs, 100 * es, hc, 100 * ec, hs, bound, literal ? "holds" : "FAILS", hs / bound, covering)};
}

// --- 12
Outcome lelong_minimality(Context& ctx) {
  sampling::Options o;
  o.seed = ctx.seed;
  o.stream = 12;
  const HoloPoly z1 = HoloPoly::variable(2, 0), z2 = HoloPoly::variable(2, 1);
  Point zl(2), z0 = Point::Zero(2);
  zl << 0.3, cd(0.0, 0.1);
  const auto lin = zeros::ball_area_bound(z1 - HoloPoly::constant(2, 0.3), zl, 0.2, o);
  const auto cusp = zeros::ball_area_bound(z1 - z2 * z2, z0, 0.5, o);
  const auto cross = zeros::ball_area_bound(z1 * z2, z0, 0.5, o);
  Table t({"case", "ratio", "se", "inconclusive"});
  for (const auto* b : {&lin, &cusp, &cross})
    t.add({static_cast<double>(t.rows.size()), b->ratio, b->se, b->inconclusive ? 1.0 : 0.0});
  save(ctx, "ball_area.csv", t);
  const bool ok = std::abs(lin.ratio - 1.0) <= kLelongLinearTol && cusp.ratio >= 1.0 - 3.0 * cusp.se &&
                  std::abs(cross.ratio - 2.0) <= kLelongDoubleTol && !lin.inconclusive && !cusp.inconclusive &&
                  !cross.inconclusive;
  return {ok, fmt::format("linear {:.4f}, z1 - z2^2 {:.4f}, z1 z2 {:.4f}", lin.ratio, cusp.ratio, cross.ratio)};
}

// --- 13
Outcome nu_classifier(Context& ctx) {
  using jets::ScalarField;
  std::vector<double> sg;
  for (int i = 0; i < 8; ++i) sg.push_back(0.25 + 0.1 * i);
  const potentials::PackedCloud ball(potentials::ball_grid_cloud(2, 2.0, 40));
  const potentials::PackedCloud trace(potentials::trace_measure_cloud(
      jets::log(ScalarField::constant(2, 1.0) + ScalarField::norm_squared(2)), 2.0, 40));
  currents::ParametrizedVariety pl;
  pl.map = {HoloPoly::constant(1, 0.0), HoloPoly::variable(1, 0)};
  pl.domain = {currents::ParamFactor{currents::ParamFactor::Kind::rect, 1.0, {-2, 2}, {-2, 2}}};
  const potentials::PackedCloud plane(potentials::variety_grid_cloud(pl, 800));
  manifold::WeightedPointCloud atom;
  atom.add(Point::Zero(2), 1.0);
  const potentials::PackedCloud delta(atom);

  sampling::Rng rng(sampling::mix_seed(ctx.seed, 0x6e75, 0));
  Table t({"family", "center", "abs_center", "monotone", "expected", "max_violation"});
  int errors = 0;
  constexpr int kCenters = 50;
  auto record = [&](int family, int i, const Point& z, bool expected, const potentials::PackedCloud& c) {
    const auto v = potentials::nu_monotone(potentials::radial_mass(c, z, sg));
    if (v.monotone != expected) ++errors;
    t.add({static_cast<double>(family), static_cast<double>(i), z.norm(), v.monotone ? 1.0 : 0.0,
           expected ? 1.0 : 0.0, v.max_violation});
  };
  for (int i = 0; i < kCenters; ++i) {
    RVector v(4);
    do {
      for (int d = 0; d < 4; ++d) v[d] = rng.uniform(-1.0, 1.0);
    } while (v.norm() >= 1.0);
    const Point z = from_real(v);
    record(0, i, z, true, ball);
    record(1, i, z, true, trace);
    Point zp(2);
    zp << std::polar(rng.uniform(0.2, 0.5), rng.uniform(0.0, 2 * M_PI)), cd(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5));
    record(2, i, zp, true, plane);
    Point za(2);
    za << std::polar(rng.uniform(0.05, 0.6), rng.uniform(0.0, 2 * M_PI)), 0.0;
    record(3, i, za, false, delta);
  }
  save(ctx, "nu_classifier.csv", t);
  return {errors == 0, fmt::format("{} errors over {} centres x 4 families", errors, kCenters)};
}

// --- 14
Outcome exp_bound(Context& ctx) {
  const Report r = run_bundled(ctx, "ball_potential");
  const runner::Scenario s = bundled(ctx, "ball_potential");
  const auto& pj = s.doc["potential"];
  const int n = s.n;
  const double alpha = pj["alpha"].get<double>();
  const double radius = pj["measure"]["radius"].get<double>();
  const int base = pj["measure"]["per_axis"].get<int>();
  const auto zs = potentials::halton_ball(n, pj["z_radius"].get<double>(), pj["z_count"].get<std::size_t>());
  Table sups({"per_axis", "points", "sup_implied_c"});
  sups.add({static_cast<double>(base), 0.0, r.metrics.at("sup_implied_c").get<double>()});
  for (int per_axis : {base * 3 / 2, base * 9 / 4}) {
    const potentials::PackedCloud c(potentials::ball_grid_cloud(n, radius, per_axis));
    std::vector<double> ic(zs.size());
    sampling::parallel_for(zs.size(), [&](std::size_t i) { ic[i] = potentials::exp_bound_check(c, zs[i], alpha).implied_c; });
    sups.add({static_cast<double>(per_axis), static_cast<double>(c.size()), *std::max_element(ic.begin(), ic.end())});
  }
  save(ctx, "exp_bound_refinement.csv", sups);
  const auto sc = sups.column("sup_implied_c");
  const double hi = *std::max_element(sc.begin(), sc.end()), lo = *std::min_element(sc.begin(), sc.end());
  const bool finite = std::all_of(sc.begin(), sc.end(), [](double x) { return std::isfinite(x) && x > 0.0; });

  // Integration by parts against random step functions.
  sampling::Rng rng(sampling::mix_seed(ctx.seed, 0x696270, 0));
  Table ibp({"trial", "direct", "by_parts", "rel_err", "atom_at_center"});
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    manifold::WeightedPointCloud cloud;
    for (int i = 0; i < 200; ++i) {
      Point z(2);
      z << cd(rng.uniform(-1, 1), rng.uniform(-1, 1)), cd(rng.uniform(-1, 1), rng.uniform(-1, 1));
      cloud.add(z, rng.uniform());
    }
    Point c(2);
    c << cd(rng.uniform(-0.3, 0.3), 0.0), cd(0.0, rng.uniform(-0.3, 0.3));
    std::vector<double> sg;
    for (int i = 0; i < 8; ++i) sg.push_back(0.25 + 0.1 * i);
    const auto res = potentials::ibp_identity(potentials::radial_mass(cloud, c, sg), alpha);
    worst = std::max(worst, res.rel_err);
    ibp.add({static_cast<double>(trial), res.direct, res.by_parts, res.rel_err, res.atom_at_center ? 1.0 : 0.0});
  }
  save(ctx, "ibp.csv", ibp);
  return {finite && hi / lo <= kStabilityRatio && worst < kIbpRelTol,
          fmt::format("sup implied C {:.4f} / {:.4f} / {:.4f} over refinements (spread {:.3f}); IBP worst rel err {:.1e}",
                      sc[0], sc[1], sc[2], hi / lo, worst)};
}

// --- 15
Outcome kernel_exponent(Context& ctx) {
  const Report r = run_bundled(ctx, "r2_kernel");
  const double slope = r.metrics.at("slope").get<double>();
  const double expected = r.metrics.at("expected_slope").get<double>();
  return {std::abs(slope - expected) <= kSlopeTol,
          fmt::format("slope {:.4f}, expected {:.4f} +- {}", slope, expected, kSlopeTol)};
}

// --- 16
Outcome exp_integrability(Context& ctx) {
  const Report good = run_bundled(ctx, "log_z1_expint");
  const Report bad = run_bundled(ctx, "log_z1_expint_divergent");
  const double last = good.metrics.at("last").get<double>();
  const double e = std::abs(last / 8.0 - 1.0);
  return {good.verdict == "pass" && e < kExpIntegralRelTol && bad.verdict == "not confirmed",
          fmt::format("alpha = 1/2: {} at {:.4f} ({:.2f}% from 8); alpha = 2: {}", good.verdict, last, 100 * e, bad.verdict)};
}

// --- 17
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism(Context& ctx) {
  const std::vector<std::string> names = {"forms_wedge", "r2_hyperplane_tube", "segment_zeros", "ball_potential"};
  int differ = 0, compared = 0;
  for (const auto& name : names) {
    const Report a = run_bundled(ctx, name, ctx.dir / "a");
    const Report b = run_bundled(ctx, name, ctx.dir / "b");
    for (const auto& table : a.tables) {
      ++compared;
      if (slurp(ctx.dir / "a" / table) != slurp(ctx.dir / "b" / table)) ++differ;
    }
  }
  return {differ == 0 && compared > 0 && ctx.suite_elapsed < kSuiteSeconds,
          fmt::format("{} of {} CSVs differ between reruns; suite time so far {:.1f} s (< {} s)", differ, compared,
                      ctx.suite_elapsed, kSuiteSeconds)};
}

using Check = Outcome (*)(Context&);

struct Entry {
  Criterion criterion;
  Check check;
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> all = {
      {{1, "forms", "wedge coefficients match the exterior-algebra oracle"}, forms_algebra},
      {{2, "jets", "jets match finite differences"}, jet_correctness},
      {{3, "generating", "generating classifier"}, generating_classifier},
      {{4, "divisor-mass", "coarea divisor mass calibration"}, divisor_calibration},
      {{5, "tube-mass", "hyperplane tube profile and exponent"}, hyperplane_exponent},
      {{6, "monotone", "exact monotonicity of sigma_u"}, exact_monotonicity},
      {{7, "psh", "psh lower bound and the need for A"}, psh_inequality},
      {{8, "convex", "convex-set tube profiles"}, convex_monotonicity},
      {{9, "counterexample", "non-generating counterexample"}, counterexample},
      {{10, "zeros", "packing constant stable across epsilon"}, packing_constant},
      {{11, "hausdorff", "Hausdorff length and bound"}, hausdorff_bound},
      {{12, "lelong", "ball-area minimality"}, lelong_minimality},
      {{13, "nu", "nu-monotonicity classifier"}, nu_classifier},
      {{14, "potential", "exponential potential bound and integration by parts"}, exp_bound},
      {{15, "kernel", "kernel exponent on M"}, kernel_exponent},
      {{16, "expint", "clipped exponential integrability"}, exp_integrability},
      {{17, "determinism", "byte-identical reruns within the time budget"}, determinism},
  };
  return all;
}

bool matches(const Criterion& c, const std::string& filter) {
  if (filter.empty()) return true;
  if (filter == std::to_string(c.id)) return true;
  return c.tag.find(filter) != std::string::npos;
}

}  // namespace

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = [] {
    std::vector<Criterion> out;
    for (const auto& e : entries()) out.push_back(e.criterion);
    return out;
  }();
  return all;
}

std::vector<Criterion> select(const std::string& filter) {
  std::vector<Criterion> out;
  for (const auto& c : criteria())
    if (matches(c, filter)) out.push_back(c);
  return out;
}

bool SuiteReport::all_passed() const {
  return std::all_of(results.begin(), results.end(), [](const CriterionResult& r) { return r.pass; });
}

fs::path default_scenario_dir() { return TUBEMASS_SCENARIO_DIR; }

SuiteReport verify_suite(const SuiteOptions& options) {
  const auto t0 = Clock::now();
  SuiteReport report;
  for (const auto& e : entries()) {
    if (!matches(e.criterion, options.filter)) continue;
    Context ctx;
    ctx.dir = options.out / fmt::format("c{:02d}_{}", e.criterion.id, e.criterion.tag);
    ctx.scenarios = options.scenarios.empty() ? default_scenario_dir() : options.scenarios;
    ctx.seed = options.seed.value_or(kDefaultSeed);
    ctx.seed_override = options.seed.has_value();
    ctx.suite_elapsed = seconds_since(t0);
    std::error_code ec;
    fs::create_directories(ctx.dir, ec);
    CriterionResult r;
    r.criterion = e.criterion;
    const auto c0 = Clock::now();
    try {
      if (ec) throw Error(fmt::format("cannot create {}: {}", ctx.dir.string(), ec.message()));
      const Outcome o = e.check(ctx);
      r.pass = o.pass;
      r.detail = o.detail;
    } catch (const std::exception& ex) {
      r.pass = false;
      r.detail = fmt::format("error: {}", ex.what());
    }
    r.seconds = seconds_since(c0);
    if (e.criterion.id == 17) r.detail += fmt::format(", total {:.1f} s", seconds_since(t0));
    r.outputs = std::move(ctx.outputs);
    report.results.push_back(std::move(r));
  }
  report.seconds = seconds_since(t0);
  return report;
}

std::string matrix(const SuiteReport& report) {
  std::string out;
  for (const auto& r : report.results)
    out += fmt::format("{}  #{:<2d} {:<15s} {}: {} [{:.1f} s]\n", r.pass ? "PASS" : "FAIL", r.criterion.id,
                       r.criterion.tag, r.criterion.title, r.detail, r.seconds);
  const auto passed = std::count_if(report.results.begin(), report.results.end(),
                                    [](const CriterionResult& r) { return r.pass; });
  out += fmt::format("{} of {} criteria passed in {:.1f} s\n", passed, report.results.size(), report.seconds);
  return out;
}

}  // namespace tubemass::verify
