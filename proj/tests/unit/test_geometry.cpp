#include <doctest.h>

#include <cmath>
#include <memory>

#include "tubemass/currents.hpp"
#include "tubemass/manifold.hpp"
#include "tubemass/mass_profile.hpp"
#include "tubemass/region.hpp"

using namespace tubemass;
using namespace tubemass::manifold;

TEST_CASE("generating test separates the catalog") {
  CHECK(assert_generating(catalog::real_space(2), 64, 1).generating);
  CHECK(assert_generating(catalog::small_graph(), 64, 1).generating);
  CHECK(assert_generating(catalog::curved(), 64, 1).generating);
  CHECK(assert_generating(catalog::siegel(), 64, 1).generating);
  CHECK_FALSE(assert_generating(catalog::complex_line(), 64, 1).generating);
  CHECK_FALSE(assert_generating(catalog::c_r_zero(), 64, 1).generating);
  // d(y_j) = (i/2)... singular values of the R^2 defining system are 1/2.
  CHECK(assert_generating(catalog::real_space(2), 16, 1).delta_min == doctest::Approx(0.25));
}

TEST_CASE("distance to R^n is |Im z|") {
  const auto ds = catalog::real_space(2, 2.0);
  Point z(2);
  z << cd(0.3, 0.4), cd(-0.2, -0.3);
  const auto pr = ds.project(z);
  CHECK(pr.distance == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(pr.foot[0] - cd(0.3, 0.0)) < 1e-12);
}

TEST_CASE("distance to the unit sphere") {
  const auto ds = catalog::sphere();
  Point z(2);
  z << cd(0.6, 0.0), cd(0.0, 0.8);
  z *= 1.5;
  CHECK(ds.distance(z) == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("surface area of the unit square patch of R^2") {
  const auto ds = catalog::real_space(2, 2.0);
  const Box sub({{-0.5, 0.5}, {-0.5, 0.5}});
  const auto cloud = sample_surface(ds, sub, 1000, 7);
  CHECK(cloud.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
  const std::vector<quadrature::Rule> rules = {quadrature::gauss_legendre(4, -1.0, 1.0),
                                               quadrature::gauss_legendre(4, -1.0, 1.0)};
  CHECK(tensor_surface(ds, rules).total_mass() == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("tube weights for R^2 pass the psh check") {
  const auto ds = catalog::real_space(2, 2.0);
  const auto tw = build_tube_weight(ds, 1.0, 0.5);
  const auto rep = verify_psh_bound(tw, ds, 64, 0.2, 3);
  CHECK(rep.passed());
  CHECK(rep.delta_prime > 0.0);
}

TEST_CASE("divisor mass of z1 in the unit ball") {
  const HoloPoly f = HoloPoly::variable(2, 0);
  sampling::Options o;
  o.seed = 11;
  o.samples = 400000;
  const auto est = currents::divisor_mass(f, *currents::ball(Point::Zero(2), 1.0), 0.02, o);
  // area pi, trace kappa_2 * pi
  CHECK(std::abs(est.trace.value - 2.0 * M_PI) < 0.02 * 2.0 * M_PI);
  CHECK(est.kappa == 2.0);
}

TEST_CASE("variety quadrature of a complex line") {
  currents::ParametrizedVariety v;
  v.map = {HoloPoly::variable(1, 0), HoloPoly::constant(1, 0.0)};
  v.domain = {currents::ParamFactor{currents::ParamFactor::Kind::disc, 1.0, {}, {}}};
  const auto m = currents::variety_mass(v, *currents::ball(Point::Zero(2), 2.0));
  CHECK(m.area == doctest::Approx(M_PI).epsilon(1e-6));
  CHECK(m.trace == doctest::Approx(2.0 * M_PI).epsilon(1e-6));
}

TEST_CASE("smooth trace density of |z|^2") {
  const auto d = currents::trace_density_smooth(jets::ScalarField::norm_squared(2), Point::Zero(2));
  CHECK(d.density == doctest::Approx(8.0));
  CHECK(d.psh);
  CHECK_THROWS_AS(currents::make_divisor(HoloPoly(2)), DomainError);
}

TEST_CASE("grids and the plane profile") {
  const auto g = mass::geometric_grid(0.5, 12, 100.0);
  REQUIRE(g.size() == 12);
  CHECK(g.front() == doctest::Approx(0.005));
  CHECK(g.back() == doctest::Approx(0.5));
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
  // small t: sigma ~ kappa * 4 r t
  CHECK(mass::plane_profile_exact(1e-6, 0.9) / 1e-6 == doctest::Approx(2.0 * 4.0 * 0.9).epsilon(1e-6));
  CHECK(mass::plane_profile_exact(2.0, 0.9) == doctest::Approx(2.0 * M_PI * 0.81));
}

TEST_CASE("profile of the plane divisor matches the closed form") {
  auto ds = std::make_shared<const DefiningSystem>(catalog::real_space(2, 2.0));
  const auto current = currents::make_divisor(HoloPoly::variable(2, 0));
  const std::vector<double> t = {0.05, 0.2};
  mass::SamplingSpec spec;
  spec.seed = 21;
  spec.samples = 200000;
  const auto prof = mass::sigma_profile(current, ds, 0.9, t, spec);
  REQUIRE(prof.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    const double exact = mass::plane_profile_exact(t[i], 0.9);
    CHECK(std::abs(prof.sigma[i] - exact) < 0.03 * exact);
  }
}

TEST_CASE("monotone report on a synthetic profile") {
  mass::MassProfile p;
  p.t = {0.1, 0.2, 0.4};
  p.ratio = {1.0, 1.1, 0.9};
  p.ratio_se = {0.0, 0.0, 0.0};
  p.sigma = p.ratio;
  p.se = p.ratio_se;
  const auto r = mass::almost_monotone_report(p);
  CHECK(r.c_measured == doctest::Approx(1.1 / 0.9));
  CHECK(r.t == doctest::Approx(0.2));
  CHECK(r.s == doctest::Approx(0.4));
  p.ratio_se = {0.01, 0.01, 0.01};
  CHECK_FALSE(mass::check_nondecreasing(p, 3.0).ok);
}

TEST_CASE("convex tube membership") {
  currents::ConvexBody seg;
  seg.kind = currents::ConvexBody::Kind::segment;
  seg.a = {-1.0, 0.0};
  seg.b = {1.0, 0.0};
  const double x[] = {2.0, 0.0};
  CHECK(seg.distance(x) == doctest::Approx(1.0));
  const auto reg = currents::convex_tube(seg, 0.5);
  RVector xi(4);
  xi << 0.0, 0.3, 0.0, 0.3;
  CHECK(reg->contains(xi));
  xi << 0.0, 0.4, 0.0, 0.4;
  CHECK_FALSE(reg->contains(xi));
}
