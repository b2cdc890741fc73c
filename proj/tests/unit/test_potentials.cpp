#include <doctest.h>

#include <cmath>

#include "tubemass/manifold.hpp"
#include "tubemass/potentials.hpp"

using namespace tubemass;
using namespace tubemass::potentials;

TEST_CASE("kernel integral over R^2: frozen values") {
  const auto ds = manifold::catalog::real_space(2, 2.0);
  const sampling::Box k({{-1.0, 1.0}, {-1.0, 1.0}});
  RVector foot(2);
  foot << 0.0, 0.0;
  const std::vector<double> deltas = {1e-3, 1e-2, 1e-1};
  const auto sw = kernel_sweep(ds, k, foot, 0.5, deltas, 8);
  REQUIRE(sw.rows.size() == 3);
  CHECK(sw.rows[0].value == doctest::Approx(385.47468381).epsilon(1e-8));
  CHECK(sw.rows[1].value == doctest::Approx(113.75510276).epsilon(1e-8));
  CHECK(sw.rows[2].value == doctest::Approx(27.85396387).epsilon(1e-8));
  CHECK(sw.expected_slope == doctest::Approx(-0.5));
}

TEST_CASE("radial mass is an exact step function") {
  WeightedPointCloud mu;
  Point p = Point::Zero(2);
  p[0] = cd(0.5, 0.0);
  mu.add(p, 1.0);
  p[0] = cd(1.0, 0.0);
  mu.add(p, 2.0);
  const std::vector<double> s = {0.25, 0.5, 0.75, 1.0, 1.5};
  const auto rm = radial_mass(mu, Point::Zero(2), s);
  CHECK(rm.mu(0.5) == 0.0);
  CHECK(rm.mu_closed(0.5) == 1.0);
  CHECK(rm.mu(0.75) == 1.0);
  CHECK(rm.mu(1.5) == 3.0);
  CHECK(rm.nu(0.75) == doctest::Approx(1.0 / 0.5625));
}

TEST_CASE("Newton potential and the exponential bound for one atom") {
  WeightedPointCloud mu;
  Point a = Point::Zero(2);
  a[1] = cd(0.0, 0.5);
  mu.add(a, 4.0);
  const auto u = newton_potential(mu, Point::Zero(2));
  CHECK(u.value == doctest::Approx(16.0));
  const auto eb = exp_bound_check(mu, Point::Zero(2), 0.5);
  CHECK(eb.scale == doctest::Approx(0.25));
  CHECK(eb.potential == doctest::Approx(4.0));
  CHECK(eb.lhs == doctest::Approx(std::exp(1.0)));
  CHECK(eb.rhs == doctest::Approx(std::pow(0.5, -2.5)));
  CHECK(exp_bound_check(mu, a, 0.5).excluded);
}

TEST_CASE("integration by parts identity on a random cloud") {
  const auto cloud = ball_grid_cloud(2, 1.0, 8);
  const std::vector<double> s = {0.1, 0.2, 0.5, 1.0};
  Point z = Point::Zero(2);
  z[0] = cd(0.013, 0.021);
  const auto rm = radial_mass(cloud, z, s);
  const auto ibp = ibp_identity(rm, 0.5);
  CHECK(ibp.rel_err < 1e-10);
}

TEST_CASE("ball grid volume") {
  const auto cloud = ball_grid_cloud(1, 1.0, 200);
  CHECK(cloud.total_mass() == doctest::Approx(M_PI).epsilon(1e-3));
}

TEST_CASE("clipped exponential integral of a constant") {
  const auto phi = jets::ScalarField::constant(1, -1.0);
  WeightedPointCloud cloud;
  cloud.add(Point::Zero(1), 2.0);
  const std::vector<double> levels = {1.0, std::exp(-2.0)};
  const auto ei = exp_integral(phi, cloud, 1.0, levels);
  REQUIRE(ei.levels.size() == 2);
  CHECK(ei.levels[0].estimate == doctest::Approx(2.0));
  CHECK(ei.levels[1].estimate == doctest::Approx(2.0 * std::exp(1.0)));
  CHECK(ei.converged == false);
}

TEST_CASE("Halton points stay in the ball") {
  const auto pts = halton_ball(2, 0.7, 200);
  CHECK(pts.size() == 200);
  for (const auto& p : pts) CHECK(p.norm() < 0.7);
}
