#include <doctest.h>

#include <cmath>

#include "tubemass/manifold.hpp"
#include "tubemass/zero_geometry.hpp"

using namespace tubemass;
using namespace tubemass::zeros;

TEST_CASE("zeros of z1 on R^2: frozen counts") {
  const auto ds = manifold::catalog::real_space(2, 2.0);
  const Box k({{-1.0, 1.0}, {-1.0, 1.0}});
  const auto zs = zeros_on_M(HoloPoly::variable(2, 0), ds, k, 400);
  CHECK(zs.points.size() == 400);
  CHECK(zs.skipped == 0);
  for (const auto& p : zs.points) CHECK(std::abs(p[0]) < 1e-10);
  const std::vector<double> eps = {0.1, 0.05, 0.025};
  const auto hs = hausdorff_estimate(zs.points, eps, 1, PackOrder::chain);
  REQUIRE(hs.size() == 3);
  CHECK(hs[0].n == 10);
  CHECK(hs[1].n == 20);
  CHECK(hs[2].n == 39);
  for (double e : eps) CHECK(is_separated(greedy_pack(zs.points, e, PackOrder::chain)));
}

TEST_CASE("packing edge cases") {
  const std::vector<Point> none;
  CHECK(greedy_pack(none, 0.1).n == 0);
  std::vector<Point> one(1, Point::Zero(2));
  CHECK(greedy_pack(one, 0.1).n == 1);
  std::vector<Point> two(2, Point::Zero(2));
  two[1][0] = cd(0.15, 0.0);
  CHECK(greedy_pack(two, 0.1).n == 1);
  two[1][0] = cd(0.25, 0.0);
  CHECK(greedy_pack(two, 0.1).n == 2);
  const auto pr = greedy_pack(two, 0.1);
  CHECK(packing_bound(pr, 0.0, 2, 2).inconsistent);
}

TEST_CASE("unit ball volumes") {
  CHECK(unit_ball_volume(0) == doctest::Approx(1.0));
  CHECK(unit_ball_volume(1) == doctest::Approx(2.0));
  CHECK(unit_ball_volume(2) == doctest::Approx(M_PI));
  CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * M_PI / 3.0));
  CHECK(unit_ball_volume(4) == doctest::Approx(M_PI * M_PI / 2.0));
}

TEST_CASE("ball area of a complex line is one") {
  sampling::Options o;
  o.seed = 4;
  o.samples = 200000;
  const auto r = ball_area_bound(HoloPoly::variable(2, 0), Point::Zero(2), 0.3, o);
  CHECK(r.ratio == doctest::Approx(1.0).epsilon(0.03));
}
