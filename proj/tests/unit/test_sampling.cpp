#include <doctest.h>

#include <atomic>
#include <cmath>

#include "tubemass/quadrature.hpp"
#include "tubemass/sampling.hpp"

using namespace tubemass;

TEST_CASE("seed mixing is deterministic and stream-separated") {
  CHECK(sampling::mix_seed(1, 2, 3) == sampling::mix_seed(1, 2, 3));
  CHECK(sampling::mix_seed(1, 2, 3) != sampling::mix_seed(1, 2, 4));
  CHECK(sampling::mix_seed(1, 2, 3) != sampling::mix_seed(1, 3, 3));
  sampling::Rng a(9), b(9);
  for (int i = 0; i < 10; ++i) CHECK(a.uniform() == b.uniform());
}

TEST_CASE("log-log slope of a power law") {
  const std::vector<double> x = {0.1, 0.2, 0.4, 0.8};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * std::pow(v, -1.5));
  CHECK(sampling::loglog_slope(x, y) == doctest::Approx(-1.5).epsilon(1e-12));
}

TEST_CASE("Monte Carlo integral of a polynomial over a box") {
  sampling::Box box({{0.0, 1.0}, {0.0, 2.0}});
  std::vector<sampling::Box> cells{box};
  sampling::Options o;
  o.seed = 5;
  o.samples = 200000;
  const auto est = sampling::integrate(
      cells,
      [](const kernels::PointBlock& b, std::span<double> out) {
        for (std::size_t i = 0; i < b.count; ++i) out[i] = b.row(0)[i] * b.row(1)[i];
      },
      o);
  // integral of x y over [0,1]x[0,2] = 1
  CHECK(std::abs(est.value - 1.0) < 4.0 * est.se + 1e-12);
  CHECK(est.se > 0.0);
  const auto again = sampling::integrate(
      cells,
      [](const kernels::PointBlock& b, std::span<double> out) {
        for (std::size_t i = 0; i < b.count; ++i) out[i] = b.row(0)[i] * b.row(1)[i];
      },
      o);
  CHECK(again.value == est.value);
}

TEST_CASE("parallel_for visits every index once") {
  std::vector<std::atomic<int>> hits(1000);
  sampling::parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; });
  for (auto& h : hits) CHECK(h.load() == 1);
}

TEST_CASE("Gauss-Legendre is exact for degree 2n-1") {
  const auto r = quadrature::gauss_legendre(5, -1.0, 2.0);
  double s = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], 9);
  CHECK(s == doctest::Approx((std::pow(2.0, 10) - 1.0) / 10.0).epsilon(1e-13));
}

TEST_CASE("graded rule resolves an inverse square-root singularity") {
  const auto r = quadrature::graded_rule(-1.0, 1.0, 0.0, 1e-12, 8);
  double s = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] / std::sqrt(std::abs(r.nodes[i]));
  CHECK(s == doctest::Approx(4.0).epsilon(1e-5));
  double len = 0.0;
  for (double w : r.weights) len += w;
  CHECK(len == doctest::Approx(2.0).epsilon(1e-14));
}
