#include <doctest.h>

#include <cmath>

#include "tubemass/jets.hpp"

using namespace tubemass;
using jets::ScalarField;

TEST_CASE("|z|^2 has identity Levi form") {
  const auto f = ScalarField::norm_squared(3);
  Point z(3);
  z << cd(0.1, 0.2), cd(-0.3, 0.4), cd(0.5, -0.6);
  const auto j = f.jet(z);
  CHECK(j.value == doctest::Approx(z.squaredNorm()));
  CHECK((j.hess - CMatrix::Identity(3, 3)).norm() < 1e-14);
  // d|z|^2/dz_j = conj(z_j)
  for (int k = 0; k < 3; ++k) CHECK(std::abs(j.grad[k] - std::conj(z[k])) < 1e-14);
}

TEST_CASE("y1^2 has d^2/dz dzbar = 1/2") {
  const auto y = ScalarField::y(2, 0);
  const auto f = y * y;
  Point z(2);
  z << cd(0.3, 0.7), cd(1.0, -1.0);
  const auto j = f.jet(z);
  CHECK(j.hess(0, 0).real() == doctest::Approx(0.5));
  CHECK(std::abs(j.hess(1, 1)) < 1e-14);
  // d(y^2)/dz = 2y * (-i/2) = -i y
  CHECK(std::abs(j.grad[0] - cd(0.0, -0.7)) < 1e-14);
}

TEST_CASE("log(1 + |z|^2) at the origin") {
  const auto f = jets::log(ScalarField::constant(2, 1.0) + ScalarField::norm_squared(2));
  const auto j = f.jet(Point::Zero(2));
  CHECK(j.value == doctest::Approx(0.0));
  CHECK((j.hess - CMatrix::Identity(2, 2)).norm() < 1e-14);
}

TEST_CASE("log|z1| is pluriharmonic away from z1 = 0") {
  const auto x = ScalarField::x(2, 0), y = ScalarField::y(2, 0);
  const auto f = 0.5 * jets::log(x * x + y * y);
  Point z(2);
  z << cd(0.4, -0.3), cd(0.2, 0.1);
  const auto j = f.jet(z);
  CHECK(j.value == doctest::Approx(std::log(0.5)));
  CHECK(j.hess.norm() < 1e-12);
  // d log|z|/dz = 1 / (2 z)
  CHECK(std::abs(j.grad[0] - 1.0 / (2.0 * z[0])) < 1e-12);
}

TEST_CASE("chain rule outside the domain throws") {
  const auto f = jets::log(ScalarField::x(1, 0));
  Point z(1);
  z << cd(-1.0, 0.0);
  CHECK_THROWS_AS(f.jet(z), DomainError);
}

TEST_CASE("smooth max tends to max") {
  CHECK(jets::smooth_max_value(1.0, 2.0, 1e-9) == doctest::Approx(2.0));
  CHECK(jets::smooth_max_value(1.0, 1.0, 0.2) == doctest::Approx(1.1));
}
