#include <doctest.h>

#include <cmath>

#include "tubemass/currents.hpp"
#include "tubemass/forms.hpp"
#include "tubemass/sampling.hpp"
#include "tubemass/verify/exterior_algebra.hpp"

using namespace tubemass;
using forms::HermitianForm;

namespace {

HermitianForm random_form(int n, sampling::Rng& rng) {
  CMatrix a(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) a(r, c) = cd(rng.normal(), rng.normal());
  return HermitianForm(a);
}

}  // namespace

TEST_CASE("kappa is 2^(n-1)") {
  CHECK(currents::kappa(1) == 1.0);
  CHECK(currents::kappa(2) == 2.0);
  CHECK(currents::kappa(3) == 4.0);
  CHECK(currents::kappa(4) == 8.0);
}

TEST_CASE("beta^n has coefficient one") {
  for (int n = 1; n <= 4; ++n) {
    std::vector<HermitianForm> fs(static_cast<std::size_t>(n), HermitianForm::identity(n));
    CHECK(forms::wedge_coefficient(fs, n) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(verify::wedge_oracle(fs, n) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("diagonal forms: coefficient is the product of entries over n!") {
  // w_D^n = n! det(D) / n! ... for a single diagonal form repeated, the
  // coefficient of beta^n is det D.
  const double d[] = {2.0, 3.0, 0.5};
  const auto f = HermitianForm::diagonal(d);
  std::vector<HermitianForm> fs(3, f);
  CHECK(forms::wedge_coefficient(fs, 3) == doctest::Approx(3.0).epsilon(1e-13));
  // one copy against beta^2: trace / n
  std::vector<HermitianForm> one{f};
  CHECK(forms::wedge_coefficient(one, 3) == doctest::Approx((2.0 + 3.0 + 0.5) / 3.0).epsilon(1e-13));
  CHECK(forms::trace_density(f) == doctest::Approx(5.5 / 3.0));
}

TEST_CASE("wedge coefficient agrees with the exterior-algebra oracle") {
  sampling::Rng rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + trial % 4;
    const int k = 1 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(n));
    std::vector<HermitianForm> fs;
    for (int i = 0; i < k; ++i) fs.push_back(random_form(n, rng));
    const double v = forms::wedge_coefficient(fs, n);
    const double o = verify::wedge_oracle(fs, n);
    CHECK(std::abs(v - o) <= 1e-10 * std::max(1.0, std::abs(o)));
  }
}

TEST_CASE("mixed discriminant is multilinear and symmetric") {
  sampling::Rng rng(3);
  const int n = 3;
  std::vector<CMatrix> m;
  for (int i = 0; i < n; ++i) m.push_back(random_form(n, rng).matrix());
  const cd base = forms::mixed_discriminant(m);
  std::vector<CMatrix> swapped = {m[2], m[0], m[1]};
  CHECK(std::abs(forms::mixed_discriminant(swapped) - base) < 1e-12 * std::abs(base) + 1e-14);
  std::vector<CMatrix> scaled = m;
  scaled[1] *= cd(2.0, -1.0);
  CHECK(std::abs(forms::mixed_discriminant(scaled) - cd(2.0, -1.0) * base) < 1e-12 * std::abs(base) + 1e-14);
  std::vector<CMatrix> same(3, m[0]);
  CHECK(std::abs(forms::mixed_discriminant(same) - m[0].determinant()) < 1e-12 * std::abs(m[0].determinant()) + 1e-14);
}

TEST_CASE("positivity and lower bounds") {
  const double d[] = {1.0, 4.0};
  const auto f = HermitianForm::diagonal(d);
  CHECK(forms::is_positive(f, 0.0));
  CHECK_FALSE(forms::is_positive(f * -1.0, 1e-9));
  CHECK(forms::power_lower_bound(f, 0) == doctest::Approx(1.0));
  // w_A ^ beta^0 in C^2 against beta: n * lambda_min of the dual = smallest entry.
  CHECK(forms::power_lower_bound(f, 1) == doctest::Approx(1.0));
  CVector a(2);
  a << cd(1.0, 0.0), cd(0.0, 1.0);
  const auto r1 = HermitianForm::rank_one(a);
  CHECK(r1.min_eigenvalue() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(r1.trace() == doctest::Approx(2.0));
}
