#include <doctest.h>

#include <cstring>

#include "tubemass/kernels.hpp"
#include "tubemass/sampling.hpp"

using namespace tubemass;
using namespace tubemass::kernels;

namespace {

PointBlock random_block(int dim, std::size_t count, std::uint64_t seed) {
  PointBlock b(dim, count);
  b.count = count;
  sampling::Rng rng(seed);
  for (int d = 0; d < dim; ++d)
    for (std::size_t i = 0; i < count; ++i) b.row(d)[i] = rng.uniform(-1.5, 1.5);
  return b;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("holomorphic batch evaluation: scalar reference matches direct evaluation") {
  const HoloPoly z1 = HoloPoly::variable(2, 0), z2 = HoloPoly::variable(2, 1);
  const HoloPoly f = z1 * z1 * z2 + z2 * cd(0.5, -2.0) + HoloPoly::constant(2, cd(1.0, 1.0));
  const HoloPlan plan(f);
  const auto b = random_block(4, 37, 5);
  HoloValues v;
  holo_eval_batch(plan, b, v, Backend::scalar);
  for (std::size_t i = 0; i < b.count; ++i) {
    CVector z(2);
    z << cd(b.row(0)[i], b.row(2)[i]), cd(b.row(1)[i], b.row(3)[i]);
    const cd fv = f.value(z);
    CHECK(v.re[i] == doctest::Approx(fv.real()).epsilon(1e-12));
    CHECK(v.im[i] == doctest::Approx(fv.imag()).epsilon(1e-12));
    CHECK(v.grad_sq[i] == doctest::Approx(f.gradient(z).squaredNorm()).epsilon(1e-12));
  }
}

TEST_CASE("AVX2 kernels are bit-identical to the scalar reference") {
  if (!avx2_available()) {
    MESSAGE("AVX2 not available; equivalence test skipped");
    return;
  }
  const HoloPoly z1 = HoloPoly::variable(3, 0), z2 = HoloPoly::variable(3, 1), z3 = HoloPoly::variable(3, 2);
  const std::vector<HoloPoly> polys = {z1, z1 * z2, z1 * z1 * z1 - z2 * z3 * cd(0.0, 3.0),
                                       (z1 + z2 + z3) * (z1 - z2) * cd(0.25, 0.5) + HoloPoly::constant(3, -1.0)};
  for (std::size_t count : {1u, 3u, 4u, 5u, 17u, 1000u}) {
    const auto b = random_block(6, count, count);
    for (const auto& f : polys) {
      const HoloPlan plan(f);
      HoloValues s, a;
      holo_eval_batch(plan, b, s, Backend::scalar);
      holo_eval_batch(plan, b, a, Backend::avx2);
      CHECK(same_bits(s.re, a.re));
      CHECK(same_bits(s.im, a.im));
      CHECK(same_bits(s.grad_sq, a.grad_sq));
    }
    std::vector<double> q = {0.1, -0.2, 0.3, 0.4, -0.5, 0.6};
    std::vector<double> ds(count), da(count);
    sq_dist_batch(b, q, ds, Backend::scalar);
    sq_dist_batch(b, q, da, Backend::avx2);
    CHECK(same_bits(ds, da));
    for (std::size_t i = 0; i < count; ++i) {
      double e = 0.0;
      for (int d = 0; d < 6; ++d) e += (b.row(d)[i] - q[static_cast<std::size_t>(d)]) * (b.row(d)[i] - q[static_cast<std::size_t>(d)]);
      CHECK(ds[i] == doctest::Approx(e).epsilon(1e-15));
    }
  }
}

TEST_CASE("backend names") {
  CHECK(backend_name(Backend::scalar) == "scalar");
  CHECK(backend_name(Backend::avx2) == "avx2");
}
