#include "tubemass/kernels.hpp"

#include <cstdlib>
#include <cstring>

#include <fmt/format.h>

namespace tubemass::kernels {

namespace {

HoloPlan::Poly flatten(const HoloPoly& p, int nvars) {
  HoloPlan::Poly out;
  for (const auto& t : p.terms()) {
    for (int j = 0; j < nvars; ++j) out.exponents.push_back(t.exponents[j]);
    out.coeff_re.push_back(t.coeff.real());
    out.coeff_im.push_back(t.coeff.imag());
  }
  return out;
}

}  // namespace

HoloPlan::HoloPlan(const HoloPoly& f) : nvars_(f.nvars()), max_exponent_(f.max_exponent()) {
  check_dim(nvars_);
  if (max_exponent_ > 31) throw DomainError("holomorphic polynomial exponent above 31");
  value_ = flatten(f, nvars_);
  for (int j = 0; j < nvars_; ++j) partials_.push_back(flatten(f.derivative(j), nvars_));
}

PointBlock::PointBlock(int dim, std::size_t capacity)
    : dim(dim), count(0), stride(capacity), data(static_cast<std::size_t>(dim) * capacity, 0.0) {}

bool avx2_available() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Backend default_backend() {
  static const Backend chosen = [] {
    const char* env = std::getenv("TUBEMASS_SIMD");
    if (env && std::strcmp(env, "scalar") == 0) return Backend::scalar;
    return avx2_available() ? Backend::avx2 : Backend::scalar;
  }();
  return chosen;
}

std::string_view backend_name(Backend b) { return b == Backend::avx2 ? "avx2" : "scalar"; }

namespace {

void require(Backend b) {
  if (b == Backend::avx2 && !avx2_available()) throw Error("AVX2 backend requested on a CPU without AVX2");
}

}  // namespace

void holo_eval_batch(const HoloPlan& plan, const PointBlock& block, HoloValues& out, Backend backend) {
  if (block.dim != 2 * plan.nvars())
    throw DimensionError(fmt::format("point block of dimension {} for {} complex variables", block.dim, plan.nvars()));
  out.re.resize(block.count);
  out.im.resize(block.count);
  out.grad_sq.resize(block.count);
  const detail::HoloArgs args{&plan, &block, 0, block.count, out.re.data(), out.im.data(), out.grad_sq.data()};
  require(backend);
  if (backend == Backend::avx2)
    detail::holo_eval_avx2(args);
  else
    detail::holo_eval_scalar(args);
}

void holo_eval_batch(const HoloPlan& plan, const PointBlock& block, HoloValues& out) {
  holo_eval_batch(plan, block, out, default_backend());
}

void sq_dist_batch(const PointBlock& block, std::span<const double> q, std::span<double> out, Backend backend) {
  if (static_cast<int>(q.size()) != block.dim) throw DimensionError("query point dimension mismatch");
  if (out.size() < block.count) throw DimensionError("output span shorter than block");
  const detail::DistArgs args{&block, q.data(), 0, block.count, out.data()};
  require(backend);
  if (backend == Backend::avx2)
    detail::sq_dist_avx2(args);
  else
    detail::sq_dist_scalar(args);
}

void sq_dist_batch(const PointBlock& block, std::span<const double> q, std::span<double> out) {
  sq_dist_batch(block, q, out, default_backend());
}

}  // namespace tubemass::kernels
