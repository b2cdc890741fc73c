#pragma once

// Batched hot loops with a scalar reference and an AVX2 variant. Both variants
// perform the same sequence of IEEE operations (no FMA, no reassociation) and
// are required to agree bit for bit.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "tubemass/polynomial.hpp"

namespace tubemass::kernels {

enum class Backend { scalar, avx2 };

bool avx2_available();
/// Backend used when none is requested: AVX2 when the CPU has it, unless the
/// environment variable TUBEMASS_SIMD is set to "scalar".
Backend default_backend();
std::string_view backend_name(Backend b);

/// A holomorphic polynomial and its partial derivatives laid out for batch
/// evaluation.
class HoloPlan {
 public:
  struct Poly {
    std::vector<std::uint8_t> exponents;  // terms x nvars, row major
    std::vector<double> coeff_re;
    std::vector<double> coeff_im;
    std::size_t size() const { return coeff_re.size(); }
  };

  explicit HoloPlan(const HoloPoly& f);

  int nvars() const { return nvars_; }
  int max_exponent() const { return max_exponent_; }
  const Poly& value_poly() const { return value_; }
  const std::vector<Poly>& partials() const { return partials_; }

 private:
  int nvars_;
  int max_exponent_;
  Poly value_;
  std::vector<Poly> partials_;
};

/// Structure-of-arrays block of points of R^dim; row d holds coordinate d.
struct PointBlock {
  int dim = 0;
  std::size_t count = 0;
  std::size_t stride = 0;
  std::vector<double> data;

  PointBlock() = default;
  PointBlock(int dim, std::size_t capacity);
  double* row(int d) { return data.data() + static_cast<std::size_t>(d) * stride; }
  const double* row(int d) const { return data.data() + static_cast<std::size_t>(d) * stride; }
};

struct HoloValues {
  std::vector<double> re;
  std::vector<double> im;
  std::vector<double> grad_sq;  // sum_j |df/dz_j|^2
};

/// Evaluates f and |df|^2 at block points whose real coordinates are
/// (x_1..x_n, y_1..y_n). Output vectors are resized to block.count.
void holo_eval_batch(const HoloPlan& plan, const PointBlock& block, HoloValues& out, Backend backend);
void holo_eval_batch(const HoloPlan& plan, const PointBlock& block, HoloValues& out);

/// out[i] = |p_i - q|^2 for the block points p_i.
void sq_dist_batch(const PointBlock& block, std::span<const double> q, std::span<double> out, Backend backend);
void sq_dist_batch(const PointBlock& block, std::span<const double> q, std::span<double> out);

namespace detail {

struct HoloArgs {
  const HoloPlan* plan;
  const PointBlock* block;
  std::size_t begin;
  std::size_t end;
  double* re;
  double* im;
  double* grad_sq;
};

struct DistArgs {
  const PointBlock* block;
  const double* q;
  std::size_t begin;
  std::size_t end;
  double* out;
};

void holo_eval_scalar(const HoloArgs& a);
void holo_eval_avx2(const HoloArgs& a);
void sq_dist_scalar(const DistArgs& a);
void sq_dist_avx2(const DistArgs& a);

}  // namespace detail

}  // namespace tubemass::kernels
