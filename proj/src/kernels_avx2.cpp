#include "tubemass/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#endif

namespace tubemass::kernels::detail {

#if defined(__x86_64__) || defined(_M_X64)

// Only the code below is compiled for AVX2, so no AVX2 instruction can leak
// into inline functions shared with other translation units.
#pragma GCC push_options
#pragma GCC target("avx2")

namespace {

constexpr int kPow = 32;

inline void eval_poly(const HoloPlan::Poly& p, int n, const __m256d (*pr)[kPow], const __m256d (*pi)[kPow],
                      __m256d& sre, __m256d& sim) {
  sre = _mm256_setzero_pd();
  sim = _mm256_setzero_pd();
  const std::uint8_t* e = p.exponents.data();
  for (std::size_t t = 0; t < p.size(); ++t, e += n) {
    __m256d tr = _mm256_set1_pd(p.coeff_re[t]);
    __m256d ti = _mm256_set1_pd(p.coeff_im[t]);
    for (int j = 0; j < n; ++j) {
      if (e[j] == 0) continue;
      const __m256d ar = pr[j][e[j]];
      const __m256d ai = pi[j][e[j]];
      const __m256d nr = _mm256_sub_pd(_mm256_mul_pd(tr, ar), _mm256_mul_pd(ti, ai));
      const __m256d ni = _mm256_add_pd(_mm256_mul_pd(tr, ai), _mm256_mul_pd(ti, ar));
      tr = nr;
      ti = ni;
    }
    sre = _mm256_add_pd(sre, tr);
    sim = _mm256_add_pd(sim, ti);
  }
}

}  // namespace

void holo_eval_avx2(const HoloArgs& a) {
  const HoloPlan& plan = *a.plan;
  const PointBlock& b = *a.block;
  const int n = plan.nvars();
  const int top = plan.max_exponent();
  alignas(32) __m256d pr[kMaxDim][kPow];
  alignas(32) __m256d pi[kMaxDim][kPow];
  std::size_t i = a.begin;
  for (; i + 4 <= a.end; i += 4) {
    for (int j = 0; j < n; ++j) {
      const __m256d x = _mm256_loadu_pd(b.row(j) + i);
      const __m256d y = _mm256_loadu_pd(b.row(n + j) + i);
      pr[j][0] = _mm256_set1_pd(1.0);
      pi[j][0] = _mm256_setzero_pd();
      for (int k = 1; k <= top; ++k) {
        pr[j][k] = _mm256_sub_pd(_mm256_mul_pd(pr[j][k - 1], x), _mm256_mul_pd(pi[j][k - 1], y));
        pi[j][k] = _mm256_add_pd(_mm256_mul_pd(pr[j][k - 1], y), _mm256_mul_pd(pi[j][k - 1], x));
      }
    }
    __m256d re, im;
    eval_poly(plan.value_poly(), n, pr, pi, re, im);
    _mm256_storeu_pd(a.re + i, re);
    _mm256_storeu_pd(a.im + i, im);
    __m256d g = _mm256_setzero_pd();
    for (int j = 0; j < n; ++j) {
      __m256d dr, di;
      eval_poly(plan.partials()[j], n, pr, pi, dr, di);
      g = _mm256_add_pd(g, _mm256_add_pd(_mm256_mul_pd(dr, dr), _mm256_mul_pd(di, di)));
    }
    _mm256_storeu_pd(a.grad_sq + i, g);
  }
  if (i < a.end) {
    HoloArgs tail = a;
    tail.begin = i;
    holo_eval_scalar(tail);
  }
}

void sq_dist_avx2(const DistArgs& a) {
  const PointBlock& b = *a.block;
  std::size_t i = a.begin;
  for (; i + 4 <= a.end; i += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (int d = 0; d < b.dim; ++d) {
      const __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(b.row(d) + i), _mm256_set1_pd(a.q[d]));
      acc = _mm256_add_pd(acc, _mm256_mul_pd(diff, diff));
    }
    _mm256_storeu_pd(a.out + i, acc);
  }
  if (i < a.end) {
    DistArgs tail = a;
    tail.begin = i;
    sq_dist_scalar(tail);
  }
}

#pragma GCC pop_options

#else

// Not x86-64: the dispatcher never selects these, but keep the
// symbols so the library links everywhere.
void holo_eval_avx2(const HoloArgs& a) { holo_eval_scalar(a); }
void sq_dist_avx2(const DistArgs& a) { sq_dist_scalar(a); }

#endif

}  // namespace tubemass::kernels::detail
