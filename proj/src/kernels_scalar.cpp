#include "tubemass/kernels.hpp"

namespace tubemass::kernels::detail {

namespace {

constexpr int kPow = 32;

// Sum of coeff * prod z_j^e_j using the precomputed power table.
inline void eval_poly(const HoloPlan::Poly& p, int n, const double (*pr)[kPow], const double (*pi)[kPow], double& sre,
                      double& sim) {
  sre = 0.0;
  sim = 0.0;
  const std::uint8_t* e = p.exponents.data();
  for (std::size_t t = 0; t < p.size(); ++t, e += n) {
    double tr = p.coeff_re[t];
    double ti = p.coeff_im[t];
    for (int j = 0; j < n; ++j) {
      if (e[j] == 0) continue;
      const double ar = pr[j][e[j]];
      const double ai = pi[j][e[j]];
      const double nr = tr * ar - ti * ai;
      const double ni = tr * ai + ti * ar;
      tr = nr;
      ti = ni;
    }
    sre = sre + tr;
    sim = sim + ti;
  }
}

}  // namespace

void holo_eval_scalar(const HoloArgs& a) {
  const HoloPlan& plan = *a.plan;
  const PointBlock& b = *a.block;
  const int n = plan.nvars();
  const int top = plan.max_exponent();
  double pr[kMaxDim][kPow];
  double pi[kMaxDim][kPow];
  for (std::size_t i = a.begin; i < a.end; ++i) {
    for (int j = 0; j < n; ++j) {
      const double x = b.row(j)[i];
      const double y = b.row(n + j)[i];
      pr[j][0] = 1.0;
      pi[j][0] = 0.0;
      for (int k = 1; k <= top; ++k) {
        pr[j][k] = pr[j][k - 1] * x - pi[j][k - 1] * y;
        pi[j][k] = pr[j][k - 1] * y + pi[j][k - 1] * x;
      }
    }
    double re, im;
    eval_poly(plan.value_poly(), n, pr, pi, re, im);
    a.re[i] = re;
    a.im[i] = im;
    double g = 0.0;
    for (int j = 0; j < n; ++j) {
      double dr, di;
      eval_poly(plan.partials()[j], n, pr, pi, dr, di);
      g = g + (dr * dr + di * di);
    }
    a.grad_sq[i] = g;
  }
}

void sq_dist_scalar(const DistArgs& a) {
  const PointBlock& b = *a.block;
  for (std::size_t i = a.begin; i < a.end; ++i) {
    double acc = 0.0;
    for (int d = 0; d < b.dim; ++d) {
      const double diff = b.row(d)[i] - a.q[d];
      acc = acc + diff * diff;
    }
    a.out[i] = acc;
  }
}

}  // namespace tubemass::kernels::detail
