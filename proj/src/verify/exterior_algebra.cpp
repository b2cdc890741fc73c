#include "tubemass/verify/exterior_algebra.hpp"

#include <bit>

#include <fmt/format.h>

namespace tubemass::verify {

Multivector::Multivector(int n) : n_(n), c_(std::size_t{1} << (2 * n), cd(0.0)) { check_dim(n); }

Multivector Multivector::from_form(const forms::HermitianForm& form) {
  const int n = form.dim();
  Multivector m(n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) m.c_[(std::size_t{1} << j) | (std::size_t{1} << (n + k))] += cd(0.0, 1.0) * form(j, k);
  return m;
}

Multivector Multivector::wedge(const Multivector& o) const {
  if (o.n_ != n_) throw DimensionError("wedge of multivectors in different dimensions");
  Multivector out(n_);
  const std::size_t size = c_.size();
  for (std::size_t s = 0; s < size; ++s) {
    if (c_[s] == cd(0.0)) continue;
    for (std::size_t t = 0; t < size; ++t) {
      if ((s & t) != 0 || o.c_[t] == cd(0.0)) continue;
      // sign of moving each generator of t left past the larger ones of s
      int swaps = 0;
      for (std::size_t rest = t; rest != 0; rest &= rest - 1) {
        const int bit = std::countr_zero(rest);
        swaps += std::popcount(s >> (bit + 1));
      }
      out.c_[s | t] += (swaps % 2 ? -1.0 : 1.0) * c_[s] * o.c_[t];
    }
  }
  return out;
}

double wedge_oracle(std::span<const forms::HermitianForm> forms, int n) {
  if (static_cast<int>(forms.size()) > n)
    throw DimensionError(fmt::format("{} forms exceed dimension {}", forms.size(), n));
  const Multivector beta = Multivector::from_form(forms::HermitianForm::identity(n));
  Multivector vol = beta, prod = forms.empty() ? beta : Multivector::from_form(forms[0]);
  for (int i = 1; i < n; ++i) vol = vol.wedge(beta);
  for (std::size_t i = 1; i < forms.size(); ++i) prod = prod.wedge(Multivector::from_form(forms[i]));
  const int start = forms.empty() ? 1 : static_cast<int>(forms.size());
  for (int i = start; i < n; ++i) prod = prod.wedge(beta);
  return (prod.top() / vol.top()).real();
}

}  // namespace tubemass::verify
