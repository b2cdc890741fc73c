#include "tubemass/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace tubemass {

namespace {

template <typename TermT>
void merge_terms(std::vector<TermT>& terms) {
  std::sort(terms.begin(), terms.end(), [](const TermT& a, const TermT& b) { return a.exponents < b.exponents; });
  std::vector<TermT> out;
  for (const auto& t : terms) {
    if (!out.empty() && out.back().exponents == t.exponents) {
      out.back().coeff += t.coeff;
    } else {
      out.push_back(t);
    }
  }
  std::erase_if(out, [](const TermT& t) { return t.coeff == decltype(t.coeff){}; });
  terms = std::move(out);
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

// ---------------------------------------------------------------- RealPoly

RealPoly::RealPoly(int nvars) : nvars_(nvars) {
  if (nvars < 0 || nvars > kMaxVars) throw DimensionError(fmt::format("{} polynomial variables unsupported", nvars));
}

RealPoly::RealPoly(int nvars, std::vector<Term> terms) : RealPoly(nvars) {
  for (const auto& t : terms) {
    for (int v = nvars; v < kMaxVars; ++v) {
      if (t.exponents[v] != 0) throw DimensionError("exponent on a variable beyond nvars");
    }
  }
  terms_ = std::move(terms);
  normalize();
}

RealPoly RealPoly::constant(int nvars, double c) { return RealPoly(nvars, {Term{{}, c}}); }

RealPoly RealPoly::variable(int nvars, int index) {
  Term t;
  t.exponents[index] = 1;
  t.coeff = 1.0;
  return RealPoly(nvars, {t});
}

void RealPoly::normalize() { merge_terms(terms_); }

int RealPoly::degree() const {
  int d = 0;
  for (const auto& t : terms_) {
    int s = 0;
    for (int v = 0; v < nvars_; ++v) s += t.exponents[v];
    d = std::max(d, s);
  }
  return d;
}

double RealPoly::value(std::span<const double> x) const {
  double total = 0.0;
  for (const auto& t : terms_) {
    double m = t.coeff;
    for (int v = 0; v < nvars_; ++v) {
      for (int e = 0; e < t.exponents[v]; ++e) m *= x[v];
    }
    total += m;
  }
  return total;
}

RealPoly::Jet RealPoly::jet(std::span<const double> x) const {
  Jet j;
  j.grad = RVector::Zero(nvars_);
  j.hess = RMatrix::Zero(nvars_, nvars_);
  // powers[v][e] = x_v^e
  std::array<std::array<double, 32>, kMaxVars> powers{};
  int maxe = 0;
  for (const auto& t : terms_)
    for (int v = 0; v < nvars_; ++v) maxe = std::max<int>(maxe, t.exponents[v]);
  if (maxe >= 32) throw DimensionError("polynomial exponent above 31");
  for (int v = 0; v < nvars_; ++v) {
    powers[v][0] = 1.0;
    for (int e = 1; e <= maxe; ++e) powers[v][e] = powers[v][e - 1] * x[v];
  }
  for (const auto& t : terms_) {
    const auto& ex = t.exponents;
    double m = t.coeff;
    for (int v = 0; v < nvars_; ++v) m *= powers[v][ex[v]];
    j.value += m;
    for (int a = 0; a < nvars_; ++a) {
      if (ex[a] == 0) continue;
      double ga = t.coeff * ex[a];
      for (int v = 0; v < nvars_; ++v) ga *= powers[v][v == a ? ex[v] - 1 : ex[v]];
      j.grad[a] += ga;
      for (int b = a; b < nvars_; ++b) {
        if (b == a) {
          if (ex[a] < 2) continue;
          double h = t.coeff * ex[a] * (ex[a] - 1);
          for (int v = 0; v < nvars_; ++v) h *= powers[v][v == a ? ex[v] - 2 : ex[v]];
          j.hess(a, a) += h;
        } else {
          if (ex[b] == 0) continue;
          double h = t.coeff * ex[a] * ex[b];
          for (int v = 0; v < nvars_; ++v) {
            const int e = (v == a || v == b) ? ex[v] - 1 : ex[v];
            h *= powers[v][e];
          }
          j.hess(a, b) += h;
          j.hess(b, a) += h;
        }
      }
    }
  }
  return j;
}

Interval RealPoly::enclose(std::span<const Interval> box) const {
  Interval total = Interval::point(0.0);
  for (const auto& t : terms_) {
    Interval m = Interval::point(t.coeff);
    for (int v = 0; v < nvars_; ++v) {
      if (t.exponents[v] != 0) m = m * pow(box[v], t.exponents[v]);
    }
    total = total + m;
  }
  return total;
}

RealPoly RealPoly::derivative(int var) const {
  std::vector<Term> out;
  for (const auto& t : terms_) {
    if (t.exponents[var] == 0) continue;
    Term d = t;
    d.coeff *= t.exponents[var];
    d.exponents[var] -= 1;
    out.push_back(d);
  }
  return RealPoly(nvars_, std::move(out));
}

RealPoly RealPoly::operator+(const RealPoly& o) const {
  if (o.nvars_ != nvars_) throw DimensionError("adding polynomials in different variable counts");
  auto terms = terms_;
  terms.insert(terms.end(), o.terms_.begin(), o.terms_.end());
  return RealPoly(nvars_, std::move(terms));
}

RealPoly RealPoly::operator-(const RealPoly& o) const { return *this + o * -1.0; }

RealPoly RealPoly::operator*(const RealPoly& o) const {
  if (o.nvars_ != nvars_) throw DimensionError("multiplying polynomials in different variable counts");
  std::vector<Term> terms;
  for (const auto& a : terms_) {
    for (const auto& b : o.terms_) {
      Term t;
      for (int v = 0; v < kMaxVars; ++v) t.exponents[v] = static_cast<std::uint8_t>(a.exponents[v] + b.exponents[v]);
      t.coeff = a.coeff * b.coeff;
      terms.push_back(t);
    }
  }
  return RealPoly(nvars_, std::move(terms));
}

RealPoly RealPoly::operator*(double s) const {
  auto terms = terms_;
  for (auto& t : terms) t.coeff *= s;
  return RealPoly(nvars_, std::move(terms));
}

// ---------------------------------------------------------------- HoloPoly

HoloPoly::HoloPoly(int nvars) : nvars_(nvars) {
  if (nvars < 0 || nvars > kMaxDim) throw DimensionError(fmt::format("{} holomorphic variables unsupported", nvars));
}

HoloPoly::HoloPoly(int nvars, std::vector<Term> terms) : HoloPoly(nvars) {
  for (const auto& t : terms) {
    for (int v = nvars; v < kMaxDim; ++v) {
      if (t.exponents[v] != 0) throw DimensionError("exponent on a variable beyond nvars");
    }
  }
  terms_ = std::move(terms);
  normalize();
}

HoloPoly HoloPoly::constant(int nvars, cd c) { return HoloPoly(nvars, {Term{{}, c}}); }

HoloPoly HoloPoly::variable(int nvars, int index) {
  Term t;
  t.exponents[index] = 1;
  t.coeff = 1.0;
  return HoloPoly(nvars, {t});
}

void HoloPoly::normalize() { merge_terms(terms_); }

int HoloPoly::degree() const {
  int d = 0;
  for (const auto& t : terms_) {
    int s = 0;
    for (int v = 0; v < nvars_; ++v) s += t.exponents[v];
    d = std::max(d, s);
  }
  return d;
}

int HoloPoly::max_exponent() const {
  int m = 0;
  for (const auto& t : terms_)
    for (int v = 0; v < nvars_; ++v) m = std::max<int>(m, t.exponents[v]);
  return m;
}

cd HoloPoly::value(std::span<const cd> z) const {
  cd total = 0.0;
  for (const auto& t : terms_) {
    cd m = t.coeff;
    for (int v = 0; v < nvars_; ++v) {
      for (int e = 0; e < t.exponents[v]; ++e) m *= z[v];
    }
    total += m;
  }
  return total;
}

CVector HoloPoly::gradient(const CVector& z) const {
  CVector g = CVector::Zero(nvars_);
  for (const auto& t : terms_) {
    for (int a = 0; a < nvars_; ++a) {
      if (t.exponents[a] == 0) continue;
      cd m = t.coeff * static_cast<double>(t.exponents[a]);
      for (int v = 0; v < nvars_; ++v) {
        const int e = v == a ? t.exponents[v] - 1 : t.exponents[v];
        for (int i = 0; i < e; ++i) m *= z[v];
      }
      g[a] += m;
    }
  }
  return g;
}

HoloPoly HoloPoly::derivative(int var) const {
  std::vector<Term> out;
  for (const auto& t : terms_) {
    if (t.exponents[var] == 0) continue;
    Term d = t;
    d.coeff *= static_cast<double>(t.exponents[var]);
    d.exponents[var] -= 1;
    out.push_back(d);
  }
  return HoloPoly(nvars_, std::move(out));
}

CInterval HoloPoly::enclose(std::span<const CInterval> box) const {
  CInterval total{Interval::point(0.0), Interval::point(0.0)};
  for (const auto& t : terms_) {
    CInterval m{Interval::point(t.coeff.real()), Interval::point(t.coeff.imag())};
    for (int v = 0; v < nvars_; ++v) {
      if (t.exponents[v] != 0) m = m * pow(box[v], t.exponents[v]);
    }
    total = total + m;
  }
  return total;
}

std::pair<RealPoly, RealPoly> HoloPoly::real_parts() const {
  const int k = nvars_;
  RealPoly re(2 * k), im(2 * k);
  for (const auto& t : terms_) {
    // prod_v (x_v + i y_v)^{e_v} expanded binomially.
    std::vector<std::pair<RealPoly::Term, cd>> partial{{RealPoly::Term{{}, 1.0}, t.coeff}};
    for (int v = 0; v < k; ++v) {
      const int e = t.exponents[v];
      if (e == 0) continue;
      std::vector<std::pair<RealPoly::Term, cd>> next;
      for (const auto& [mono, c] : partial) {
        for (int j = 0; j <= e; ++j) {
          RealPoly::Term m = mono;
          m.exponents[v] = static_cast<std::uint8_t>(m.exponents[v] + e - j);
          m.exponents[k + v] = static_cast<std::uint8_t>(m.exponents[k + v] + j);
          static const cd kIPow[4] = {cd(1, 0), cd(0, 1), cd(-1, 0), cd(0, -1)};
          const cd ipow = kIPow[j % 4];
          next.emplace_back(m, c * binom(e, j) * ipow);
        }
      }
      partial = std::move(next);
    }
    std::vector<RealPoly::Term> rt, it;
    for (const auto& [mono, c] : partial) {
      RealPoly::Term a = mono, b = mono;
      a.coeff = c.real();
      b.coeff = c.imag();
      rt.push_back(a);
      it.push_back(b);
    }
    re = re + RealPoly(2 * k, std::move(rt));
    im = im + RealPoly(2 * k, std::move(it));
  }
  return {re, im};
}

HoloPoly HoloPoly::operator+(const HoloPoly& o) const {
  if (o.nvars_ != nvars_) throw DimensionError("adding polynomials in different variable counts");
  auto terms = terms_;
  terms.insert(terms.end(), o.terms_.begin(), o.terms_.end());
  return HoloPoly(nvars_, std::move(terms));
}

HoloPoly HoloPoly::operator*(const HoloPoly& o) const {
  if (o.nvars_ != nvars_) throw DimensionError("multiplying polynomials in different variable counts");
  std::vector<Term> terms;
  for (const auto& a : terms_) {
    for (const auto& b : o.terms_) {
      Term t;
      for (int v = 0; v < kMaxDim; ++v) t.exponents[v] = static_cast<std::uint8_t>(a.exponents[v] + b.exponents[v]);
      t.coeff = a.coeff * b.coeff;
      terms.push_back(t);
    }
  }
  return HoloPoly(nvars_, std::move(terms));
}

HoloPoly HoloPoly::operator*(cd s) const {
  auto terms = terms_;
  for (auto& t : terms) t.coeff *= s;
  return HoloPoly(nvars_, std::move(terms));
}

}  // namespace tubemass
