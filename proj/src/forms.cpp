#include "tubemass/forms.hpp"

#include <cmath>

#include <fmt/format.h>

namespace tubemass::forms {

HermitianForm::HermitianForm(const CMatrix& entries) {
  if (entries.rows() != entries.cols())
    throw DimensionError(fmt::format("form matrix is {}x{}, not square", entries.rows(), entries.cols()));
  check_dim(static_cast<int>(entries.rows()));
  a_ = (entries + entries.adjoint()) * 0.5;
}

HermitianForm HermitianForm::identity(int n) {
  check_dim(n);
  return HermitianForm(CMatrix::Identity(n, n), Unchecked{});
}

HermitianForm HermitianForm::zero(int n) {
  check_dim(n);
  return HermitianForm(CMatrix::Zero(n, n), Unchecked{});
}

HermitianForm HermitianForm::diagonal(std::span<const double> d) {
  const int n = static_cast<int>(d.size());
  check_dim(n);
  CMatrix a = CMatrix::Zero(n, n);
  for (int j = 0; j < n; ++j) a(j, j) = d[j];
  return HermitianForm(a, Unchecked{});
}

HermitianForm HermitianForm::rank_one(const CVector& a) {
  check_dim(static_cast<int>(a.size()));
  return HermitianForm(a * a.adjoint(), Unchecked{});
}

HermitianForm HermitianForm::operator+(const HermitianForm& o) const {
  if (o.dim() != dim()) throw DimensionError("adding forms of different dimension");
  return HermitianForm(a_ + o.a_, Unchecked{});
}

HermitianForm HermitianForm::operator-(const HermitianForm& o) const {
  if (o.dim() != dim()) throw DimensionError("subtracting forms of different dimension");
  return HermitianForm(a_ - o.a_, Unchecked{});
}

HermitianForm HermitianForm::operator*(double s) const { return HermitianForm(a_ * s, Unchecked{}); }

double HermitianForm::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a_, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

namespace {

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

double binomial(int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

void check_square(const CMatrix& m, int n) {
  if (m.rows() != n || m.cols() != n)
    throw DimensionError(fmt::format("expected {}x{} matrix, got {}x{}", n, n, m.rows(), m.cols()));
}

}  // namespace

cd mixed_discriminant(std::span<const CMatrix> mats) {
  const int n = static_cast<int>(mats.size());
  check_dim(n);
  for (const auto& m : mats) check_square(m, n);
  // d^n/dt_1..dt_n det(sum t_i M_i) = sum_S (-1)^{n-|S|} det(sum_{i in S} M_i).
  cd total = 0.0;
  const unsigned full = 1u << n;
  for (unsigned s = 1; s < full; ++s) {
    CMatrix acc = CMatrix::Zero(n, n);
    int size = 0;
    for (int i = 0; i < n; ++i) {
      if (s & (1u << i)) {
        acc += mats[i];
        ++size;
      }
    }
    const double sign = ((n - size) % 2 == 0) ? 1.0 : -1.0;
    total += sign * acc.determinant();
  }
  return total / factorial(n);
}

cd mixed_discriminant_padded(std::span<const CMatrix> mats, int n) {
  check_dim(n);
  const int k = static_cast<int>(mats.size());
  if (k > n) throw DimensionError(fmt::format("{} forms exceed dimension {}", k, n));
  for (const auto& m : mats) check_square(m, n);
  // Group the identity slots: choosing j of the n-k identical slots contributes
  // C(n-k, j) copies of det(sum_S M + j I).
  const int pad = n - k;
  cd total = 0.0;
  const unsigned full = 1u << k;
  for (unsigned s = 0; s < full; ++s) {
    CMatrix base = CMatrix::Zero(n, n);
    int size = 0;
    for (int i = 0; i < k; ++i) {
      if (s & (1u << i)) {
        base += mats[i];
        ++size;
      }
    }
    for (int j = 0; j <= pad; ++j) {
      if (size + j == 0) continue;
      const int missing = n - size - j;
      const double sign = (missing % 2 == 0) ? 1.0 : -1.0;
      CMatrix m = base;
      m.diagonal().array() += static_cast<double>(j);
      total += sign * binomial(pad, j) * m.determinant();
    }
  }
  return total / factorial(n);
}

double wedge_coefficient(std::span<const HermitianForm> forms, int n) {
  check_dim(n);
  if (forms.empty()) return 1.0;
  std::vector<CMatrix> mats;
  mats.reserve(forms.size());
  for (const auto& f : forms) {
    if (f.dim() != n) throw DimensionError(fmt::format("form of dimension {} in a dimension-{} wedge", f.dim(), n));
    mats.push_back(f.matrix());
  }
  return mixed_discriminant_padded(mats, n).real();
}

bool is_positive(const HermitianForm& form, double tolerance) { return form.min_eigenvalue() >= -tolerance; }

double trace_density(const HermitianForm& form) { return form.trace() / form.dim(); }

HermitianForm codegree_one_dual(std::span<const HermitianForm> forms, int n) {
  check_dim(n);
  if (static_cast<int>(forms.size()) > n - 1)
    throw DimensionError(fmt::format("{} forms leave no free slot in dimension {}", forms.size(), n));
  std::vector<CMatrix> mats;
  mats.reserve(forms.size() + 1);
  for (const auto& f : forms) {
    if (f.dim() != n) throw DimensionError("form dimension mismatch in codegree_one_dual");
    mats.push_back(f.matrix());
  }
  mats.push_back(CMatrix::Zero(n, n));
  // D(.., a a*) = sum a_j conj(a_k) D(.., E_jk), so Q = (D(.., E_jk))^T.
  CMatrix q(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      mats.back().setZero();
      mats.back()(j, k) = 1.0;
      q(k, j) = mixed_discriminant_padded(mats, n);
    }
  }
  return HermitianForm(q);
}

double power_lower_bound(const HermitianForm& a, int copies) {
  const int n = a.dim();
  if (copies < 0 || copies > n - 1) throw DimensionError(fmt::format("power {} outside 0..{}", copies, n - 1));
  std::vector<HermitianForm> forms(static_cast<std::size_t>(copies), a);
  return n * codegree_one_dual(forms, n).min_eigenvalue();
}

}  // namespace tubemass::forms
