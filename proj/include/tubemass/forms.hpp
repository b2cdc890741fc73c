#pragma once

// Constant-coefficient real (1,1)-forms  i * sum A_jk dz_j ^ dzbar_k  and
// their wedge products against powers of the Kaehler form beta = i dd^c |z|^2.

#include <span>
#include <vector>

#include "tubemass/types.hpp"

namespace tubemass::forms {

/// Coefficient matrix of a real (1,1)-form. The identity matrix is beta.
class HermitianForm {
 public:
  /// Hermitian part (A + A*)/2 of `entries` is stored.
  explicit HermitianForm(const CMatrix& entries);

  static HermitianForm identity(int n);
  static HermitianForm zero(int n);
  static HermitianForm diagonal(std::span<const double> d);
  /// Rank-one form i (a dz) ^ conj(a dz), matrix a a*.
  static HermitianForm rank_one(const CVector& a);

  int dim() const { return static_cast<int>(a_.rows()); }
  const CMatrix& matrix() const { return a_; }
  cd operator()(int j, int k) const { return a_(j, k); }

  HermitianForm operator+(const HermitianForm& o) const;
  HermitianForm operator-(const HermitianForm& o) const;
  HermitianForm operator*(double s) const;

  double trace() const { return a_.trace().real(); }
  double min_eigenvalue() const;

 private:
  struct Unchecked {};
  HermitianForm(const CMatrix& a, Unchecked) : a_(a) {}
  CMatrix a_;
};

inline HermitianForm operator*(double s, const HermitianForm& f) { return f * s; }

/// Mixed discriminant D(M_1..M_n) of n complex n x n matrices, the full
/// polarization of det normalised so that D(M,..,M) = det M. Computed by
/// inclusion-exclusion over subsets, exact for the multilinear polynomial.
cd mixed_discriminant(std::span<const CMatrix> mats);

/// D(M_1..M_k, I..I) with n-k identity slots. Multilinear in every M_i, also
/// for non-Hermitian arguments.
cd mixed_discriminant_padded(std::span<const CMatrix> mats, int n);

/// c with  w_{A_1} ^ ... ^ w_{A_k} ^ beta^{n-k} = c beta^n.
double wedge_coefficient(std::span<const HermitianForm> forms, int n);

/// Smallest eigenvalue >= -tolerance.
bool is_positive(const HermitianForm& form, double tolerance);

/// tr(A)/n, the c with  w_A ^ beta^{n-1} = c beta^n.
double trace_density(const HermitianForm& form);

/// Dual matrix of the (n-1,n-1)-form  Psi = w_{A_1}^...^w_{A_k} ^ beta^{n-1-k}:
/// Psi ^ w_P = tr(Q P) beta^n for every P. Psi is positive iff Q >= 0, and
/// beta^{n-1} has dual I/n.
HermitianForm codegree_one_dual(std::span<const HermitianForm> forms, int n);

/// Largest c with  w_A^{copies} ^ beta^{n-1-copies} >= c beta^{n-1}, i.e.
/// n * lambda_min(Q). For copies = 0 this is 1.
double power_lower_bound(const HermitianForm& a, int copies);

}  // namespace tubemass::forms
