#pragma once

// Brute-force exterior algebra over dz_1..dz_n, dzbar_1..dzbar_n, used as an
// independent oracle for the closed-form wedge coefficients.

#include <span>
#include <vector>

#include "tubemass/forms.hpp"

namespace tubemass::verify {

/// Dense multivector indexed by a bitmask of generators; bit j is dz_j and
/// bit n + k is dzbar_k.
class Multivector {
 public:
  explicit Multivector(int n);
  /// The (1,1)-form  i sum A_jk dz_j ^ dzbar_k.
  static Multivector from_form(const forms::HermitianForm& form);

  int n() const { return n_; }
  cd top() const { return c_.back(); }
  Multivector wedge(const Multivector& o) const;

 private:
  int n_;
  std::vector<cd> c_;
};

/// c with  w_{A_1} ^ ... ^ w_{A_k} ^ beta^{n-k} = c beta^n.
double wedge_oracle(std::span<const forms::HermitianForm> forms, int n);

}  // namespace tubemass::verify
