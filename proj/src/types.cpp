#include "tubemass/types.hpp"

#include <fmt/format.h>

namespace tubemass {

RVector to_real(const Point& z) {
  const auto n = z.size();
  RVector xi(2 * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    xi[j] = z[j].real();
    xi[n + j] = z[j].imag();
  }
  return xi;
}

Point from_real(const RVector& xi) {
  const auto n = xi.size() / 2;
  Point z(n);
  for (Eigen::Index j = 0; j < n; ++j) z[j] = cd(xi[j], xi[n + j]);
  return z;
}

void check_dim(int n) {
  if (n < 1 || n > kMaxDim)
    throw DimensionError(fmt::format("complex dimension {} outside supported range 1..{}", n, kMaxDim));
}

}  // namespace tubemass
