#pragma once

#include <vector>

namespace tubemass::quadrature {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [a, b].
Rule gauss_legendre(int n, double a, double b);

/// Composite Gauss rule on [a, b] whose panels shrink geometrically (by
/// `ratio`) toward `focus` until they are shorter than `floor`.
Rule graded_rule(double a, double b, double focus, double floor, int order, double ratio = 0.5);

}  // namespace tubemass::quadrature
