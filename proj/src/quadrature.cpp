#include "tubemass/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include <gsl/gsl_integration.h>

#include "tubemass/types.hpp"

namespace tubemass::quadrature {

Rule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw DomainError("Gauss rule needs at least one node");
  std::unique_ptr<gsl_integration_glfixed_table, decltype(&gsl_integration_glfixed_table_free)> table(
      gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(n)), &gsl_integration_glfixed_table_free);
  if (!table) throw NumericalError("GSL could not build the Gauss-Legendre table");
  Rule r;
  r.nodes.resize(static_cast<std::size_t>(n));
  r.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    gsl_integration_glfixed_point(a, b, static_cast<std::size_t>(i), &r.nodes[i], &r.weights[i], table.get());
  return r;
}

namespace {

// Breakpoints from `from` toward `to` (exclusive of `to`), shrinking by ratio.
void grade_side(double from, double to, double floor, double ratio, std::vector<double>& cuts) {
  double len = std::abs(from - to);
  if (len == 0.0) return;
  const double dir = to > from ? 1.0 : -1.0;
  while (len > floor) {
    len *= ratio;
    cuts.push_back(to - dir * len);
  }
}

}  // namespace

Rule graded_rule(double a, double b, double focus, double floor, int order, double ratio) {
  if (!(b > a)) throw DomainError("graded rule needs a < b");
  if (!(floor > 0.0) || !(ratio > 0.0 && ratio < 1.0)) throw DomainError("graded rule needs floor > 0 and ratio in (0, 1)");
  focus = std::clamp(focus, a, b);
  std::vector<double> cuts{a, b};
  if (focus > a) {
    cuts.push_back(focus);
    grade_side(a, focus, floor, ratio, cuts);
  }
  if (focus < b) {
    cuts.push_back(focus);
    grade_side(b, focus, floor, ratio, cuts);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  Rule out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const Rule r = gauss_legendre(order, cuts[i], cuts[i + 1]);
    out.nodes.insert(out.nodes.end(), r.nodes.begin(), r.nodes.end());
    out.weights.insert(out.weights.end(), r.weights.begin(), r.weights.end());
  }
  return out;
}

}  // namespace tubemass::quadrature
