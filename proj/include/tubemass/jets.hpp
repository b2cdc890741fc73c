#pragma once

// Second-order jets of real-valued functions of n complex variables and an
// immutable expression tree of scalar fields built from real polynomials.
//
// Convention: d/dz = (d/dx - i d/dy)/2, so the mixed Hessian of |z|^2 is the
// identity (the coefficient matrix of beta).

#include <functional>
#include <memory>
#include <string>

#include "tubemass/forms.hpp"
#include "tubemass/polynomial.hpp"
#include "tubemass/types.hpp"

namespace tubemass::jets {

/// value, complex gradient (df/dz_j) and mixed Hessian (d^2 f/dz_j dzbar_k).
struct Jet2 {
  double value = 0.0;
  CVector grad;
  CMatrix hess;

  int dim() const { return static_cast<int>(grad.size()); }
  forms::HermitianForm hess_form() const { return forms::HermitianForm(hess); }

  static Jet2 constant(int n, double c);
};

/// Complex jet from the real value/gradient/Hessian in (x_1..x_n, y_1..y_n).
Jet2 from_real_jet(const RealPoly::Jet& rj, int n);

Jet2 jet_sum(const Jet2& a, const Jet2& b);
Jet2 jet_scale(const Jet2& a, double s);
Jet2 jet_product(const Jet2& a, const Jet2& b);

/// A twice differentiable real function of one variable.
struct ScalarFn {
  std::string name;
  std::function<double(double)> f;
  std::function<double(double)> df;
  std::function<double(double)> d2f;
  /// Where f itself may be evaluated.
  std::function<bool(double)> value_domain;
  /// Where f is twice differentiable.
  std::function<bool(double)> jet_domain;
};

namespace fn {
ScalarFn identity();
ScalarFn square();
ScalarFn sqrt();
ScalarFn log();
ScalarFn exp();
/// max(0, s)^2, convex and C^1.
ScalarFn pos_part_squared();
}  // namespace fn

/// Throws DomainError when g is not twice differentiable at inner.value.
Jet2 jet_chain(const ScalarFn& g, const Jet2& inner);

/// Jet of (a + b + sqrt((a-b)^2 + eps^2))/2.
Jet2 smooth_max(const Jet2& a, const Jet2& b, double eps);
double smooth_max_value(double a, double b, double eps);

class ScalarField {
 public:
  struct Node;

  static ScalarField polynomial(int n, RealPoly p);
  static ScalarField constant(int n, double c);
  /// |z|^2.
  static ScalarField norm_squared(int n);
  static ScalarField x(int n, int j);
  static ScalarField y(int n, int j);

  int dim() const;
  /// The polynomial when this field is a bare polynomial node.
  const RealPoly* as_polynomial() const;

  Jet2 jet(const Point& z) const;
  double value(const Point& z) const;

  friend ScalarField operator+(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator-(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator*(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator*(double s, const ScalarField& a);
  friend ScalarField chain(const ScalarFn& g, const ScalarField& inner);
  friend ScalarField smooth_max(const ScalarField& a, const ScalarField& b, double eps);

 private:
  explicit ScalarField(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

ScalarField chain(const ScalarFn& g, const ScalarField& inner);
ScalarField smooth_max(const ScalarField& a, const ScalarField& b, double eps);
inline ScalarField sqrt(const ScalarField& f) { return chain(fn::sqrt(), f); }
inline ScalarField square(const ScalarField& f) { return chain(fn::square(), f); }
inline ScalarField log(const ScalarField& f) { return chain(fn::log(), f); }
inline ScalarField exp(const ScalarField& f) { return chain(fn::exp(), f); }

inline Jet2 jet_eval(const ScalarField& field, const Point& z) { return field.jet(z); }

}  // namespace tubemass::jets
