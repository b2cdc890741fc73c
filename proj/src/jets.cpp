#include "tubemass/jets.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace tubemass::jets {

Jet2 Jet2::constant(int n, double c) {
  Jet2 j;
  j.value = c;
  j.grad = CVector::Zero(n);
  j.hess = CMatrix::Zero(n, n);
  return j;
}

Jet2 from_real_jet(const RealPoly::Jet& rj, int n) {
  Jet2 j;
  j.value = rj.value;
  j.grad.resize(n);
  j.hess.resize(n, n);
  for (int a = 0; a < n; ++a) j.grad[a] = cd(rj.grad[a], -rj.grad[n + a]) * 0.5;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const double re = rj.hess(a, b) + rj.hess(n + a, n + b);
      const double im = rj.hess(a, n + b) - rj.hess(n + a, b);
      j.hess(a, b) = cd(re, im) * 0.25;
    }
  }
  return j;
}

Jet2 jet_sum(const Jet2& a, const Jet2& b) {
  if (a.dim() != b.dim()) throw DimensionError("jet dimension mismatch");
  return Jet2{a.value + b.value, a.grad + b.grad, a.hess + b.hess};
}

Jet2 jet_scale(const Jet2& a, double s) { return Jet2{a.value * s, a.grad * s, a.hess * s}; }

Jet2 jet_product(const Jet2& a, const Jet2& b) {
  if (a.dim() != b.dim()) throw DimensionError("jet dimension mismatch");
  Jet2 r;
  r.value = a.value * b.value;
  r.grad = a.grad * b.value + b.grad * a.value;
  r.hess = a.hess * b.value + b.hess * a.value + a.grad * b.grad.adjoint() + b.grad * a.grad.adjoint();
  return r;
}

namespace fn {

namespace {
bool everywhere(double) { return true; }
}  // namespace

ScalarFn identity() {
  return {"identity", [](double s) { return s; }, [](double) { return 1.0; }, [](double) { return 0.0; }, everywhere,
          everywhere};
}

ScalarFn square() {
  return {"square", [](double s) { return s * s; }, [](double s) { return 2.0 * s; }, [](double) { return 2.0; },
          everywhere, everywhere};
}

ScalarFn sqrt() {
  return {"sqrt",
          [](double s) { return std::sqrt(s); },
          [](double s) { return 0.5 / std::sqrt(s); },
          [](double s) { return -0.25 / (s * std::sqrt(s)); },
          [](double s) { return s >= 0.0; },
          [](double s) { return s > 0.0; }};
}

ScalarFn log() {
  return {"log",
          [](double s) { return s == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(s); },
          [](double s) { return 1.0 / s; },
          [](double s) { return -1.0 / (s * s); },
          [](double s) { return s >= 0.0; },
          [](double s) { return s > 0.0; }};
}

ScalarFn exp() {
  return {"exp", [](double s) { return std::exp(s); }, [](double s) { return std::exp(s); },
          [](double s) { return std::exp(s); }, everywhere, everywhere};
}

ScalarFn pos_part_squared() {
  return {"pos_part_squared",
          [](double s) { return s > 0.0 ? s * s : 0.0; },
          [](double s) { return s > 0.0 ? 2.0 * s : 0.0; },
          [](double s) { return s > 0.0 ? 2.0 : 0.0; },
          everywhere,
          everywhere};
}

}  // namespace fn

Jet2 jet_chain(const ScalarFn& g, const Jet2& inner) {
  if (!g.jet_domain(inner.value))
    throw DomainError(fmt::format("{} is not twice differentiable at {}", g.name, inner.value));
  const double d1 = g.df(inner.value);
  const double d2 = g.d2f(inner.value);
  Jet2 r;
  r.value = g.f(inner.value);
  r.grad = inner.grad * d1;
  r.hess = inner.hess * d1 + (inner.grad * inner.grad.adjoint()) * d2;
  return r;
}

double smooth_max_value(double a, double b, double eps) {
  const double d = a - b;
  return 0.5 * (a + b + std::sqrt(d * d + eps * eps));
}

Jet2 smooth_max(const Jet2& a, const Jet2& b, double eps) {
  if (!(eps > 0.0)) throw DomainError("smooth_max needs eps > 0");
  if (a.dim() != b.dim()) throw DimensionError("jet dimension mismatch");
  const double d = a.value - b.value;
  const double r = std::sqrt(d * d + eps * eps);
  const double p = 0.5 * (1.0 + d / r);
  const double q = 0.5 * (1.0 - d / r);
  const double kappa = 0.5 * eps * eps / (r * r * r);
  const CVector diff = a.grad - b.grad;
  Jet2 out;
  out.value = 0.5 * (a.value + b.value + r);
  out.grad = a.grad * p + b.grad * q;
  out.hess = a.hess * p + b.hess * q + (diff * diff.adjoint()) * kappa;
  return out;
}

// ------------------------------------------------------------ field nodes

struct ScalarField::Node {
  explicit Node(int n) : n(n) {}
  virtual ~Node() = default;
  virtual Jet2 jet(const Point& z, const RVector& xi) const = 0;
  virtual double value(const RVector& xi) const = 0;
  int n;
};

namespace {

using Node = ScalarField::Node;

std::span<const double> as_span(const RVector& xi) {
  return {xi.data(), static_cast<std::size_t>(xi.size())};
}

struct PolyNode final : Node {
  PolyNode(int n, RealPoly p) : Node(n), poly(std::move(p)) {}
  Jet2 jet(const Point&, const RVector& xi) const override { return from_real_jet(poly.jet(as_span(xi)), n); }
  double value(const RVector& xi) const override { return poly.value(as_span(xi)); }
  RealPoly poly;
};

struct SumNode final : Node {
  SumNode(std::shared_ptr<const Node> a, std::shared_ptr<const Node> b, double sb)
      : Node(a->n), a(std::move(a)), b(std::move(b)), sb(sb) {}
  Jet2 jet(const Point& z, const RVector& xi) const override {
    return jet_sum(a->jet(z, xi), jet_scale(b->jet(z, xi), sb));
  }
  double value(const RVector& xi) const override { return a->value(xi) + sb * b->value(xi); }
  std::shared_ptr<const Node> a, b;
  double sb;
};

struct ScaleNode final : Node {
  ScaleNode(std::shared_ptr<const Node> a, double s) : Node(a->n), a(std::move(a)), s(s) {}
  Jet2 jet(const Point& z, const RVector& xi) const override { return jet_scale(a->jet(z, xi), s); }
  double value(const RVector& xi) const override { return s * a->value(xi); }
  std::shared_ptr<const Node> a;
  double s;
};

struct ProductNode final : Node {
  ProductNode(std::shared_ptr<const Node> a, std::shared_ptr<const Node> b)
      : Node(a->n), a(std::move(a)), b(std::move(b)) {}
  Jet2 jet(const Point& z, const RVector& xi) const override { return jet_product(a->jet(z, xi), b->jet(z, xi)); }
  double value(const RVector& xi) const override { return a->value(xi) * b->value(xi); }
  std::shared_ptr<const Node> a, b;
};

struct ChainNode final : Node {
  ChainNode(ScalarFn g, std::shared_ptr<const Node> inner) : Node(inner->n), g(std::move(g)), inner(std::move(inner)) {}
  Jet2 jet(const Point& z, const RVector& xi) const override { return jet_chain(g, inner->jet(z, xi)); }
  double value(const RVector& xi) const override {
    const double s = inner->value(xi);
    if (!g.value_domain(s)) throw DomainError(fmt::format("{} undefined at {}", g.name, s));
    return g.f(s);
  }
  ScalarFn g;
  std::shared_ptr<const Node> inner;
};

struct SmoothMaxNode final : Node {
  SmoothMaxNode(std::shared_ptr<const Node> a, std::shared_ptr<const Node> b, double eps)
      : Node(a->n), a(std::move(a)), b(std::move(b)), eps(eps) {}
  Jet2 jet(const Point& z, const RVector& xi) const override {
    return tubemass::jets::smooth_max(a->jet(z, xi), b->jet(z, xi), eps);
  }
  double value(const RVector& xi) const override { return smooth_max_value(a->value(xi), b->value(xi), eps); }
  std::shared_ptr<const Node> a, b;
  double eps;
};

void same_dim(const ScalarField& a, const ScalarField& b) {
  if (a.dim() != b.dim()) throw DimensionError(fmt::format("fields of dimension {} and {}", a.dim(), b.dim()));
}

}  // namespace

ScalarField ScalarField::polynomial(int n, RealPoly p) {
  check_dim(n);
  if (p.nvars() != 2 * n)
    throw DimensionError(fmt::format("field polynomial has {} variables, expected {}", p.nvars(), 2 * n));
  return ScalarField(std::make_shared<PolyNode>(n, std::move(p)));
}

ScalarField ScalarField::constant(int n, double c) { return polynomial(n, RealPoly::constant(2 * n, c)); }

ScalarField ScalarField::norm_squared(int n) {
  RealPoly p(2 * n);
  for (int v = 0; v < 2 * n; ++v) p = p + RealPoly::variable(2 * n, v) * RealPoly::variable(2 * n, v);
  return polynomial(n, std::move(p));
}

ScalarField ScalarField::x(int n, int j) { return polynomial(n, RealPoly::variable(2 * n, j)); }

ScalarField ScalarField::y(int n, int j) { return polynomial(n, RealPoly::variable(2 * n, n + j)); }

int ScalarField::dim() const { return node_->n; }

const RealPoly* ScalarField::as_polynomial() const {
  const auto* p = dynamic_cast<const PolyNode*>(node_.get());
  return p ? &p->poly : nullptr;
}

Jet2 ScalarField::jet(const Point& z) const {
  if (z.size() != dim()) throw DimensionError("point dimension does not match field");
  return node_->jet(z, to_real(z));
}

double ScalarField::value(const Point& z) const {
  if (z.size() != dim()) throw DimensionError("point dimension does not match field");
  return node_->value(to_real(z));
}

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  same_dim(a, b);
  const auto* pa = a.as_polynomial();
  const auto* pb = b.as_polynomial();
  if (pa && pb) return ScalarField::polynomial(a.dim(), *pa + *pb);
  return ScalarField(std::make_shared<SumNode>(a.node_, b.node_, 1.0));
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  same_dim(a, b);
  const auto* pa = a.as_polynomial();
  const auto* pb = b.as_polynomial();
  if (pa && pb) return ScalarField::polynomial(a.dim(), *pa - *pb);
  return ScalarField(std::make_shared<SumNode>(a.node_, b.node_, -1.0));
}

ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  same_dim(a, b);
  const auto* pa = a.as_polynomial();
  const auto* pb = b.as_polynomial();
  if (pa && pb) return ScalarField::polynomial(a.dim(), *pa * *pb);
  return ScalarField(std::make_shared<ProductNode>(a.node_, b.node_));
}

ScalarField operator*(double s, const ScalarField& a) {
  if (const auto* p = a.as_polynomial()) return ScalarField::polynomial(a.dim(), *p * s);
  return ScalarField(std::make_shared<ScaleNode>(a.node_, s));
}

ScalarField chain(const ScalarFn& g, const ScalarField& inner) {
  return ScalarField(std::make_shared<ChainNode>(g, inner.node_));
}

ScalarField smooth_max(const ScalarField& a, const ScalarField& b, double eps) {
  same_dim(a, b);
  if (!(eps > 0.0)) throw DomainError("smooth_max needs eps > 0");
  return ScalarField(std::make_shared<SmoothMaxNode>(a.node_, b.node_, eps));
}

}  // namespace tubemass::jets
