#include "tubemass/region.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace tubemass::currents {

namespace {

// Lower bound of |v| over an interval.
double gap(const Interval& v) {
  if (v.lo > 0.0) return v.lo;
  if (v.hi < 0.0) return -v.hi;
  return 0.0;
}

// Lower bound of the squared distance from a box to a point.
double box_point_sq(const Box& box, const RVector& c) {
  double s = 0.0;
  for (int d = 0; d < box.dim(); ++d) {
    const double g = gap(Interval{box.axes[d].lo - c[d], box.axes[d].hi - c[d]});
    s += g * g;
  }
  return s;
}

Box box_intersect(const Box& a, const Box& b) {
  Box r = a;
  for (int d = 0; d < a.dim(); ++d) {
    r.axes[d].lo = std::max(a.axes[d].lo, b.axes[d].lo);
    r.axes[d].hi = std::min(a.axes[d].hi, b.axes[d].hi);
    if (r.axes[d].hi < r.axes[d].lo) r.axes[d].hi = r.axes[d].lo;
  }
  return r;
}

bool boxes_meet(const Box& a, const Box& b) {
  for (int d = 0; d < a.dim(); ++d)
    if (a.axes[d].lo > b.axes[d].hi || b.axes[d].lo > a.axes[d].hi) return false;
  return true;
}

class BallRegion final : public Region {
 public:
  BallRegion(const Point& c, double r) : n_(static_cast<int>(c.size())), c_(to_real(c)), r_(r) {
    if (!(r > 0.0)) throw DomainError("ball radius must be positive");
  }
  int dim() const override { return n_; }
  Box bounds() const override {
    std::vector<Interval> ax;
    for (int d = 0; d < 2 * n_; ++d) ax.push_back({c_[d] - r_, c_[d] + r_});
    return Box(std::move(ax));
  }
  bool contains(const RVector& xi) const override { return (xi - c_).squaredNorm() < r_ * r_; }
  bool may_meet(const Box& cell) const override { return box_point_sq(cell, c_) <= r_ * r_ * (1.0 + 1e-12); }

 private:
  int n_;
  RVector c_;
  double r_;
};

class BoxRegion final : public Region {
 public:
  explicit BoxRegion(Box box) : box_(std::move(box)) {
    if (box_.dim() % 2 != 0) throw DimensionError("box region needs an even number of axes");
    check_dim(box_.dim() / 2);
  }
  int dim() const override { return box_.dim() / 2; }
  Box bounds() const override { return box_; }
  bool contains(const RVector& xi) const override {
    for (int d = 0; d < box_.dim(); ++d)
      if (!(xi[d] > box_.axes[d].lo && xi[d] < box_.axes[d].hi)) return false;
    return true;
  }
  bool may_meet(const Box& cell) const override { return boxes_meet(cell, box_); }

 private:
  Box box_;
};

class HalfSpaceRegion final : public Region {
 public:
  HalfSpaceRegion(RegionPtr inside, const RVector& normal, double offset)
      : inside_(std::move(inside)), normal_(normal), offset_(offset) {
    if (normal_.size() != 2 * inside_->dim()) throw DimensionError("half-space normal has wrong dimension");
  }
  int dim() const override { return inside_->dim(); }
  Box bounds() const override { return inside_->bounds(); }
  bool contains(const RVector& xi) const override { return normal_.dot(xi) > offset_ && inside_->contains(xi); }
  bool may_meet(const Box& cell) const override {
    double top = 0.0;
    for (int d = 0; d < cell.dim(); ++d) top += std::max(normal_[d] * cell.axes[d].lo, normal_[d] * cell.axes[d].hi);
    return top >= offset_ && inside_->may_meet(cell);
  }

 private:
  RegionPtr inside_;
  RVector normal_;
  double offset_;
};

class TubeRegion final : public Region {
 public:
  TubeRegion(std::shared_ptr<const manifold::DefiningSystem> ds, double t, double r)
      : ds_(std::move(ds)), t_(t), r_(r) {
    if (!(t > 0.0)) throw DomainError("tube radius must be positive");
    if (!(r > 0.0)) throw DomainError("ball radius must be positive");
    const int n = ds_->n();
    std::vector<Interval> ax(static_cast<std::size_t>(2 * n), Interval{-r, r});
    bounds_ = Box(std::move(ax));
    if (ds_->has_chart()) {
      Box img = ds_->chart().image_bounds();
      for (auto& a : img.axes) {
        a.lo -= t;
        a.hi += t;
      }
      bounds_ = box_intersect(bounds_, img);
    }
    if (ds_->is_linear()) {
      // rho(xi) = G xi + c with metric (G G^T)^{-1}; keep the pieces for the
      // interval lower bound of the distance.
      const RVector origin = RVector::Zero(2 * n);
      for (const auto& f : ds_->rho()) {
        const auto jet = f.as_polynomial()->jet(std::span<const double>(origin.data(), origin.size()));
        lin_.push_back({jet.grad, jet.value});
      }
      RMatrix g(ds_->m(), 2 * n);
      for (int j = 0; j < ds_->m(); ++j) g.row(j) = lin_[static_cast<std::size_t>(j)].grad.transpose();
      const RMatrix gram = g * g.transpose();
      const double top = Eigen::SelfAdjointEigenSolver<RMatrix>(gram).eigenvalues().maxCoeff();
      metric_floor_ = 1.0 / top;
    }
  }
  int dim() const override { return ds_->n(); }
  Box bounds() const override { return bounds_; }
  bool contains(const RVector& xi) const override {
    if (xi.squaredNorm() >= r_ * r_) return false;
    return ds_->distance(from_real(xi)) < t_;
  }
  bool may_meet(const Box& cell) const override {
    if (!boxes_meet(cell, bounds_)) return false;
    if (box_point_sq(cell, RVector::Zero(cell.dim())) > r_ * r_ * (1.0 + 1e-12)) return false;
    if (!lin_.empty()) {
      double s = 0.0;
      for (const auto& l : lin_) {
        Interval v = Interval::point(l.value);
        for (int d = 0; d < cell.dim(); ++d) v = v + l.grad[d] * cell.axes[d];
        const double g = gap(v);
        s += g * g;
      }
      if (metric_floor_ * s > t_ * t_ * (1.0 + 1e-9)) return false;
    }
    return true;
  }

 private:
  struct Linear {
    RVector grad;
    double value;
  };
  std::shared_ptr<const manifold::DefiningSystem> ds_;
  double t_;
  double r_;
  Box bounds_;
  std::vector<Linear> lin_;
  double metric_floor_ = 0.0;
};

class ConvexTubeRegion final : public Region {
 public:
  ConvexTubeRegion(ConvexBody body, double t) : body_(std::move(body)), t_(t) {
    if (!(t > 0.0)) throw DomainError("tube radius must be positive");
    n_ = body_.dim();
    check_dim(n_);
    const bool two_corners = body_.kind == ConvexBody::Kind::box || body_.kind == ConvexBody::Kind::segment;
    if (two_corners && body_.b.size() != body_.a.size())
      throw DimensionError("convex body corners have different dimensions");
    if (body_.kind == ConvexBody::Kind::box)
      for (int j = 0; j < n_; ++j)
        if (body_.b[j] < body_.a[j]) throw DomainError("box corner order reversed");
    if (body_.kind == ConvexBody::Kind::ball && !(body_.radius >= 0.0)) throw DomainError("ball radius negative");
  }
  int dim() const override { return n_; }
  Box bounds() const override {
    std::vector<Interval> ax = body_.bounds();
    for (auto& a : ax) {
      a.lo -= t_;
      a.hi += t_;
    }
    for (int j = 0; j < n_; ++j) ax.push_back({-t_, t_});
    return Box(std::move(ax));
  }
  bool contains(const RVector& xi) const override {
    double y2 = 0.0;
    for (int j = 0; j < n_; ++j) y2 += xi[n_ + j] * xi[n_ + j];
    const double dk = body_.distance(xi.data());
    return y2 + dk * dk < t_ * t_;
  }
  bool may_meet(const Box& cell) const override {
    // K lies in its bounding box, so the box-to-box gap bounds dist_K below.
    const auto kb = body_.bounds();
    double s = 0.0;
    for (int j = 0; j < n_; ++j) {
      const double gx = gap(Interval{cell.axes[j].lo - kb[j].hi, cell.axes[j].hi - kb[j].lo});
      const double gy = gap(cell.axes[n_ + j]);
      s += gx * gx + gy * gy;
    }
    return s <= t_ * t_ * (1.0 + 1e-12);
  }

 private:
  ConvexBody body_;
  double t_;
  int n_ = 0;
};

}  // namespace

RegionPtr ball(const Point& center, double radius) { return std::make_shared<BallRegion>(center, radius); }

RegionPtr box_region(const Box& box) { return std::make_shared<BoxRegion>(box); }

RegionPtr half_space(RegionPtr inside, const RVector& normal, double offset) {
  return std::make_shared<HalfSpaceRegion>(std::move(inside), normal, offset);
}

RegionPtr tube(std::shared_ptr<const manifold::DefiningSystem> ds, double t, double r) {
  return std::make_shared<TubeRegion>(std::move(ds), t, r);
}

RegionPtr convex_tube(ConvexBody body, double t) { return std::make_shared<ConvexTubeRegion>(std::move(body), t); }

double ConvexBody::distance(const double* x) const {
  const int n = dim();
  double s = 0.0;
  switch (kind) {
    case Kind::point:
      for (int j = 0; j < n; ++j) s += (x[j] - a[j]) * (x[j] - a[j]);
      return std::sqrt(s);
    case Kind::box:
      for (int j = 0; j < n; ++j) {
        const double g = std::max({a[j] - x[j], 0.0, x[j] - b[j]});
        s += g * g;
      }
      return std::sqrt(s);
    case Kind::ball:
      for (int j = 0; j < n; ++j) s += (x[j] - a[j]) * (x[j] - a[j]);
      return std::max(0.0, std::sqrt(s) - radius);
    case Kind::segment: {
      double len2 = 0.0, proj = 0.0;
      for (int j = 0; j < n; ++j) {
        len2 += (b[j] - a[j]) * (b[j] - a[j]);
        proj += (x[j] - a[j]) * (b[j] - a[j]);
      }
      const double u = len2 > 0.0 ? std::clamp(proj / len2, 0.0, 1.0) : 0.0;
      for (int j = 0; j < n; ++j) {
        const double d = x[j] - (a[j] + u * (b[j] - a[j]));
        s += d * d;
      }
      return std::sqrt(s);
    }
  }
  return 0.0;
}

std::vector<Interval> ConvexBody::bounds() const {
  std::vector<Interval> out;
  for (int j = 0; j < dim(); ++j) {
    switch (kind) {
      case Kind::point:
        out.push_back({a[j], a[j]});
        break;
      case Kind::box:
      case Kind::segment:
        out.push_back({std::min(a[j], b[j]), std::max(a[j], b[j])});
        break;
      case Kind::ball:
        out.push_back({a[j] - radius, a[j] + radius});
        break;
    }
  }
  return out;
}

}  // namespace tubemass::currents
