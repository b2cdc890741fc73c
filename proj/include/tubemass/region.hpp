#pragma once

// Integration regions in C^n, described in real coordinates (x's then y's).
// Every region offers an enclosing box, an exact membership test and a
// conservative cell test used to prune sampling cells.

#include <memory>
#include <vector>

#include "tubemass/manifold.hpp"
#include "tubemass/sampling.hpp"

namespace tubemass::currents {

using sampling::Box;

class Region {
 public:
  virtual ~Region() = default;
  virtual int dim() const = 0;  // complex dimension
  virtual Box bounds() const = 0;
  virtual bool contains(const RVector& xi) const = 0;
  /// False only if the cell provably misses the region.
  virtual bool may_meet(const Box& cell) const = 0;
};

using RegionPtr = std::shared_ptr<const Region>;

/// Open ball B(center, radius).
RegionPtr ball(const Point& center, double radius);
/// Open axis-aligned box in real coordinates.
RegionPtr box_region(const Box& box);
/// {<normal, xi> > offset} intersected with `inside`.
RegionPtr half_space(RegionPtr inside, const RVector& normal, double offset);
/// {distance to M < t} intersected with the ball B(0, r).
RegionPtr tube(std::shared_ptr<const manifold::DefiningSystem> ds, double t, double r);

/// Compact convex subset of R^n (embedded in C^n as y = 0).
struct ConvexBody {
  enum class Kind { point, box, ball, segment };
  Kind kind = Kind::point;
  std::vector<double> a;  // point, box lower corner, ball centre, segment start
  std::vector<double> b;  // box upper corner, segment end
  double radius = 0.0;    // ball

  int dim() const { return static_cast<int>(a.size()); }
  /// Euclidean distance in R^n from x to the body.
  double distance(const double* x) const;
  /// Enclosing box of the body in R^n.
  std::vector<Interval> bounds() const;
};

/// {z : dist(z, K) < t} for K in R^n, where dist^2 = |y|^2 + dist_K(x)^2.
RegionPtr convex_tube(ConvexBody body, double t);

}  // namespace tubemass::currents
