#pragma once

// Positive closed (1,1)-currents of three kinds: divisors of holomorphic
// polynomials, parametrised hypersurfaces and smooth potentials, with the
// estimators for their trace measure  theta ^ beta^{n-1} / (n-1)!.

#include <string>
#include <variant>
#include <vector>

#include "tubemass/jets.hpp"
#include "tubemass/polynomial.hpp"
#include "tubemass/region.hpp"
#include "tubemass/sampling.hpp"

namespace tubemass::currents {

/// Trace mass per unit (2n-2)-dimensional area of the current of integration
/// on a complex hypersurface, with beta = i dd|z|^2 and beta^n/n! = 2^n dlambda.
/// Calibrated against f = z_1 in the unit ball (area pi).
double kappa(int n);

struct Divisor {
  HoloPoly f;
};

/// One complex parameter ranging over a disc |u| < radius or a rectangle.
struct ParamFactor {
  enum class Kind { disc, rect };
  Kind kind = Kind::disc;
  double radius = 1.0;
  Interval re{-1.0, 1.0};
  Interval im{-1.0, 1.0};
};

/// Holomorphic map from a product of n-1 planar domains into C^n.
struct ParametrizedVariety {
  std::vector<HoloPoly> map;  // n components in n-1 variables
  std::vector<ParamFactor> domain;
  int dim() const { return static_cast<int>(map.size()); }
};

struct SmoothPotential {
  jets::ScalarField phi;
};

using CurrentSpec = std::variant<Divisor, ParametrizedVariety, SmoothPotential>;

/// Throws DomainError for f == 0.
CurrentSpec make_divisor(HoloPoly f);
CurrentSpec make_variety(ParametrizedVariety v);
/// Rejects phi whose mixed Hessian has an eigenvalue below -1e-9 at any of
/// `samples` seeded points of the ball B(0, radius).
CurrentSpec make_smooth(jets::ScalarField phi, double radius, int samples, std::uint64_t seed);

int dim(const CurrentSpec& c);
std::string kind_name(const CurrentSpec& c);

struct SmoothDensity {
  double density = 0.0;  // w.r.t. Lebesgue measure
  double min_eigenvalue = 0.0;
  bool psh = true;
};

/// 2^n tr(H_phi(z)); psh is false when an eigenvalue is below -tolerance.
SmoothDensity trace_density_smooth(const jets::ScalarField& phi, const Point& z, double tolerance = 1e-9);

struct MassEstimate {
  sampling::Estimate area;   // Hausdorff (2n-2)-area
  sampling::Estimate trace;  // kappa_n * area
  double kappa = 0.0;
  double epsilon = 0.0;
  std::size_t cells = 0;
  /// Relative standard error above 20%.
  bool flagged = false;
};

/// 0.02 times the widest side of the region's bounding box.
double default_epsilon(const Region& region);

/// Coarea estimator (1/(pi eps^2)) * integral over {|f| < eps} of |df|^2.
MassEstimate divisor_mass(const HoloPoly& f, const Region& region, double epsilon, const sampling::Options& opts);

struct VarietyMass {
  double area = 0.0;
  double trace = 0.0;
};

/// Tensor Gauss quadrature of det(J* J) over the parameter domain, `nodes`
/// per real axis, counting only image points inside the region.
VarietyMass variety_mass(const ParametrizedVariety& v, const Region& region, int nodes = 64);

/// Monte Carlo integral of 2^n tr(H_phi) over the region.
sampling::Estimate smooth_mass(const jets::ScalarField& phi, const Region& region, const sampling::Options& opts);

/// Trace mass of any supported current in the region.
MassEstimate current_mass(const CurrentSpec& c, const Region& region, double epsilon, const sampling::Options& opts);

}  // namespace tubemass::currents
