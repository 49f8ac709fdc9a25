#pragma once

#include <functional>
#include <optional>
#include <string>

#include "gradsol/geometry.hpp"
#include "gradsol/point_context.hpp"

namespace gradsol {

struct IntegralResult {
  double value = 0.0;
  double refinement = 0.0;  // |value(q) - value(q/2)|
  int q = 0;
  std::string measure;  // "dV", "e^-f dV", "dS", "e^-f dS"
};

/// A pointwise scalar functional of the geometry, integrated over a region.
struct Integrand {
  std::string name;
  int min_order = 3;     // jet order the evaluation needs
  bool weighted = false; // multiply by e^{-f}
  std::function<double(PointContext&)> fn;
};

/// How one axis of a tensor-product grid is integrated. Plain axes take the
/// affine-mapped Gauss-Legendre rule. Polar-type angles on [0, pi] whose
/// volume factor carries a power of sin are integrated under u = cos x:
/// Gauss-Legendre in u for odd powers, the closed-form Chebyshev-second rule
/// for even ones. Both keep nodes ~1/q away from the chart poles (instead of
/// ~1/q^2), which keeps the high-derivative cancellation noise of singular
/// charts far below the integral tolerances, and both absorb the sine power
/// exactly.
enum class AxisWeight { Plain, SinOdd, SinEven };

/// Sublevel set Omega_r = {f <= r} of a geometry (or the whole manifold when
/// the geometry is closed), with tensor-product Gauss grids and, for catalog
/// geometries, exact coordinate bounds and explicit boundary
/// parameterizations. The resolution is q nodes per axis; unbounded
/// directions (the Gaussian radius, the cylinder line) get proportionally
/// more nodes when the region is long.
class QuadratureRegion {
public:
  struct VolumePatch {
    Chart chart;
    std::vector<double> lo, hi;
    std::vector<int> nodes;  // per-axis node counts at full resolution
    std::vector<AxisWeight> rules;
    bool indicator = false;  // restrict to f <= r by indicator (non-catalog)
  };
  struct BoundaryPatch {
    Chart chart;  // (dim-1)-chart carrying the induced metric
    std::vector<double> lo, hi;
    std::vector<AxisWeight> rules;
    std::function<std::vector<double>(std::span<const double>)> to_ambient;
  };

  QuadratureRegion(const GeometrySpec& geom, std::optional<double> r, int q);

  /// Coordinate shell Omega_{r_hi} minus Omega_{r_lo} for the catalog
  /// soliton geometries; used by the whole-manifold tail ladder.
  static QuadratureRegion shell(const GeometrySpec& geom, double r_lo, double r_hi, int q);

  const GeometrySpec& geometry() const { return *geom_; }
  std::optional<double> level() const { return r_; }
  int q() const { return q_; }
  bool closed() const { return geom_->closed; }
  bool exact_bounds() const { return exact_bounds_; }
  const std::vector<VolumePatch>& volume_patches() const { return vol_; }
  const std::vector<BoundaryPatch>& boundary_patches() const { return bdry_; }
  /// Quadrature nodes per full-resolution volume sweep.
  long volume_node_count() const;

private:
  QuadratureRegion() = default;

  const GeometrySpec* geom_ = nullptr;
  std::optional<double> r_;
  int q_ = 0;
  bool exact_bounds_ = true;
  std::vector<VolumePatch> vol_;
  std::vector<BoundaryPatch> bdry_;
};

/// One sweep (plus the q/2 refinement sweep) evaluating all integrands at
/// shared per-node contexts. Values use fixed-shape pairwise summation, so
/// they are bit-identical for any thread count.
std::vector<IntegralResult> integrate_region_many(const QuadratureRegion& region,
                                                  std::span<const Integrand> integrands,
                                                  int threads = 1);
IntegralResult integrate_region(const QuadratureRegion& region, const Integrand& integrand,
                                int threads = 1);

/// Surface integrals over the region boundary with the induced measure;
/// exact zero on closed manifolds.
std::vector<IntegralResult> integrate_boundary_many(const QuadratureRegion& region,
                                                    std::span<const Integrand> integrands,
                                                    int threads = 1);
IntegralResult integrate_boundary(const QuadratureRegion& region, const Integrand& integrand,
                                  int threads = 1);

/// Vector field on the region's volume chart, jet-evaluable components.
using VectorFieldFn = std::function<void(std::span<const Jet>, Jet*)>;

struct StokesResult {
  double volume_integral = 0.0;  // integral of div X dV
  double boundary_flux = 0.0;    // integral of <X, nu> dS
  double residual = 0.0;
  double magnitude = 0.0;  // max(|volume|, |flux|, integral of |div X|)
  int q = 0;
};

/// Divergence-theorem residual |int div X dV - int <X, nu> dS| for a smooth
/// vector field; the oracle validating the integration engine. The batched
/// form shares per-node work across fields.
std::vector<StokesResult> stokes_residual_many(const QuadratureRegion& region,
                                               std::span<const VectorFieldFn> fields,
                                               int threads = 1);
StokesResult stokes_residual(const QuadratureRegion& region, const VectorFieldFn& field,
                             int threads = 1);

}  // namespace gradsol
