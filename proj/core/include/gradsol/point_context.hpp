#pragma once

#include <optional>

#include "gradsol/curvature.hpp"
#include "gradsol/geometry.hpp"
#include "gradsol/soliton.hpp"

namespace gradsol {

/// Lazy evaluation workspace at one chart point: metric jets, curvature,
/// soliton fields, quadratic tensors, Bach, D. Each member is computed on
/// first use and cached. One context per point; not shared across threads.
///
/// Value accessors (the *_value family) pull only what they need; in
/// particular the quadratic tensors run off a Weyl-free core bundle, and
/// potential contractions use plain gradient values rather than the full
/// soliton field set.
class PointContext {
public:
  PointContext(const Chart& chart, std::vector<double> x, int order);
  PointContext(const GeometrySpec& geom, const ChartPoint& pt, int order)
      : PointContext(geom.charts[pt.chart], pt.x, order) {}

  int dim() const { return chart_->dim; }
  int order() const { return order_; }
  const Chart& chart() const { return *chart_; }
  std::span<const double> x() const { return x_; }
  bool has_potential() const { return chart_->has_potential; }

  const MetricAtPoint& metric();
  const CurvatureBundle& bundle();       // with Weyl and Cotton
  const CurvatureBundle& bundle_core();  // Riemann/Ricci/scalar only
  const SolitonFields& soliton();
  const QuadraticTensors& quadratic();
  /// U and V only; skips the W_quad assembly on the integrand hot path.
  const QuadraticTensors& quadratic_uv();
  const PointTensor& bach4();
  const PointTensor& dtensor();
  const PointTensor& hess_R();  // grad grad R, rank 2
  const PointTensor& dR();      // grad R as a one-form (partials of R)

  /// 1 + max(|g^-1|^2, |Rm|) at the point.
  double scale();

  // Pointwise scalar values used by integrands and identity checks.
  double f_value() { return fpot().f; }
  double weight() { return std::exp(-f_value()); }
  double R_value() { return bundle_core().R.value(); }
  double delta_R_value();
  double norm_grad_f2_value() { return fpot().norm2; }
  double norm_grad_R2_value();
  double inner_gradR_gradf_value();
  double rc_gradf_gradf_value();
  double hessR_gradf_gradf_value();
  double rc_norm2_value();
  double v_gradf_gradf_value();
  double u_gradf_gradf_value();
  double b_gradf_gradf_value();
  double d_norm2_value();
  double norm_grad_f() { return std::sqrt(std::max(0.0, norm_grad_f2_value())); }

  /// sqrt(det g) at the point, from the double-valued metric path.
  double sqrt_det_g();

private:
  struct LightPotential {
    double f = 0.0;
    std::vector<double> df;       // d_a f values
    std::vector<double> grad_up;  // g^{ab} d_b f values
    double norm2 = 0.0;
  };
  const LightPotential& fpot();
  double bilinear_values(const PointTensor& t);  // t(grad f, grad f) at the point

  const Chart* chart_;
  std::vector<double> x_;
  int order_;

  std::optional<MetricAtPoint> metric_;
  std::optional<CurvatureBundle> bundle_;
  std::optional<SolitonFields> soliton_;
  std::optional<QuadraticTensors> quad_;
  std::optional<QuadraticTensors> quad_uv_;
  std::optional<PointTensor> bach_;
  std::optional<PointTensor> d_;
  std::optional<PointTensor> hessR_;
  std::optional<PointTensor> dR_;
  std::optional<LightPotential> fpot_;
  std::optional<double> sqrt_det_;
};

}  // namespace gradsol
