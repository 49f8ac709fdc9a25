#include "gradsol/point_context.hpp"

#include <cmath>
#include <stdexcept>

namespace gradsol {

PointContext::PointContext(const Chart& chart, std::vector<double> x, int order)
    : chart_(&chart), x_(std::move(x)), order_(order) {}

const MetricAtPoint& PointContext::metric() {
  if (!metric_) metric_ = make_metric(chart_->metric_jets(x_, order_), x_);
  return *metric_;
}

const CurvatureBundle& PointContext::bundle() {
  if (!bundle_ || !bundle_->has_weyl) bundle_ = curvature_bundle(metric());
  return *bundle_;
}

const CurvatureBundle& PointContext::bundle_core() {
  if (!bundle_) bundle_ = curvature_bundle_core(metric());
  return *bundle_;
}

const SolitonFields& PointContext::soliton() {
  if (!soliton_) {
    if (!chart_->has_potential) throw std::logic_error("geometry lacks potential f");
    soliton_ = soliton_fields(metric(), bundle_core(), chart_->potential_jet(x_, order_));
  }
  return *soliton_;
}

const QuadraticTensors& PointContext::quadratic() {
  if (!quad_) quad_ = quadratic_tensors(metric(), bundle_core());
  return *quad_;
}

const QuadraticTensors& PointContext::quadratic_uv() {
  if (quad_) return *quad_;
  if (!quad_uv_) quad_uv_ = quadratic_tensors(metric(), bundle_core(), /*with_w_quad=*/false);
  return *quad_uv_;
}

const PointTensor& PointContext::bach4() {
  if (!bach_) bach_ = bach(metric(), bundle(), dim() == 4 ? BachMode::Dim4 : BachMode::GeneralN);
  return *bach_;
}

const PointTensor& PointContext::dtensor() {
  if (!d_) d_ = d_tensor(bundle(), soliton().grad_f, metric());
  return *d_;
}

const PointTensor& PointContext::dR() {
  if (!dR_) {
    const Jet& R = bundle_core().R;
    PointTensor t(dim(), {Variance::Down}, R.order() - 1, x_);
    for (int a = 0; a < dim(); ++a) t.at({a}) = R.axis_derivative(a);
    dR_ = std::move(t);
  }
  return *dR_;
}

const PointTensor& PointContext::hess_R() {
  if (!hessR_) hessR_ = covariant_derivative(dR(), metric());
  return *hessR_;
}

double PointContext::scale() { return curvature_scale(metric(), bundle_core()); }

const PointContext::LightPotential& PointContext::fpot() {
  if (!fpot_) {
    if (!chart_->has_potential) throw std::logic_error("geometry lacks potential f");
    LightPotential lp;
    lp.f = chart_->potential_d(x_);
    Jet fj = chart_->potential_jet(x_, 1);
    const int n = dim();
    lp.df.resize(n);
    for (int a = 0; a < n; ++a) lp.df[a] = fj.coeff(1 + a);
    lp.grad_up.assign(n, 0.0);
    const MetricAtPoint& m = metric();
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) lp.grad_up[a] += m.g_inv.at({a, b}).value() * lp.df[b];
    lp.norm2 = 0.0;
    for (int a = 0; a < n; ++a) lp.norm2 += lp.df[a] * lp.grad_up[a];
    fpot_ = std::move(lp);
  }
  return *fpot_;
}

double PointContext::bilinear_values(const PointTensor& t) {
  const LightPotential& lp = fpot();
  double acc = 0.0;
  for (int a = 0; a < dim(); ++a)
    for (int b = 0; b < dim(); ++b)
      acc += t.at({a, b}).value() * lp.grad_up[a] * lp.grad_up[b];
  return acc;
}

double PointContext::delta_R_value() {
  const PointTensor& h = hess_R();
  const MetricAtPoint& m = metric();
  double acc = 0.0;
  for (int a = 0; a < dim(); ++a)
    for (int b = 0; b < dim(); ++b)
      acc += m.g_inv.at({a, b}).value() * h.at({a, b}).value();
  return acc;
}

double PointContext::norm_grad_R2_value() {
  const PointTensor& d = dR();
  const MetricAtPoint& m = metric();
  double acc = 0.0;
  for (int a = 0; a < dim(); ++a)
    for (int b = 0; b < dim(); ++b)
      acc += m.g_inv.at({a, b}).value() * d.at({a}).value() * d.at({b}).value();
  return acc;
}

double PointContext::inner_gradR_gradf_value() {
  const PointTensor& d = dR();
  const LightPotential& lp = fpot();
  double acc = 0.0;
  for (int a = 0; a < dim(); ++a) acc += d.at({a}).value() * lp.grad_up[a];
  return acc;
}

double PointContext::rc_gradf_gradf_value() { return bilinear_values(bundle_core().Rc); }

double PointContext::hessR_gradf_gradf_value() { return bilinear_values(hess_R()); }

double PointContext::rc_norm2_value() { return tensor_norm2_value(bundle_core().Rc, metric()); }

double PointContext::v_gradf_gradf_value() { return bilinear_values(quadratic_uv().V); }

double PointContext::u_gradf_gradf_value() { return bilinear_values(quadratic_uv().U); }

double PointContext::b_gradf_gradf_value() { return bilinear_values(bach4()); }

double PointContext::d_norm2_value() {
  // |D|^2 pointwise from values: D_ijk = C_ijk + W_ijkl (grad f)^l.
  const CurvatureBundle& b = bundle();
  const LightPotential& lp = fpot();
  const MetricAtPoint& m = metric();
  const int n = dim();
  std::vector<double> D(static_cast<std::size_t>(n) * n * n);
  std::size_t c = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double v = b.C_cotton.at({i, j, k}).value();
        for (int l = 0; l < n; ++l) v += b.W_weyl.at({i, j, k, l}).value() * lp.grad_up[l];
        D[c++] = v;
      }
  std::vector<double> gi(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int bb = 0; bb < n; ++bb) gi[a * n + bb] = m.g_inv.at({a, bb}).value();
  // Raise one slot per pass, then pair componentwise.
  std::vector<double> up(D), next(D.size());
  const std::size_t strides[3] = {static_cast<std::size_t>(n) * n,
                                  static_cast<std::size_t>(n), 1};
  for (int slot = 0; slot < 3; ++slot) {
    for (std::size_t flat = 0; flat < D.size(); ++flat) {
      const int i = static_cast<int>(flat / strides[slot]) % n;
      const std::size_t base = flat - i * strides[slot];
      double s = 0.0;
      for (int p = 0; p < n; ++p) s += gi[i * n + p] * up[base + p * strides[slot]];
      next[flat] = s;
    }
    std::swap(up, next);
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < D.size(); ++i) acc += D[i] * up[i];
  return acc;
}

double PointContext::sqrt_det_g() {
  if (!sqrt_det_) {
    SmallMat<double> gv = chart_->metric_values(x_);
    const double det = determinant(gv);
    if (det <= 0.0) throw std::domain_error("metric determinant not positive");
    sqrt_det_ = std::sqrt(det);
  }
  return *sqrt_det_;
}

}  // namespace gradsol
