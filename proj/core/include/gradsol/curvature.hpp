#pragma once

#include "gradsol/tensor.hpp"

namespace gradsol {

/// Everything derived from the metric at one point.
///
/// Conventions, fixed once and checked by a startup self-test:
///   Rm_mixed[i,j,k,l] = R_ijk^l with (grad_i grad_j - grad_j grad_i) w_k
///                       = -R_ijk^l w_l,
///   Rc[j,k] = R_ijk^i  (scalar curvature of the round S^4(sqrt 6) is +2),
///   Rm[i,j,k,l] = -g_lp R_ijk^p (so that W below is totally trace-free and
///                 vanishes on constant-curvature spaces),
///   W = Rm - corrections, C_ijk from first derivatives of Ricci; then
///   C_ijk = -(n-2)/(n-3) grad^l W_ijkl holds identically.
struct CurvatureBundle {
  PointTensor Rm_mixed;  // (D,D,D,U)
  PointTensor Rm;        // (D,D,D,D)
  PointTensor Rc;        // (D,D)
  Jet R;
  PointTensor dRc;       // grad Rc, shared by Cotton and the quadratic tensors
  PointTensor W_weyl;    // (D,D,D,D); empty in a core-only bundle
  PointTensor C_cotton;  // (D,D,D);   empty in a core-only bundle
  bool has_weyl = false;
};

/// Metric + inverse + Christoffel symbols from component jets (order >= 1).
inline MetricAtPoint christoffel(const SmallMat<Jet>& g_jets, std::vector<double> point) {
  return make_metric(g_jets, std::move(point));
}

/// Full curvature bundle; needs jet order >= 3 and dimension >= 3.
CurvatureBundle curvature_bundle(const MetricAtPoint& metric);

/// Riemann/Ricci/scalar only (no Weyl, no Cotton); enough for the quadratic
/// tensors and much cheaper on integration hot paths.
CurvatureBundle curvature_bundle_core(const MetricAtPoint& metric);

/// C_ijk + (n-2)/(n-3) grad^l W_ijkl; identically zero, returned raw.
/// Needs n > 3 and jet order >= 4.
PointTensor weyl_divergence_check(const CurvatureBundle& bundle, const MetricAtPoint& metric);

enum class BachMode { Dim4, GeneralN };

/// Bach tensor: grad^k grad^l W_ikjl + (1/2) R_kl W_i^k_j^l in dimension 4,
/// or the general-n normalization 1/(n-3), 1/(n-2). Jet order >= 4.
PointTensor bach(const MetricAtPoint& metric, const CurvatureBundle& bundle, BachMode mode);

struct QuadraticTensors {
  PointTensor U;
  PointTensor V;
  PointTensor W_quad;
};

/// The three symmetric divergence-free 2-tensors quadratic in curvature.
/// U is computed from the general-n coefficients; at n = 4 it is cross-checked
/// against the dimension-4 form. Jet order >= 4. Callers that only consume U
/// and V may skip the W_quad assembly.
QuadraticTensors quadratic_tensors(const MetricAtPoint& metric, const CurvatureBundle& bundle,
                                   bool with_w_quad = true);

/// U from the written-out dimension-4 coefficients (the reduction target of
/// the general form; used by the coefficient-reduction check).
PointTensor quadratic_u_dim4(const MetricAtPoint& metric, const CurvatureBundle& bundle);

/// alpha U + beta V.
PointTensor bach_like(const PointTensor& U, const PointTensor& V, double alpha, double beta);

/// D_ijk = C_ijk + W_ijkl grad^l f; antisymmetric in (i, j).
PointTensor d_tensor(const CurvatureBundle& bundle, const PointTensor& grad_f_up,
                     const MetricAtPoint& metric);

/// Residual scale at a point: 1 + max(|g^-1|_inf^2, |Rm|_inf).
double curvature_scale(const MetricAtPoint& metric, const CurvatureBundle& bundle);

/// Diagnostic only: componentwise deviation of the Cotton tensor of the
/// conformally rescaled metric exp(2f/(2-n)) g from the D-tensor, in the same
/// chart. Recorded, never asserted.
double cotton_conformal_deviation(const SmallMat<Jet>& g_jets, const Jet& f_jet,
                                  std::vector<double> point);

}  // namespace gradsol
