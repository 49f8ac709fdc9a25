#pragma once

#include "gradsol/curvature.hpp"

namespace gradsol {

/// Potential-derived fields and the shrinking-soliton residuals
/// Hess f + Rc - g/2 and R + |grad f|^2 - f, plus the derived identities
/// Delta f = n/2 - R and grad R = 2 Rc(grad f) as named residuals.
struct SolitonFields {
  Jet f;
  PointTensor df;       // Down, order K-1
  PointTensor grad_f;   // Up, order K-1
  PointTensor hess_f;   // Down Down, order K-2
  Jet laplacian_f;      // order K-2
  Jet norm_grad_f2;     // order K-1
  PointTensor soliton_residual;        // Hess f + Rc - g/2
  double normalization_residual = 0;   // R + |grad f|^2 - f
  PointTensor gradR_residual;          // grad R - 2 Rc(grad f), rank 1
  double trace_residual = 0;           // Delta f + R - n/2
};

SolitonFields soliton_fields(const MetricAtPoint& metric, const CurvatureBundle& bundle,
                             const Jet& f_jet);

class PointContext;

enum class PointwiseId { Bochner, CauchySchwarzRc, GradCubic };

PointwiseId pointwise_id_from_string(const std::string& id);

/// Signed residual for identity ids; for the inequality id CauchySchwarzRc
/// returns the slack 4|Rc|^2 - R^2 (must be >= -tol).
double pointwise_identity(PointwiseId id, PointContext& ctx);

}  // namespace gradsol
