#include "gradsol/soliton.hpp"

#include <cmath>
#include <stdexcept>

#include "gradsol/point_context.hpp"

namespace gradsol {

SolitonFields soliton_fields(const MetricAtPoint& metric, const CurvatureBundle& bundle,
                             const Jet& f_jet) {
  const int n = metric.dim;
  const int K = metric.order;
  if (f_jet.order() != K) throw std::invalid_argument("potential jets must match metric order");
  if (K < 3) throw std::domain_error("soliton fields need jet order >= 3");
  std::vector<double> pt(metric.g.point().begin(), metric.g.point().end());

  SolitonFields s;
  s.f = f_jet;
  s.df = PointTensor(n, {Variance::Down}, K - 1, pt);
  for (int a = 0; a < n; ++a) s.df.at({a}) = f_jet.axis_derivative(a);
  s.grad_f = raise_lower(s.df, 0, metric);
  s.hess_f = covariant_derivative(s.df, metric);  // order K-2
  s.hess_f.set_symmetry(SymmetryTag::SymmetricPair);

  const PointTensor ginv2 = truncate_tensor(metric.g_inv, K - 2);
  s.laplacian_f = Jet::constant(n, K - 2, 0.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) Jet::fma_acc(s.laplacian_f, ginv2.at({a, b}), s.hess_f.at({a, b}));

  s.norm_grad_f2 = tensor_norm2_jet(s.df, metric);

  s.soliton_residual =
      s.hess_f + bundle.Rc - truncate_tensor(metric.g, K - 2) * 0.5;
  s.normalization_residual = bundle.R.value() + s.norm_grad_f2.value() - f_jet.value();

  // grad R = 2 Rc(grad f), written as a rank-1 residual.
  PointTensor dR(n, {Variance::Down}, K - 3, pt);
  for (int a = 0; a < n; ++a) dR.at({a}) = bundle.R.axis_derivative(a);
  const PointTensor rc3 = truncate_tensor(bundle.Rc, K - 3);
  const PointTensor gf3 = truncate_tensor(s.grad_f, K - 3);
  s.gradR_residual = dR - contract_with(rc3, 1, gf3, 0) * 2.0;

  s.trace_residual = s.laplacian_f.value() + bundle.R.value() - 0.5 * n;
  return s;
}

PointwiseId pointwise_id_from_string(const std::string& id) {
  if (id == "I-BOCHNER") return PointwiseId::Bochner;
  if (id == "I-CS") return PointwiseId::CauchySchwarzRc;
  if (id == "I-GRADCUBIC") return PointwiseId::GradCubic;
  throw std::invalid_argument("unknown pointwise identity id: " + id);
}

double pointwise_identity(PointwiseId id, PointContext& ctx) {
  const int n = ctx.dim();
  switch (id) {
    case PointwiseId::CauchySchwarzRc: {
      const double R = ctx.R_value();
      return 4.0 * ctx.rc_norm2_value() - R * R;
    }
    case PointwiseId::Bochner: {
      // (1/2) Delta |grad f|^2 = |Hess f|^2 + <grad Delta f, grad f>
      //                          + Rc(grad f, grad f)
      const SolitonFields& s = ctx.soliton();
      const MetricAtPoint& m = ctx.metric();
      PointTensor u = PointTensor::scalar(s.norm_grad_f2);
      PointTensor du = covariant_derivative(u, m);
      PointTensor lap_u = covariant_divergence(du, 0, m);
      const double lhs = 0.5 * lap_u[0].value();

      PointTensor dlap(n, {Variance::Down}, s.laplacian_f.order() - 1, {});
      for (int a = 0; a < n; ++a) dlap.at({a}) = s.laplacian_f.axis_derivative(a);
      double grad_term = 0.0;
      for (int a = 0; a < n; ++a)
        grad_term += dlap.at({a}).value() * s.grad_f.at({a}).value();
      const double hess2 = tensor_norm2(s.hess_f, m);
      return lhs - hess2 - grad_term - ctx.rc_gradf_gradf_value();
    }
    case PointwiseId::GradCubic: {
      // (grad_k Rc_ij) grad^k f grad^i f grad^j f
      //   = (1/2) hess R(grad f, grad f) - (1/2) Rc(grad f, grad f)
      //     + (1/4) |grad R|^2   (soliton identity)
      const SolitonFields& s = ctx.soliton();
      const MetricAtPoint& m = ctx.metric();
      PointTensor dRc = covariant_derivative(ctx.bundle().Rc, m);
      double lhs = 0.0;
      const PointTensor& gf = s.grad_f;
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            lhs += dRc.at({k, i, j}).value() * gf.at({k}).value() * gf.at({i}).value() *
                   gf.at({j}).value();
      const double rhs = 0.5 * ctx.hessR_gradf_gradf_value() -
                         0.5 * ctx.rc_gradf_gradf_value() + 0.25 * ctx.norm_grad_R2_value();
      return lhs - rhs;
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace gradsol
