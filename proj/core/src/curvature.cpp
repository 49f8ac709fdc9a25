#include "gradsol/curvature.hpp"

#include <cmath>
#include <stdexcept>

#include "gradsol/geometry.hpp"

namespace gradsol {

namespace {

CurvatureBundle bundle_impl(const MetricAtPoint& metric, bool with_weyl) {
  const int n = metric.dim;
  const int K = metric.order;
  if (n < 3) throw std::invalid_argument("Weyl/Cotton tensors need dimension >= 3");
  if (K < 3) throw std::domain_error("curvature bundle needs jet order >= 3");

  CurvatureBundle b;
  std::vector<double> pt(metric.g.point().begin(), metric.g.point().end());

  // R_ijk^l = d_i Gamma^l_jk - d_j Gamma^l_ik
  //           + Gamma^l_ip Gamma^p_jk - Gamma^l_jp Gamma^p_ik.
  // Antisymmetric in (i, j) exactly (term-by-term), so compute i < j and
  // mirror; the mirror is bit-identical to direct evaluation.
  const PointTensor& G = metric.christoffel;                 // order K-1
  const PointTensor Gt = truncate_tensor(G, K - 2);          // for products
  const PointTensor Gt_neg = Gt * -1.0;
  b.Rm_mixed = PointTensor(
      n, {Variance::Down, Variance::Down, Variance::Down, Variance::Up}, K - 2, pt);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          Jet& dst = b.Rm_mixed.at({i, j, k, l});
          dst = G.at({l, j, k}).axis_derivative(i) - G.at({l, i, k}).axis_derivative(j);
          for (int p = 0; p < n; ++p) {
            Jet::fma_acc(dst, Gt.at({l, i, p}), Gt.at({p, j, k}));
            Jet::fma_acc(dst, Gt_neg.at({l, j, p}), Gt.at({p, i, k}));
          }
          b.Rm_mixed.at({j, i, k, l}) = -dst;
        }

  const PointTensor ginv2 = truncate_tensor(metric.g_inv, K - 2);
  const PointTensor g2 = truncate_tensor(metric.g, K - 2);

  // Lowered tensor with the sign that makes the Weyl decomposition
  // trace-free: Rm_ijkl = -g_lp R_ijk^p. Riemann-type symmetric; the pair
  // classes (ij) <= (kl) determine the rest.
  b.Rm = PointTensor(n, {Variance::Down, Variance::Down, Variance::Down, Variance::Down},
                     K - 2, pt);
  b.Rm.set_symmetry(SymmetryTag::RiemannType);
  const int npairs = n * (n - 1) / 2;
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(npairs);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  auto fill_riemann_class = [n](PointTensor& t, int i, int j, int k, int l, const Jet& v) {
    const Jet nv = -v;
    t.at({i, j, k, l}) = v;
    t.at({j, i, k, l}) = nv;
    t.at({i, j, l, k}) = nv;
    t.at({j, i, l, k}) = v;
    if (i != k || j != l) {
      t.at({k, l, i, j}) = v;
      t.at({l, k, i, j}) = nv;
      t.at({k, l, j, i}) = nv;
      t.at({l, k, j, i}) = v;
    }
  };
  for (int a = 0; a < npairs; ++a)
    for (int bb = a; bb < npairs; ++bb) {
      const auto [i, j] = pairs[a];
      const auto [k, l] = pairs[bb];
      Jet v = Jet::constant(n, K - 2, 0.0);
      for (int p = 0; p < n; ++p) Jet::fma_acc(v, b.Rm_mixed.at({i, j, k, p}), g2.at({p, l}));
      v = -v;
      fill_riemann_class(b.Rm, i, j, k, l, v);
    }

  // Rc_jk = R_ijk^i, R = g^jk Rc_jk.
  b.Rc = contract(b.Rm_mixed, 0, 3);
  b.Rc.set_symmetry(SymmetryTag::SymmetricPair);
  b.R = Jet::constant(n, K - 2, 0.0);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) Jet::fma_acc(b.R, ginv2.at({j, k}), b.Rc.at({j, k}));

  b.dRc = covariant_derivative(b.Rc, metric);  // order K-3
  b.has_weyl = with_weyl;
  if (!with_weyl) return b;

  // Weyl: trace-corrected Riemann; corrections share the Riemann-type symmetry
  // term-for-term, so the same class fill applies.
  const double c1 = 1.0 / (n - 2);
  const PointTensor Rc_m = b.Rc * -c1;
  const PointTensor Rc_p = b.Rc * c1;
  const PointTensor RG = scale_by_jet(g2, b.R * (1.0 / ((n - 1) * (n - 2))));
  const PointTensor RGneg = RG * -1.0;
  b.W_weyl = PointTensor(n, {Variance::Down, Variance::Down, Variance::Down, Variance::Down},
                         K - 2, pt);
  b.W_weyl.set_symmetry(SymmetryTag::RiemannType);
  for (int a = 0; a < npairs; ++a)
    for (int bb = a; bb < npairs; ++bb) {
      const auto [i, j] = pairs[a];
      const auto [k, l] = pairs[bb];
      Jet dst = b.Rm.at({i, j, k, l});
      Jet::fma_acc(dst, g2.at({i, k}), Rc_m.at({j, l}));
      Jet::fma_acc(dst, g2.at({i, l}), Rc_p.at({j, k}));
      Jet::fma_acc(dst, g2.at({j, k}), Rc_p.at({i, l}));
      Jet::fma_acc(dst, g2.at({j, l}), Rc_m.at({i, k}));
      Jet::fma_acc(dst, RG.at({i, k}), g2.at({j, l}));
      Jet::fma_acc(dst, RGneg.at({i, l}), g2.at({j, k}));
      fill_riemann_class(b.W_weyl, i, j, k, l, dst);
    }

  // Cotton from first derivatives of Ricci; exactly antisymmetric in (i, j).
  const PointTensor& dRc = b.dRc;
  PointTensor dR(n, {Variance::Down}, K - 3, pt);
  for (int a = 0; a < n; ++a) dR.at({a}) = b.R.axis_derivative(a);
  const PointTensor g3 = truncate_tensor(metric.g, K - 3);
  const double c2 = 1.0 / (2.0 * (n - 1));
  b.C_cotton = PointTensor(n, {Variance::Down, Variance::Down, Variance::Down}, K - 3, pt);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        Jet v = dRc.at({i, j, k}) - dRc.at({j, i, k});
        Jet corr = Jet::constant(n, K - 3, 0.0);
        Jet::fma_acc(corr, g3.at({j, k}), dR.at({i}));
        Jet neg = Jet::constant(n, K - 3, 0.0);
        Jet::fma_acc(neg, g3.at({i, k}), dR.at({j}));
        corr -= neg;
        v -= corr * c2;
        b.C_cotton.at({j, i, k}) = -v;
        b.C_cotton.at({i, j, k}) = std::move(v);
      }
  return b;
}

/// Convention self-test: flat space is curvature-free and the round
/// S^4(sqrt 6) has R = 2, Rc = g/2. Runs once per process.
void run_convention_self_test() {
  {
    GeometrySpec s4 = catalog_get("S4");
    const std::vector<double> x = {1.1, 0.9, 1.3, 2.0};
    MetricAtPoint m = make_metric(s4.primary().metric_jets(x, 3), x);
    CurvatureBundle b = bundle_impl(m, true);
    if (std::fabs(b.R.value() - 2.0) > 1e-9)
      throw std::logic_error("curvature convention self-test failed: R(S^4(sqrt 6)) != 2");
    PointTensor res = b.Rc - truncate_tensor(m.g, b.Rc.order()) * 0.5;
    if (res.max_abs_value() > 1e-9)
      throw std::logic_error("curvature convention self-test failed: Rc(S^4) != g/2");
  }
  {
    GeometrySpec e4 = catalog_get("E4");
    const std::vector<double> x = {0.3, -0.2, 0.5, 0.1};
    MetricAtPoint m = make_metric(e4.primary().metric_jets(x, 3), x);
    CurvatureBundle b = bundle_impl(m, true);
    if (b.Rm.max_abs_coeff() > 1e-12)
      throw std::logic_error("curvature convention self-test failed: flat Rm != 0");
  }
}

struct SelfTestOnce {
  SelfTestOnce() { run_convention_self_test(); }
};

}  // namespace

CurvatureBundle curvature_bundle(const MetricAtPoint& metric) {
  static const SelfTestOnce once;
  (void)once;
  return bundle_impl(metric, true);
}

CurvatureBundle curvature_bundle_core(const MetricAtPoint& metric) {
  static const SelfTestOnce once;
  (void)once;
  return bundle_impl(metric, false);
}

PointTensor weyl_divergence_check(const CurvatureBundle& bundle, const MetricAtPoint& metric) {
  const int n = metric.dim;
  if (!bundle.has_weyl) throw std::logic_error("bundle lacks the Weyl/Cotton tensors");
  if (n <= 3) throw std::invalid_argument("Cotton-Weyl relation undefined for n <= 3");
  if (metric.order < 4) throw std::domain_error("weyl divergence check needs jet order >= 4");
  PointTensor divW = covariant_divergence(bundle.W_weyl, 3, metric);  // order K-3
  return truncate_tensor(bundle.C_cotton, divW.order()) +
         divW * (static_cast<double>(n - 2) / (n - 3));
}

PointTensor bach(const MetricAtPoint& metric, const CurvatureBundle& bundle, BachMode mode) {
  const int n = metric.dim;
  const int K = metric.order;
  if (mode == BachMode::Dim4 && n != 4)
    throw std::invalid_argument("Bach dim4 mode requires dimension 4");
  if (n <= 3) throw std::invalid_argument("Bach tensor needs dimension > 3");
  if (K < 4) throw std::domain_error("Bach tensor needs jet order >= 4");
  if (!bundle.has_weyl) throw std::logic_error("bundle lacks the Weyl/Cotton tensors");
  std::vector<double> pt(bundle.Rc.point().begin(), bundle.Rc.point().end());

  // grad^l W_ikjl via the raised tensor Wup_ikj^l = g^{lb} W_ikjb, which is
  // antisymmetric in (i, k); then the inner divergence A_ikj = grad_l Wup,
  // and the outer divergence through the generic kernel.
  const PointTensor& W = bundle.W_weyl;  // order K-2
  const PointTensor ginv2 = truncate_tensor(metric.g_inv, K - 2);
  PointTensor Wup(n, {Variance::Down, Variance::Down, Variance::Down, Variance::Up}, K - 2,
                  pt);
  for (int i = 0; i < n; ++i)
    for (int k = i + 1; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
          Jet& dst = Wup.at({i, k, j, l});
          for (int bb = 0; bb < n; ++bb)
            Jet::fma_acc(dst, ginv2.at({l, bb}), W.at({i, k, j, bb}));
          Wup.at({k, i, j, l}) = -dst;
        }

  const PointTensor& G = metric.christoffel;  // order K-1
  const PointTensor G3 = truncate_tensor(G, K - 3);
  const PointTensor G3neg = G3 * -1.0;
  const PointTensor Wup3 = truncate_tensor(Wup, K - 3);
  PointTensor A(n, {Variance::Down, Variance::Down, Variance::Down}, K - 3, pt);
  for (int i = 0; i < n; ++i)
    for (int k = i + 1; k < n; ++k)
      for (int j = 0; j < n; ++j) {
        Jet acc = Jet::constant(n, K - 3, 0.0);
        for (int bb = 0; bb < n; ++bb) {
          acc += Wup.at({i, k, j, bb}).axis_derivative(bb);
          for (int p = 0; p < n; ++p) {
            // -Gamma^p_{b i} Wup_pkj^b - Gamma^p_{b k} Wup_ipj^b
            // -Gamma^p_{b j} Wup_ikp^b + Gamma^b_{b p} Wup_ikj^p
            Jet::fma_acc(acc, G3neg.at({p, bb, i}), Wup3.at({p, k, j, bb}));
            Jet::fma_acc(acc, G3neg.at({p, bb, k}), Wup3.at({i, p, j, bb}));
            Jet::fma_acc(acc, G3neg.at({p, bb, j}), Wup3.at({i, k, p, bb}));
            Jet::fma_acc(acc, G3.at({bb, bb, p}), Wup3.at({i, k, j, p}));
          }
        }
        A.at({k, i, j}) = -acc;
        A.at({i, k, j}) = std::move(acc);
      }
  PointTensor B1 = covariant_divergence(A, 1, metric);  // (i,j), order K-4

  PointTensor Rc_uu = raise_lower(raise_lower(bundle.Rc, 0, metric), 1, metric);
  const PointTensor Rc_uu_t = truncate_tensor(Rc_uu, K - 4);
  const PointTensor Wt = truncate_tensor(W, K - 4);
  PointTensor B2(n, {Variance::Down, Variance::Down}, K - 4, pt);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Jet& dst = B2.at({i, j});
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) Jet::fma_acc(dst, Rc_uu_t.at({k, l}), Wt.at({i, k, j, l}));
    }

  const double c1 = (mode == BachMode::Dim4) ? 1.0 : 1.0 / (n - 3);
  const double c2 = (mode == BachMode::Dim4) ? 0.5 : 1.0 / (n - 2);
  PointTensor B = B1 * c1 + B2 * c2;
  B.set_symmetry(SymmetryTag::SymmetricPair);
  return B;
}

namespace {

/// Shared assembly for the U tensor given its six coefficients
/// (RmRc, DeltaRc, |Rc|^2 g, R Rc, DeltaR g, R^2 g).
PointTensor assemble_u(const PointTensor& RmRc, const PointTensor& dtaRc, const Jet& rc_norm2,
                       const PointTensor& g, const PointTensor& Rc, const Jet& R,
                       const Jet& deltaR, double c_rmrc, double c_lap, double c_rcn,
                       double c_rrc, double c_dr, double c_r2) {
  PointTensor U = RmRc * c_rmrc + dtaRc * c_lap;
  U += scale_by_jet(g, rc_norm2 * c_rcn);
  U += scale_by_jet(Rc, R * c_rrc);
  U += scale_by_jet(g, deltaR * c_dr);
  U += scale_by_jet(g, R * R * c_r2);
  return U;
}

struct QuadraticIngredients {
  PointTensor g, Rc, Rm;
  Jet R;
  PointTensor dtaRc;  // connection Laplacian of Ricci
  PointTensor hessR;
  Jet deltaR;
  PointTensor Rc_uu;
  PointTensor RmRc;  // R_ipjq Rc^pq
  Jet rc_norm2;
};

QuadraticIngredients quadratic_ingredients(const MetricAtPoint& metric,
                                           const CurvatureBundle& bundle) {
  const int n = metric.dim;
  const int K = metric.order;
  if (K < 4) throw std::domain_error("quadratic curvature tensors need jet order >= 4");
  std::vector<double> pt(bundle.Rc.point().begin(), bundle.Rc.point().end());
  const int out_order = K - 4;

  QuadraticIngredients q;
  q.g = truncate_tensor(metric.g, out_order);
  q.Rc = truncate_tensor(bundle.Rc, out_order);
  q.Rm = truncate_tensor(bundle.Rm, out_order);
  q.R = bundle.R.truncated(out_order);

  q.dtaRc = covariant_divergence(bundle.dRc, 0, metric);  // order K-4
  PointTensor dR(n, {Variance::Down}, K - 3, pt);
  for (int a = 0; a < n; ++a) dR.at({a}) = bundle.R.axis_derivative(a);
  q.hessR = covariant_derivative(dR, metric);  // order K-4
  q.deltaR = Jet::constant(n, out_order, 0.0);
  const PointTensor ginv4 = truncate_tensor(metric.g_inv, out_order);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) Jet::fma_acc(q.deltaR, ginv4.at({a, b}), q.hessR.at({a, b}));

  q.Rc_uu =
      truncate_tensor(raise_lower(raise_lower(bundle.Rc, 0, metric), 1, metric), out_order);
  q.RmRc = PointTensor(n, {Variance::Down, Variance::Down}, out_order, pt);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Jet& dst = q.RmRc.at({i, j});
      for (int p = 0; p < n; ++p)
        for (int qq = 0; qq < n; ++qq)
          Jet::fma_acc(dst, q.Rc_uu.at({p, qq}), q.Rm.at({i, p, j, qq}));
    }
  q.rc_norm2 = tensor_norm2_jet(q.Rc, metric);
  return q;
}

}  // namespace

PointTensor quadratic_u_dim4(const MetricAtPoint& metric, const CurvatureBundle& bundle) {
  if (metric.dim != 4) throw std::invalid_argument("dimension-4 U form requires dimension 4");
  QuadraticIngredients q = quadratic_ingredients(metric, bundle);
  PointTensor U4 = assemble_u(q.RmRc, q.dtaRc, q.rc_norm2, q.g, q.Rc, q.R, q.deltaR, 2.0, 1.0,
                              -0.5, -1.0, -0.5, 0.25);
  U4.set_symmetry(SymmetryTag::SymmetricPair);
  return U4;
}

QuadraticTensors quadratic_tensors(const MetricAtPoint& metric, const CurvatureBundle& bundle,
                                   bool with_w_quad) {
  const int n = metric.dim;
  std::vector<double> pt(bundle.Rc.point().begin(), bundle.Rc.point().end());
  QuadraticIngredients q = quadratic_ingredients(metric, bundle);
  const int out_order = q.g.order();
  const PointTensor& g4 = q.g;
  const PointTensor& Rc4 = q.Rc;
  const PointTensor& Rm4 = q.Rm;
  const Jet& R4 = q.R;
  const Jet& deltaR = q.deltaR;
  const Jet& rc_norm2 = q.rc_norm2;

  const double nm3 = n - 3;
  QuadraticTensors out;
  out.U = assemble_u(q.RmRc, q.dtaRc, rc_norm2, g4, Rc4, R4, deltaR, 2.0 * nm3, nm3,
                     -0.5 * nm3, -nm3, -0.5 * nm3, 0.25 * nm3);
  out.U.set_symmetry(SymmetryTag::SymmetricPair);

  if (n == 4) {
    // Dimension-4 coefficients written out; must reproduce the general form.
    PointTensor U4 = assemble_u(q.RmRc, q.dtaRc, rc_norm2, g4, Rc4, R4, deltaR, 2.0, 1.0,
                                -0.5, -1.0, -0.5, 0.25);
    double dev = (U4 - out.U).max_abs_coeff();
    if (dev > 1e-10 * (1.0 + out.U.max_abs_coeff()))
      throw std::logic_error("U tensor: general-n and dimension-4 forms disagree");
  }

  // V = -hess R + DeltaR g + R Rc - R^2/4 g.
  out.V = q.hessR * -1.0;
  out.V += scale_by_jet(g4, deltaR);
  out.V += scale_by_jet(Rc4, R4);
  out.V += scale_by_jet(g4, R4 * R4 * -0.25);
  out.V.set_symmetry(SymmetryTag::SymmetricPair);

  if (!with_w_quad) return out;

  // W_quad = Rm.Rm - |Rm|^2/4 g - 2 RmRc + R Rc - 2 Rc.Rc + |Rc|^2 g - R^2/4 g.
  PointTensor Rm_up = Rm4;
  for (int s = 1; s <= 3; ++s) Rm_up = raise_lower(Rm_up, s, metric);
  PointTensor RmRm(n, {Variance::Down, Variance::Down}, out_order, pt);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Jet& dst = RmRm.at({i, j});
      for (int p = 0; p < n; ++p)
        for (int s = 0; s < n; ++s)
          for (int r = 0; r < n; ++r)
            Jet::fma_acc(dst, Rm_up.at({i, p, s, r}), Rm4.at({j, p, s, r}));
    }
  const PointTensor Rc_mixed = raise_lower(Rc4, 0, metric);  // Rc^p_j
  PointTensor RcRc(n, {Variance::Down, Variance::Down}, out_order, pt);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Jet& dst = RcRc.at({i, j});
      for (int p = 0; p < n; ++p) Jet::fma_acc(dst, Rc4.at({p, i}), Rc_mixed.at({p, j}));
    }
  const Jet rm_norm2 = tensor_norm2_jet(Rm4, metric);
  out.W_quad = RmRm;
  out.W_quad += scale_by_jet(g4, rm_norm2 * -0.25);
  out.W_quad += q.RmRc * -2.0;
  out.W_quad += scale_by_jet(Rc4, R4);
  out.W_quad += RcRc * -2.0;
  out.W_quad += scale_by_jet(g4, rc_norm2);
  out.W_quad += scale_by_jet(g4, R4 * R4 * -0.25);
  out.W_quad.set_symmetry(SymmetryTag::SymmetricPair);
  return out;
}

PointTensor bach_like(const PointTensor& U, const PointTensor& V, double alpha, double beta) {
  PointTensor B = U * alpha + V * beta;
  B.set_symmetry(SymmetryTag::SymmetricPair);
  return B;
}

PointTensor d_tensor(const CurvatureBundle& bundle, const PointTensor& grad_f_up,
                     const MetricAtPoint& metric) {
  (void)metric;
  const int order = bundle.C_cotton.order();
  const PointTensor Wt = truncate_tensor(bundle.W_weyl, order);
  const PointTensor gf = truncate_tensor(grad_f_up, order);
  PointTensor D = bundle.C_cotton + contract_with(Wt, 3, gf, 0);
  return D;
}

double curvature_scale(const MetricAtPoint& metric, const CurvatureBundle& bundle) {
  const double gi = metric.g_inv.max_abs_value();
  return 1.0 + std::max(gi * gi, bundle.Rm.max_abs_value());
}

double cotton_conformal_deviation(const SmallMat<Jet>& g_jets, const Jet& f_jet,
                                  std::vector<double> point) {
  const int n = g_jets.n();
  const Jet factor = exp(f_jet * (2.0 / (2.0 - n)));
  SmallMat<Jet> gh(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) gh(i, j) = g_jets(i, j) * factor;
  MetricAtPoint mh = make_metric(gh, point);
  CurvatureBundle bh = curvature_bundle(mh);

  MetricAtPoint m = make_metric(g_jets, point);
  CurvatureBundle b = curvature_bundle(m);
  PointTensor df(n, {Variance::Down}, f_jet.order() - 1, point);
  for (int a = 0; a < n; ++a) df.at({a}) = f_jet.axis_derivative(a);
  PointTensor grad_f = raise_lower(df, 0, m);
  PointTensor D = d_tensor(b, grad_f, m);

  return (truncate_tensor(bh.C_cotton, D.order()) - D).max_abs_value();
}

}  // namespace gradsol
