#include "gradsol/suite.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "gradsol/fd_oracle.hpp"
#include "gradsol/jet_arena.hpp"
#include "gradsol/lemmas.hpp"
#include "gradsol/parallel.hpp"
#include "gradsol/point_context.hpp"
#include "gradsol/version.hpp"

namespace gradsol {

namespace {

using json = nlohmann::ordered_json;

const char* const kPointwiseIds[] = {
    "ricci-commutation", "metric-compatibility", "riemann-symmetries",
    "weyl-trace-free",       "cotton-symmetries",    "cotton-weyl-divergence",
    "bach-dim4-reduction",   "bach-decomposition-uv", "quadratic-w-vanishing",
    "trace-v",               "trace-u",              "trace-b",
    "trace-bachlike",        "div-u",                "div-v",
    "div-b",                 "bachlike-decomposition",        "u-dim4-reduction",
    "cauchy-schwarz-rc",     "bochner"};

const char* const kSolitonIds[] = {
    "soliton-equation",  "soliton-normalization", "soliton-trace",
    "soliton-gradR",     "grad-cubic",            "einstein-uv-vanishing",
    "s4-scalar-curvature", "cyl-conformally-flat", "cyl-quadratic-values",
    "gauss-flat"};

const char* const kDiagnosticIds[] = {"conformal-cotton-diagnostic"};

bool is_lemma_id(const std::string& id) {
  for (const char* k : known_lemma_ids())
    if (id == k) return true;
  return id == "decay-probe";
}

bool is_in(const std::string& id, std::span<const char* const> list) {
  for (const char* k : list)
    if (id == k) return true;
  return false;
}

/// Per-geometry shared inputs for the pointwise runners.
struct SharedData {
  std::vector<Polynomial> covector;           // dim components
  std::vector<std::pair<double, double>> ab;  // random (alpha, beta) pairs
};

double trace2_value(const PointTensor& t, const MetricAtPoint& m) {
  double acc = 0.0;
  for (int a = 0; a < t.dim(); ++a)
    for (int b = 0; b < t.dim(); ++b)
      acc += m.g_inv.at({a, b}).value() * t.at({a, b}).value();
  return acc;
}

double weyl_trace_residual(PointContext& ctx) {
  const PointTensor& W = ctx.bundle().W_weyl;
  const MetricAtPoint& m = ctx.metric();
  double res = 0.0;
  for (int s1 = 0; s1 < 4; ++s1)
    for (int s2 = s1 + 1; s2 < 4; ++s2) {
      PointTensor raised = raise_lower(W, s1, m);
      PointTensor tr = contract(raised, s1, s2);
      res = std::max(res, tr.max_abs_value());
    }
  return res;
}

double cotton_structure_residual(PointContext& ctx) {
  const PointTensor& C = ctx.bundle().C_cotton;
  const MetricAtPoint& m = ctx.metric();
  const int n = ctx.dim();
  double res = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        res = std::max(res,
                       std::fabs(C.at({i, j, k}).value() + C.at({j, i, k}).value()));
  // g^{jk} C_ijk and g^{ik} C_ijk
  for (int tgt = 1; tgt <= 2; ++tgt) {
    PointTensor raised = raise_lower(C, tgt, m);
    PointTensor tr = contract(raised, tgt, tgt == 1 ? 2 : 1);
    res = std::max(res, tr.max_abs_value());
  }
  return res;
}

double eq1_residual(PointContext& ctx, const SharedData& sd) {
  const int n = ctx.dim();
  const MetricAtPoint& m = ctx.metric();
  std::vector<Jet> xj(n);
  for (int i = 0; i < n; ++i) xj[i] = Jet::variable(i, ctx.x()[i], n, ctx.order());
  PointTensor omega(n, {Variance::Down}, ctx.order(),
                    {ctx.x().begin(), ctx.x().end()});
  for (int k = 0; k < n; ++k)
    omega.at({k}) = sd.covector[k].eval(std::span<const Jet>(xj.data(), xj.size()));

  PointTensor domega = covariant_derivative(omega, m);
  PointTensor ddomega = covariant_derivative(domega, m);  // (i, j, k)
  const PointTensor& mixed = ctx.bundle().Rm_mixed;
  const PointTensor omega_t = truncate_tensor(omega, ddomega.order());
  const PointTensor mixed_t = truncate_tensor(mixed, ddomega.order());
  double res = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double v = ddomega.at({i, j, k}).value() - ddomega.at({j, i, k}).value();
        for (int l = 0; l < n; ++l)
          v += mixed_t.at({i, j, k, l}).value() * omega_t.at({l}).value();
        res = std::max(res, std::fabs(v));
      }
  return res;
}

double metric_compat_residual(PointContext& ctx) {
  const MetricAtPoint& m = ctx.metric();
  PointTensor dg = covariant_derivative(m.g, m);
  double dscale = 1.0;
  for (int i = 0; i < ctx.dim(); ++i)
    for (int j = 0; j < ctx.dim(); ++j)
      for (int a = 0; a < ctx.dim(); ++a)
        dscale = std::max(dscale, std::fabs(m.g.at({i, j}).axis_derivative(a).value()));
  return dg.max_abs_value() / dscale;
}

struct PointwiseSpec {
  std::string id;
  std::string anchor;
  int min_order = 3;
  double tol = 1e-9;
  bool needs_potential = false;
  bool dim4_only = false;
  std::function<double(PointContext&, const SharedData&)> run;
};

std::vector<PointwiseSpec> pointwise_registry() {
  std::vector<PointwiseSpec> r;
  auto add = [&r](PointwiseSpec s) { r.push_back(std::move(s)); };

  add({"ricci-commutation", "Ricci commutation formula for covector derivatives", 3, 1e-9, false, false,
       [](PointContext& c, const SharedData& sd) { return eq1_residual(c, sd) / c.scale(); }});
  add({"metric-compatibility", "Levi-Civita metric compatibility (grad g = 0)", 2, 1e-11, false, false,
       [](PointContext& c, const SharedData&) { return metric_compat_residual(c); }});
  add({"riemann-symmetries", "Riemann tensor pair symmetries", 3, 1e-10, false, false,
       [](PointContext& c, const SharedData&) {
         return symmetry_residual(c.bundle().Rm) / c.scale();
       }});
  add({"weyl-trace-free", "Weyl tensor is totally trace-free", 3, 1e-10, false, false,
       [](PointContext& c, const SharedData&) { return weyl_trace_residual(c) / c.scale(); }});
  add({"cotton-symmetries", "Cotton tensor antisymmetry and vanishing traces", 3, 1e-10, false, false,
       [](PointContext& c, const SharedData&) {
         return cotton_structure_residual(c) / c.scale();
       }});
  add({"cotton-weyl-divergence", "C = -(n-2)/(n-3) div W", 4, 1e-9, false, false,
       [](PointContext& c, const SharedData&) {
         return weyl_divergence_check(c.bundle(), c.metric()).max_abs_value() / c.scale();
       }});
  add({"bach-dim4-reduction", "general-n Bach normalization reduces at n = 4", 4, 1e-10, false, true,
       [](PointContext& c, const SharedData&) {
         PointTensor gen = bach(c.metric(), c.bundle(), BachMode::GeneralN);
         return (c.bach4() - gen).max_abs_value() / c.scale();
       }});
  add({"bach-decomposition-uv", "B = U/2 + V/6 in dimension 4", 4, 1e-9, false, true,
       [](PointContext& c, const SharedData&) {
         const QuadraticTensors& q = c.quadratic();
         PointTensor rhs = bach_like(q.U, q.V, 0.5, 1.0 / 6.0);
         return (c.bach4() - rhs).max_abs_value() / c.scale();
       }});
  add({"quadratic-w-vanishing", "quadratic W tensor vanishes in dimension 4", 4, 1e-9, false, true,
       [](PointContext& c, const SharedData&) {
         return c.quadratic().W_quad.max_abs_value() / c.scale();
       }});
  add({"trace-v", "tr V = 3 Delta R", 4, 1e-9, false, true,
       [](PointContext& c, const SharedData&) {
         return std::fabs(trace2_value(c.quadratic().V, c.metric()) -
                          3.0 * c.delta_R_value()) /
                c.scale();
       }});
  add({"trace-u", "tr U = -Delta R", 4, 1e-9, false, true,
       [](PointContext& c, const SharedData&) {
         return std::fabs(trace2_value(c.quadratic().U, c.metric()) + c.delta_R_value()) /
                c.scale();
       }});
  add({"trace-b", "Bach tensor is trace-free", 4, 1e-9, false, true,
       [](PointContext& c, const SharedData&) {
         return std::fabs(trace2_value(c.bach4(), c.metric())) / c.scale();
       }});
  add({"trace-bachlike", "tr(alpha U + beta V) = (3 beta - alpha) Delta R", 4, 1e-9, false, true,
       [](PointContext& c, const SharedData& sd) {
         const QuadraticTensors& q = c.quadratic();
         const double dR = c.delta_R_value();
         double res = 0.0;
         for (auto [a, b] : sd.ab) {
           PointTensor bl = bach_like(q.U, q.V, a, b);
           res = std::max(res,
                          std::fabs(trace2_value(bl, c.metric()) - (3.0 * b - a) * dR));
         }
         return res / c.scale();
       }});
  add({"div-u", "U is divergence-free", 5, 1e-8, false, true,
       [](PointContext& c, const SharedData&) {
         return covariant_divergence(c.quadratic().U, 0, c.metric()).max_abs_value() /
                c.scale();
       }});
  add({"div-v", "V is divergence-free", 5, 1e-8, false, true,
       [](PointContext& c, const SharedData&) {
         return covariant_divergence(c.quadratic().V, 0, c.metric()).max_abs_value() /
                c.scale();
       }});
  add({"div-b", "Bach tensor is divergence-free", 5, 1e-8, false, true,
       [](PointContext& c, const SharedData&) {
         return covariant_divergence(c.bach4(), 0, c.metric()).max_abs_value() / c.scale();
       }});
  add({"bachlike-decomposition", "alpha U + beta V = 2 alpha B + (beta - alpha/3) V", 4, 1e-9, false, true,
       [](PointContext& c, const SharedData& sd) {
         const QuadraticTensors& q = c.quadratic();
         double res = 0.0;
         for (auto [a, b] : sd.ab) {
           PointTensor lhs = bach_like(q.U, q.V, a, b);
           PointTensor rhs = c.bach4() * (2.0 * a) + q.V * (b - a / 3.0);
           res = std::max(res, (lhs - rhs).max_abs_value());
         }
         return res / c.scale();
       }});
  add({"u-dim4-reduction", "general-n U reduces to the dimension-4 coefficients", 4, 1e-13, false, true,
       [](PointContext& c, const SharedData&) {
         PointTensor u4 = quadratic_u_dim4(c.metric(), c.bundle());
         return (c.quadratic().U - u4).max_abs_value() / c.scale();
       }});
  add({"cauchy-schwarz-rc", "R^2 - 4|Rc|^2 <= 0", 3, 1e-10, false, true,
       [](PointContext& c, const SharedData&) {
         const double slack = pointwise_identity(PointwiseId::CauchySchwarzRc, c);
         return std::max(0.0, -slack) / c.scale();
       }});
  add({"bochner", "Bochner formula for |grad f|^2", 3, 1e-10, true, false,
       [](PointContext& c, const SharedData&) {
         return std::fabs(pointwise_identity(PointwiseId::Bochner, c)) / c.scale();
       }});
  return r;
}

struct SolitonSpec {
  std::string id;
  std::string anchor;
  int min_order = 3;
  double tol = 1e-10;
  std::optional<CatalogKind> only;
  std::function<double(PointContext&)> run;
};

std::vector<SolitonSpec> soliton_registry() {
  std::vector<SolitonSpec> r;
  auto add = [&r](SolitonSpec s) { r.push_back(std::move(s)); };

  add({"soliton-equation", "Hess f + Rc = g/2", 3, 1e-10, std::nullopt, [](PointContext& c) {
         return c.soliton().soliton_residual.max_abs_value();
       }});
  add({"soliton-normalization", "normalization R + |grad f|^2 = f", 3, 1e-10,
       std::nullopt,
       [](PointContext& c) { return std::fabs(c.soliton().normalization_residual); }});
  add({"soliton-trace", "Delta f = 2 - R (soliton trace)", 3, 1e-10, std::nullopt,
       [](PointContext& c) { return std::fabs(c.soliton().trace_residual); }});
  add({"soliton-gradR", "grad R = 2 Rc(grad f)", 3, 1e-10, std::nullopt,
       [](PointContext& c) { return c.soliton().gradR_residual.max_abs_value(); }});
  add({"grad-cubic", "(grad_k Rc_ij) grad^k f grad^i f grad^j f identity", 4, 1e-10, std::nullopt,
       [](PointContext& c) {
         return std::fabs(pointwise_identity(PointwiseId::GradCubic, c));
       }});
  add({"einstein-uv-vanishing", "Einstein sphere: U = 0 and V = 0", 4, 1e-9, CatalogKind::Sphere4,
       [](PointContext& c) {
         const QuadraticTensors& q = c.quadratic();
         return std::max(q.U.max_abs_value(), q.V.max_abs_value());
       }});
  add({"s4-scalar-curvature", "R = 2 on the round sphere of radius sqrt 6", 3, 1e-10, CatalogKind::Sphere4,
       [](PointContext& c) { return std::fabs(c.R_value() - 2.0); }});
  add({"cyl-conformally-flat", "cylinder is conformally flat: W, C, B, D vanish", 4, 1e-9, CatalogKind::Cylinder,
       [](PointContext& c) {
         return std::max({c.bundle().W_weyl.max_abs_value(),
                          c.bundle().C_cotton.max_abs_value(), c.bach4().max_abs_value(),
                          c.dtensor().max_abs_value()});
       }});
  add({"cyl-quadratic-values", "cylinder values of V and U = -V/3", 4, 1e-9, CatalogKind::Cylinder,
       [](PointContext& c) {
         const QuadraticTensors& q = c.quadratic();
         const MetricAtPoint& m = c.metric();
         double res = std::fabs(q.V.at({3, 3}).value() + 9.0 / 16.0);
         for (int a = 0; a < 3; ++a)
           for (int b = 0; b < 3; ++b)
             res = std::max(res, std::fabs(q.V.at({a, b}).value() -
                                           (3.0 / 16.0) * m.g.at({a, b}).value()));
         res = std::max(res, (q.U + q.V * (1.0 / 3.0)).max_abs_value());
         return res;
       }});
  add({"gauss-flat", "Gaussian soliton: curvature-derived tensors vanish", 4, 1e-10, CatalogKind::Gaussian,
       [](PointContext& c) {
         const QuadraticTensors& q = c.quadratic();
         return std::max({c.bundle().Rm.max_abs_value(), q.U.max_abs_value(),
                          q.V.max_abs_value(), c.bach4().max_abs_value(),
                          c.dtensor().max_abs_value()});
       }});
  return r;
}

}  // namespace

std::vector<std::string> expand_suite_ids(const std::vector<std::string>& selection) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  auto push = [&](const std::string& id) {
    if (seen.insert(id).second) out.push_back(id);
  };
  for (const std::string& sel : selection) {
    if (sel == "all") {
      for (const char* id : kPointwiseIds) push(id);
      for (const char* id : kSolitonIds) push(id);
      for (const char* id : known_lemma_ids()) push(id);
      push("decay-probe");
      for (const char* id : kDiagnosticIds) push(id);
    } else if (sel == "pointwise-all") {
      for (const char* id : kPointwiseIds) push(id);
    } else if (sel == "soliton-all") {
      for (const char* id : kSolitonIds) push(id);
    } else if (sel == "lemmas") {
      for (const char* id : known_lemma_ids()) push(id);
      push("decay-probe");
    } else {
      const bool known = is_in(sel, {kPointwiseIds, std::size(kPointwiseIds)}) ||
                         is_in(sel, {kSolitonIds, std::size(kSolitonIds)}) ||
                         is_in(sel, {kDiagnosticIds, std::size(kDiagnosticIds)}) ||
                         is_lemma_id(sel);
      if (!known) throw ConfigError("unknown identity id: " + sel);
      push(sel);
    }
  }
  return out;
}

int required_jet_order(const std::string& id) {
  for (const auto& s : pointwise_registry())
    if (s.id == id) return s.min_order;
  for (const auto& s : soliton_registry())
    if (s.id == id) return s.min_order;
  if (id == "decay-probe") return 3;
  if (id == "conformal-cotton-diagnostic") return 3;
  if (id.rfind("L3.", 0) == 0) return 3;
  if (is_lemma_id(id)) return 4;
  throw ConfigError("unknown identity id: " + id);
}

GeometrySpec build_geometry(const Manifest& m, const std::string& name) {
  if (name == "E4" || name == "GAUSS" || name == "S4" || name == "CYL")
    return catalog_get(name);
  if (name == "RAND" || name == "RAND4") {
    RandomMetricSpec spec;
    spec.seed = m.rand_seed;
    spec.dim = 4;
    spec.eps = m.rand_eps;
    spec.degree = m.rand_degree;
    spec.with_potential = m.rand_potential;
    return random_metric(spec);
  }
  if (name == "RAND5") {
    RandomMetricSpec spec;
    spec.seed = m.rand_seed ^ 0x500;
    spec.dim = 5;
    spec.eps = m.rand_eps;
    spec.degree = m.rand_degree;
    spec.with_potential = m.rand_potential;
    return random_metric(spec);
  }
  throw ConfigError("unknown geometry selector: " + name);
}

namespace {

double default_level(const GeometrySpec& g) {
  switch (g.kind) {
    case CatalogKind::Gaussian: return 4.0;
    case CatalogKind::Cylinder: return 5.0;
    default: return 4.0;
  }
}

void run_pointwise_block(const Manifest& m, const GeometrySpec& geom,
                         const std::vector<std::string>& ids,
                         std::vector<IdentityReport>& out) {
  std::vector<PointwiseSpec> registry = pointwise_registry();
  std::vector<const PointwiseSpec*> active;
  for (const std::string& id : ids)
    for (const auto& s : registry)
      if (s.id == id) {
        if (s.dim4_only && geom.dim != 4) continue;
        if (s.needs_potential && !geom.has_potential) continue;
        if (geom.dim < 4) continue;  // Weyl-family identities need n > 3
        active.push_back(&s);
      }
  if (active.empty()) return;

  SharedData sd;
  {
    std::mt19937_64 rng(m.seed ^ 0xabcdef12345ull);
    for (int k = 0; k < geom.dim; ++k) {
      Polynomial p = random_polynomial(geom.dim, 3, rng);
      const double l1 = p.coef_l1();
      if (l1 > 0) p.scale(1.0 / l1);
      sd.covector.push_back(std::move(p));
    }
    for (int k = 0; k < 5; ++k)
      sd.ab.emplace_back(uniform_in(rng, -2.0, 2.0), uniform_in(rng, -2.0, 2.0));
  }

  int order = 0;
  for (const auto* s : active) order = std::max(order, s->min_order);
  order = std::max(order, 3);
  if (m.jet_order < order)
    throw ConfigError("jet order " + std::to_string(m.jet_order) +
                      " below what the selected identities need");
  order = m.jet_order;

  auto pts = sample_points(geom, m.samples, m.seed);
  std::vector<std::vector<double>> res(active.size(),
                                       std::vector<double>(pts.size(), 0.0));
  parallel_for_chunks(pts.size(), m.threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t p = lo; p < hi; ++p) {
      JetArenaScope arena;
      PointContext ctx(geom, pts[p], order);
      for (std::size_t k = 0; k < active.size(); ++k) res[k][p] = active[k]->run(ctx, sd);
    }
  });

  for (std::size_t k = 0; k < active.size(); ++k) {
    IdentityReport rep;
    rep.id = active[k]->id;
    rep.anchor = active[k]->anchor;
    rep.geometry = geom.name;
    rep.samples = static_cast<long>(pts.size());
    rep.max_residual = *std::max_element(res[k].begin(), res[k].end());
    rep.tolerance = m.tol_pointwise > 0 ? m.tol_pointwise : active[k]->tol;
    rep.verdict = rep.max_residual <= rep.tolerance ? Verdict::Pass : Verdict::Fail;
    out.push_back(std::move(rep));
  }
}

void run_soliton_block(const Manifest& m, const GeometrySpec& geom,
                       const std::vector<std::string>& ids,
                       std::vector<IdentityReport>& out) {
  const bool catalog_soliton = geom.kind == CatalogKind::Gaussian ||
                               geom.kind == CatalogKind::Sphere4 ||
                               geom.kind == CatalogKind::Cylinder;
  std::vector<SolitonSpec> registry = soliton_registry();
  for (const std::string& id : ids) {
    for (const auto& s : registry) {
      if (s.id != id) continue;
      if (s.only && *s.only != geom.kind) continue;  // other geometries: not emitted
      IdentityReport rep;
      rep.id = s.id;
      rep.anchor = s.anchor;
      rep.geometry = geom.name;
      rep.tolerance = s.tol;
      if (!catalog_soliton) {
        rep.verdict = Verdict::SkippedHypothesis;
        rep.note = "requires an exact catalog soliton";
        out.push_back(std::move(rep));
        continue;
      }
      const int order = std::max(s.min_order, std::min(m.jet_order, 5));
      auto pts = sample_points(geom, std::min(m.samples, 50), m.seed);
      std::vector<double> res(pts.size(), 0.0);
      parallel_for_chunks(pts.size(), m.threads, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t p = lo; p < hi; ++p) {
          JetArenaScope arena;
          PointContext ctx(geom, pts[p], order);
          res[p] = s.run(ctx);
        }
      });
      rep.samples = static_cast<long>(pts.size());
      rep.max_residual = *std::max_element(res.begin(), res.end());
      rep.verdict = rep.max_residual <= rep.tolerance ? Verdict::Pass : Verdict::Fail;
      out.push_back(std::move(rep));
    }
  }
}

void run_diagnostic_block(const Manifest& m, const GeometrySpec& geom,
                          const std::vector<std::string>& ids,
                          std::vector<IdentityReport>& out) {
  for (const std::string& id : ids) {
    if (id != "conformal-cotton-diagnostic") continue;
    IdentityReport rep;
    rep.id = id;
    rep.anchor = "Cotton tensor of the conformally rescaled metric vs D";
    rep.geometry = geom.name;
    rep.verdict = Verdict::NotApplicable;
    if (!geom.has_potential || geom.dim != 4) {
      rep.note = "diagnostic needs a 4-d geometry with potential";
      out.push_back(std::move(rep));
      continue;
    }
    auto pts = sample_points(geom, 4, m.seed);
    double dev = 0.0;
    const int order = std::max(4, std::min(m.jet_order, 5));
    for (const auto& p : pts) {
      const Chart& c = geom.charts[p.chart];
      dev = std::max(dev, cotton_conformal_deviation(c.metric_jets(p.x, order),
                                                     c.potential_jet(p.x, order), p.x));
    }
    rep.samples = static_cast<long>(pts.size());
    rep.max_residual = dev;
    rep.note = "deviation of the conformal-metric Cotton tensor from D; recorded, not asserted";
    out.push_back(std::move(rep));
  }
}

void run_lemma_block(const Manifest& m, const GeometrySpec& geom,
                     const std::vector<std::string>& ids,
                     std::vector<IdentityReport>& out) {
  std::vector<std::string> lemma_ids;
  bool want_decay = false;
  for (const std::string& id : ids) {
    if (id == "decay-probe") want_decay = true;
    else if (is_lemma_id(id)) lemma_ids.push_back(id);
  }

  if (!lemma_ids.empty()) {
    LemmaOptions opt;
    opt.q = m.q;
    opt.threads = m.threads;
    opt.tol_rel = m.tol_integral_rel;
    opt.tol_abs = m.tol_integral_abs;
    opt.tail_tol = m.tail_tol;
    std::mt19937_64 rng(m.seed ^ 0x11ull);
    opt.alpha = uniform_in(rng, 0.25, 2.0);
    opt.beta = uniform_in(rng, 0.25, 2.0);
    const std::vector<double> levels =
        m.levels.empty() ? std::vector<double>{default_level(geom)} : m.levels;
    for (std::size_t li = 0; li < levels.size(); ++li) {
      opt.r = levels[li];
      auto reps = verify_lemmas(lemma_ids, geom, opt);
      for (auto& rep : reps) {
        if (levels.size() > 1) rep.note += " [r = " + std::to_string(opt.r) + "]";
        out.push_back(std::move(rep));
      }
      // Whole-manifold ids do not depend on r; emit them only once.
      if (li == 0) {
        std::vector<std::string> omega_only;
        for (const auto& id : lemma_ids)
          if (id.rfind("L3.", 0) == 0 || id == "L4" || id == "L5" || id == "L9")
            omega_only.push_back(id);
        lemma_ids = omega_only;
        if (lemma_ids.empty()) break;
      }
    }
  }

  if (want_decay) {
    IdentityReport rep;
    rep.id = "decay-probe";
    rep.anchor = "Lemmas 6-7 (finite-r probe)";
    rep.geometry = geom.name;
    rep.tolerance = 1e-8;
    if (!geom.has_potential) {
      rep.verdict = Verdict::SkippedHypothesis;
      rep.note = "geometry has no potential f";
    } else {
      const std::vector<double> rs =
          geom.kind == CatalogKind::Cylinder ? std::vector<double>{2.0, 4.0, 8.0}
                                             : std::vector<double>{2.0, 4.0, 8.0};
      auto probe = decay_probe(geom, 1.0, rs, m.q, m.threads);
      double worst = 0.0;
      std::string values;
      for (const auto& dp : probe) {
        worst = std::max(worst, std::fabs(dp.value));
        values += (values.empty() ? "" : ", ") + std::to_string(dp.value);
      }
      rep.samples = static_cast<long>(probe.size());
      rep.max_residual = worst;
      const bool catalog_soliton = geom.kind != CatalogKind::Random;
      if (catalog_soliton) {
        rep.verdict = worst <= rep.tolerance ? Verdict::Pass : Verdict::Fail;
      } else {
        rep.verdict = Verdict::LowAccuracy;
        rep.note = "indicator-restricted region; values reported, not asserted";
      }
      rep.note += (rep.note.empty() ? "" : "; ") + ("values: " + values);
    }
    out.push_back(std::move(rep));
  }
}

}  // namespace

SuiteResult run_identity_suite(const Manifest& m) {
  SuiteResult result;
  const std::vector<std::string> ids = expand_suite_ids(m.ids);

  // Jet-order gate, before any work happens.
  int needed = 0;
  for (const auto& id : ids) needed = std::max(needed, required_jet_order(id));
  if (m.jet_order < needed)
    throw ConfigError("manifest jet_order " + std::to_string(m.jet_order) +
                      " is below the largest order required by the selected identities (" +
                      std::to_string(needed) + ")");

  std::vector<std::string> pointwise, soliton, lemmas, diags;
  for (const auto& id : ids) {
    if (is_in(id, {kPointwiseIds, std::size(kPointwiseIds)})) pointwise.push_back(id);
    else if (is_in(id, {kSolitonIds, std::size(kSolitonIds)})) soliton.push_back(id);
    else if (is_in(id, {kDiagnosticIds, std::size(kDiagnosticIds)})) diags.push_back(id);
    else lemmas.push_back(id);
  }

  for (const std::string& gname : m.geometries) {
    GeometrySpec geom = build_geometry(m, gname);
    run_pointwise_block(m, geom, pointwise, result.identities);
    run_soliton_block(m, geom, soliton, result.identities);
    run_lemma_block(m, geom, lemmas, result.identities);
    run_diagnostic_block(m, geom, diags, result.identities);
  }

  std::stable_sort(result.identities.begin(), result.identities.end(),
                   [](const IdentityReport& a, const IdentityReport& b) {
                     if (a.id != b.id) return a.id < b.id;
                     return a.geometry < b.geometry;
                   });

  result.grid = regime_grid(m.grid_min, m.grid_max, m.grid_step);
  for (const auto& rep : result.identities)
    if (rep.verdict == Verdict::Fail) result.exit_code = 1;
  return result;
}

SuiteResult run_grid(const Manifest& m) {
  SuiteResult r;
  r.grid = regime_grid(m.grid_min, m.grid_max, m.grid_step);
  return r;
}

std::string render_report(const Manifest& m, const SuiteResult& r) {
  json doc;
  doc["schema"] = "v1";
  json meta;
  meta["tool"] = "gradsol";
  meta["version"] = kVersion;
  meta["seed"] = m.seed;
  meta["jet_order"] = m.jet_order;
  meta["quadrature_q"] = m.q;
  meta["samples"] = m.samples;
  meta["geometries"] = m.geometries;
  doc["meta"] = meta;

  json idents = json::array();
  for (const auto& rep : r.identities) {
    json e;
    e["id"] = rep.id;
    e["anchor"] = rep.anchor;
    e["geometry"] = rep.geometry;
    e["samples"] = rep.samples;
    e["max_residual"] = rep.max_residual;
    e["tolerance"] = rep.tolerance;
    e["verdict"] = verdict_name(rep.verdict);
    if (rep.refinement != 0.0) e["refinement"] = rep.refinement;
    if (!rep.note.empty()) e["note"] = rep.note;
    idents.push_back(std::move(e));
  }
  doc["identities"] = std::move(idents);

  json grid = json::array();
  for (const auto& v : r.grid) {
    json e;
    e["alpha"] = v.alpha;
    e["beta"] = v.beta;
    e["regime"] = regime_name(v.regime);
    e["in_lambda"] = v.in_lambda;
    e["conclusion"] = v.conclusion;
    grid.push_back(std::move(e));
  }
  doc["regime_grid"] = std::move(grid);

  int pass = 0, fail = 0, skipped = 0, na = 0, lowacc = 0;
  for (const auto& rep : r.identities) {
    switch (rep.verdict) {
      case Verdict::Pass: ++pass; break;
      case Verdict::Fail: ++fail; break;
      case Verdict::SkippedHypothesis: ++skipped; break;
      case Verdict::NotApplicable: ++na; break;
      case Verdict::LowAccuracy: ++lowacc; break;
    }
  }
  json summary;
  summary["pass"] = pass;
  summary["fail"] = fail;
  summary["skipped_hypothesis"] = skipped;
  summary["not_applicable"] = na;
  summary["low_accuracy"] = lowacc;
  summary["exit_code"] = r.exit_code;
  doc["summary"] = std::move(summary);

  return doc.dump(2) + "\n";
}

int run_manifest_to_file(const Manifest& m, bool grid_only) {
  SuiteResult r = grid_only ? run_grid(m) : run_identity_suite(m);
  const std::string text = render_report(m, r);
  std::ofstream out(m.out_path, std::ios::binary);
  if (!out) throw ConfigError("cannot write report: " + m.out_path);
  out << text;
  return r.exit_code;
}

}  // namespace gradsol
