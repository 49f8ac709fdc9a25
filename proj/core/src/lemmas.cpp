#include "gradsol/lemmas.hpp"

#include "gradsol/jet_arena.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

namespace gradsol {

namespace {

const char* const kLemmaIds[] = {"L3.1", "L3.2", "L3.3", "L3.4", "L3.5", "L3.6", "L4",
                                 "L5",   "L-VW", "L9",   "L10",  "L11",  "L13", "L14"};

const std::map<std::string, std::string> kAnchors = {
    {"L3.1", "boundary flux of grad R vanishes"},
    {"L3.2", "<grad R, grad f> integrates to zero"},
    {"L3.3", "|grad R|^2 volume integral equals its boundary forms"},
    {"L3.4", "weighted <grad R, grad f> integrates to zero"},
    {"L3.5", "weighted R Rc(grad f, grad f) integral identity"},
    {"L3.6", "weighted f <grad R, grad f> integrates to zero"},
    {"L4", "V(grad f, grad f) integral as a completed square"},
    {"L5", "weighted Hessian-of-R integral identity"},
    {"L-VW", "weighted V integral equals -1/4 weighted R^2 |grad f|^2"},
    {"L9", "U(grad f, grad f) integral identity"},
    {"L10", "weighted U(grad f, grad f) integral identity"},
    {"L11", "B-like vanishing: weighted R^2 and |Rc|^2 combination is zero"},
    {"L13", "weighted Bach integral equals -1/2 weighted |D|^2"},
    {"L14", "B-like vanishing: weighted |D|^2 and R^2 |grad f|^2 combination"}};

enum class Group { OmegaA, OmegaB, WholeM };

Group group_of(const std::string& id) {
  if (id.rfind("L3.", 0) == 0) return Group::OmegaA;
  if (id == "L4" || id == "L5" || id == "L9") return Group::OmegaB;
  return Group::WholeM;
}

bool needs_harmonic_R(const std::string& id) {
  // L13 holds on any shrinker; L11/L14 derive Delta R = 0 from their own
  // hypotheses, which are gated separately.
  return id != "L13" && id != "L11" && id != "L14";
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9e", v);
  return buf;
}

struct Gate {
  bool has_potential = false;
  double soliton_residual = 0.0;
  double delta_R = 0.0;
  double bach_like = 0.0;  // max |alpha U + beta V| over gate samples
  double v_norm = 0.0;     // max |V| (L4's conditional zero-check)
};

Gate sample_gate(const GeometrySpec& geom, const LemmaOptions& opt, bool need_bach_like) {
  Gate g;
  g.has_potential = geom.has_potential && geom.primary().has_potential;
  if (!g.has_potential) return g;
  auto pts = sample_points(geom, 12, opt.gate_seed);
  for (const ChartPoint& p : pts) {
    JetArenaScope arena;
    PointContext ctx(geom, p, 4);
    const SolitonFields& s = ctx.soliton();
    g.soliton_residual = std::max(g.soliton_residual, s.soliton_residual.max_abs_value());
    g.soliton_residual = std::max(g.soliton_residual, std::fabs(s.normalization_residual));
    g.delta_R = std::max(g.delta_R, std::fabs(ctx.delta_R_value()));
    const QuadraticTensors& qt = ctx.quadratic();
    g.v_norm = std::max(g.v_norm, qt.V.max_abs_value());
    if (need_bach_like) {
      PointTensor bl = bach_like(qt.U, qt.V, opt.alpha, opt.beta);
      g.bach_like = std::max(g.bach_like, bl.max_abs_value());
    }
  }
  return g;
}

// Named integrand builders shared by the lemma formulas.

Integrand vol_integrand(const std::string& key, const LemmaOptions& opt) {
  const double alpha = opt.alpha, beta = opt.beta;
  if (key == "dot")
    return {key, 3, false, [](PointContext& c) { return c.inner_gradR_gradf_value(); }};
  if (key == "dot_abs")
    return {key, 3, false,
            [](PointContext& c) { return std::fabs(c.inner_gradR_gradf_value()); }};
  if (key == "dot_w")
    return {key, 3, true, [](PointContext& c) { return c.inner_gradR_gradf_value(); }};
  if (key == "dot_w_abs")
    return {key, 3, true,
            [](PointContext& c) { return std::fabs(c.inner_gradR_gradf_value()); }};
  if (key == "fdot_w")
    return {key, 3, true,
            [](PointContext& c) { return c.f_value() * c.inner_gradR_gradf_value(); }};
  if (key == "fdot_w_abs")
    return {key, 3, true, [](PointContext& c) {
              return std::fabs(c.f_value() * c.inner_gradR_gradf_value());
            }};
  if (key == "gradR2")
    return {key, 3, false, [](PointContext& c) { return c.norm_grad_R2_value(); }};
  if (key == "gradR2_w")
    return {key, 3, true, [](PointContext& c) { return c.norm_grad_R2_value(); }};
  if (key == "RRcff_w")
    return {key, 3, true,
            [](PointContext& c) { return c.R_value() * c.rc_gradf_gradf_value(); }};
  if (key == "Vff")
    return {key, 4, false, [](PointContext& c) { return c.v_gradf_gradf_value(); }};
  if (key == "Vff_w")
    return {key, 4, true, [](PointContext& c) { return c.v_gradf_gradf_value(); }};
  if (key == "Uff")
    return {key, 4, false, [](PointContext& c) { return c.u_gradf_gradf_value(); }};
  if (key == "Uff_w")
    return {key, 4, true, [](PointContext& c) { return c.u_gradf_gradf_value(); }};
  if (key == "L4mid")
    return {key, 4, false, [](PointContext& c) {
              const double R = c.R_value();
              return 0.5 * c.norm_grad_R2_value() -
                     0.5 * R * c.inner_gradR_gradf_value() -
                     0.25 * R * R * c.norm_grad_f2_value();
            }};
  if (key == "L4mid_abs")
    return {key, 4, false, [](PointContext& c) {
              // |grad R - (R/2) grad f|^2 + (3/4) R^2 |grad f|^2, halved
              const double R = c.R_value();
              const double sq = c.norm_grad_R2_value() - R * c.inner_gradR_gradf_value() +
                                0.25 * R * R * c.norm_grad_f2_value();
              return 0.5 * (std::fabs(sq) + 0.75 * R * R * c.norm_grad_f2_value());
            }};
  if (key == "hessRff_w")
    return {key, 4, true, [](PointContext& c) { return c.hessR_gradf_gradf_value(); }};
  if (key == "L9rhs")
    return {key, 4, false, [](PointContext& c) {
              const double R = c.R_value();
              return 0.25 * c.norm_grad_f2_value() * (R * R - 2.0 * c.rc_norm2_value());
            }};
  if (key == "L9rhs_w")
    return {key, 4, true, [](PointContext& c) {
              const double R = c.R_value();
              return 0.25 * c.norm_grad_f2_value() * (R * R - 2.0 * c.rc_norm2_value());
            }};
  if (key == "R2gf2_w")
    return {key, 3, true, [](PointContext& c) {
              const double R = c.R_value();
              return R * R * c.norm_grad_f2_value();
            }};
  if (key == "Bff_w")
    return {key, 4, true, [](PointContext& c) { return c.b_gradf_gradf_value(); }};
  if (key == "D2_w")
    return {key, 4, true, [](PointContext& c) { return c.d_norm2_value(); }};
  if (key == "L11_w")
    return {key, 4, true, [alpha, beta](PointContext& c) {
              const double R = c.R_value();
              const double gf2 = c.norm_grad_f2_value();
              return (alpha - beta) * R * R * gf2 - 2.0 * alpha * c.rc_norm2_value() * gf2;
            }};
  if (key == "L11_w_abs")
    return {key, 4, true, [alpha, beta](PointContext& c) {
              const double R = c.R_value();
              const double gf2 = c.norm_grad_f2_value();
              return std::fabs((alpha - beta) * R * R * gf2) +
                     std::fabs(2.0 * alpha * c.rc_norm2_value() * gf2);
            }};
  throw std::logic_error("unknown volume integrand key: " + key);
}

Integrand bdry_integrand(const std::string& key) {
  if (key == "dot_over")
    return {key, 3, false, [](PointContext& c) {
              return c.inner_gradR_gradf_value() / c.norm_grad_f();
            }};
  if (key == "dot_over_abs")
    return {key, 3, false, [](PointContext& c) {
              return std::fabs(c.inner_gradR_gradf_value()) / c.norm_grad_f();
            }};
  if (key == "Rdot_over")
    return {key, 3, false, [](PointContext& c) {
              return c.R_value() * c.inner_gradR_gradf_value() / c.norm_grad_f();
            }};
  if (key == "gfdot")
    return {key, 3, false, [](PointContext& c) {
              return c.norm_grad_f() * c.inner_gradR_gradf_value();
            }};
  if (key == "gfdot_w")
    return {key, 3, true, [](PointContext& c) {
              return c.norm_grad_f() * c.inner_gradR_gradf_value();
            }};
  throw std::logic_error("unknown boundary integrand key: " + key);
}

struct SweepValues {
  std::map<std::string, IntegralResult> vol;
  std::map<std::string, IntegralResult> bdry;
  long samples = 0;
  double tail_estimate = 0.0;
  double final_r = 0.0;
};

SweepValues run_sweep(const GeometrySpec& geom, const std::set<std::string>& vol_keys,
                      const std::set<std::string>& bdry_keys, bool whole_manifold,
                      const LemmaOptions& opt) {
  SweepValues out;
  std::vector<Integrand> vints, bints;
  std::vector<std::string> vnames(vol_keys.begin(), vol_keys.end());
  std::vector<std::string> bnames(bdry_keys.begin(), bdry_keys.end());
  for (const auto& k : vnames) vints.push_back(vol_integrand(k, opt));
  for (const auto& k : bnames) bints.push_back(bdry_integrand(k));

  auto integrate_at = [&](std::optional<double> r) {
    QuadratureRegion region(geom, r, opt.q);
    out.samples += region.volume_node_count();
    auto vres = integrate_region_many(region, vints, opt.threads);
    auto bres = bints.empty()
                    ? std::vector<IntegralResult>{}
                    : integrate_boundary_many(region, bints, opt.threads);
    for (std::size_t i = 0; i < vnames.size(); ++i) out.vol[vnames[i]] = vres[i];
    for (std::size_t i = 0; i < bnames.size(); ++i) out.bdry[bnames[i]] = bres[i];
  };

  if (!whole_manifold) {
    integrate_at(geom.closed ? std::optional<double>{} : std::optional<double>{opt.r});
    out.final_r = opt.r;
    return out;
  }

  if (geom.closed) {
    integrate_at(std::nullopt);
    return out;
  }

  // Whole-manifold weighted integrals: one dense base region, then
  // coordinate shells outward until every integrand's shell contribution
  // (that is the e^{-f} tail estimate) drops below the threshold. Shells are
  // tiny relative to the total, so reduced resolution suffices there.
  const double r0 = 16.0;
  integrate_at(r0);
  out.final_r = r0;
  const int q_shell = std::max(8, opt.q / 3);
  double r_prev = r0;
  out.tail_estimate = std::numeric_limits<double>::infinity();
  for (double r : {20.0, 24.0, 28.0, 32.0, 36.0, 40.0}) {
    QuadratureRegion sh = QuadratureRegion::shell(geom, r_prev, r, q_shell);
    out.samples += sh.volume_node_count();
    auto sres = integrate_region_many(sh, vints, opt.threads);
    double inc = 0.0;
    for (std::size_t i = 0; i < vnames.size(); ++i) {
      out.vol[vnames[i]].value += sres[i].value;
      out.vol[vnames[i]].refinement =
          std::max(out.vol[vnames[i]].refinement, sres[i].refinement);
      inc = std::max(inc, std::fabs(sres[i].value));
    }
    out.final_r = r;
    r_prev = r;
    out.tail_estimate = inc;
    if (inc < opt.tail_tol) break;
  }
  return out;
}

struct Assembled {
  double lhs = 0.0, rhs = 0.0;
  double residual = 0.0;
  double magnitude = 0.0;  // scale for the relative tolerance
  std::string note;
};

double refinement_of(const SweepValues& sv) {
  double m = 0.0;
  for (const auto& [k, r] : sv.vol) m = std::max(m, r.refinement);
  for (const auto& [k, r] : sv.bdry) m = std::max(m, r.refinement);
  return m;
}

Assembled assemble(const std::string& id, const SweepValues& sv, const GeometrySpec& geom,
                   const LemmaOptions& opt, const Gate& gate) {
  Assembled a;
  auto v = [&](const std::string& k) { return sv.vol.at(k).value; };
  auto b = [&](const std::string& k) {
    return geom.closed ? 0.0 : sv.bdry.at(k).value;
  };

  if (id == "L3.1") {
    a.lhs = b("dot_over");
    a.magnitude = b("dot_over_abs");
    a.residual = std::fabs(a.lhs);
    a.note = "boundary integral = " + fmt(a.lhs);
  } else if (id == "L3.2") {
    a.lhs = v("dot");
    a.magnitude = v("dot_abs");
    a.residual = std::fabs(a.lhs);
  } else if (id == "L3.3") {
    const double I = v("gradR2");
    const double B1 = b("Rdot_over");
    const double B2 = -b("gfdot");
    a.lhs = I;
    a.rhs = B1;
    a.residual = std::max(std::fabs(I - B1), std::fabs(I - B2));
    a.magnitude = std::max({std::fabs(I), std::fabs(B1), std::fabs(B2)});
    a.note = "vol = " + fmt(I) + ", bdry forms = " + fmt(B1) + ", " + fmt(B2);
  } else if (id == "L3.4") {
    a.lhs = v("dot_w");
    a.magnitude = v("dot_w_abs");
    a.residual = std::fabs(a.lhs);
  } else if (id == "L3.5") {
    a.lhs = v("RRcff_w");
    a.rhs = 0.5 * b("gfdot_w") + 0.5 * v("gradR2_w");
    a.residual = std::fabs(a.lhs - a.rhs);
    a.magnitude = std::max(std::fabs(a.lhs), std::fabs(a.rhs));
  } else if (id == "L3.6") {
    a.lhs = v("fdot_w");
    a.magnitude = v("fdot_w_abs");
    a.residual = std::fabs(a.lhs);
  } else if (id == "L4") {
    a.lhs = v("Vff");
    a.rhs = v("L4mid");
    a.residual = std::fabs(a.lhs - a.rhs);
    a.magnitude = std::max({std::fabs(a.lhs), std::fabs(a.rhs), v("L4mid_abs")});
    if (gate.v_norm <= 1e-8) {
      // With V = 0 the common value must itself vanish.
      a.residual = std::max({a.residual, std::fabs(a.lhs), std::fabs(a.rhs)});
      a.note = "V = 0 holds; zero-value form enforced";
    } else {
      a.note = "V != 0 on this geometry; equality form verified, lhs = " + fmt(a.lhs);
    }
  } else if (id == "L5") {
    a.lhs = v("hessRff_w");
    if (geom.closed)
      a.rhs = 0.5 * v("gradR2_w");
    else
      a.rhs = -std::exp(-sv.final_r) * v("gradR2") + 0.5 * v("gradR2_w");
    a.residual = std::fabs(a.lhs - a.rhs);
    a.magnitude = std::max(std::fabs(a.lhs), std::fabs(a.rhs));
  } else if (id == "L9") {
    a.lhs = v("Uff");
    a.rhs = v("L9rhs");
    a.residual = std::fabs(a.lhs - a.rhs);
    a.magnitude = std::max(std::fabs(a.lhs), std::fabs(a.rhs));
  } else if (id == "L-VW") {
    a.lhs = v("Vff_w");
    a.rhs = -0.25 * v("R2gf2_w");
    a.residual = std::fabs(a.lhs - a.rhs);
    a.magnitude = std::max(std::fabs(a.lhs), std::fabs(a.rhs));
    a.note = "lhs = " + fmt(a.lhs) + ", rhs = " + fmt(a.rhs);
  } else if (id == "L10") {
    a.lhs = v("Uff_w");
    a.rhs = v("L9rhs_w");
    a.residual = std::fabs(a.lhs - a.rhs);
    a.magnitude = std::max(std::fabs(a.lhs), std::fabs(a.rhs));
  } else if (id == "L11") {
    a.lhs = v("L11_w");
    a.magnitude = v("L11_w_abs");
    a.residual = std::fabs(a.lhs);
    a.note = "value = " + fmt(a.lhs) + " at (alpha, beta) = (" + fmt(opt.alpha) + ", " +
             fmt(opt.beta) + ")";
  } else if (id == "L13") {
    a.lhs = v("Bff_w");
    a.rhs = -0.5 * v("D2_w");
    a.residual = std::fabs(a.lhs - a.rhs);
    a.magnitude = std::max(std::fabs(a.lhs), std::fabs(a.rhs));
    a.note = "lhs = " + fmt(a.lhs) + ", rhs = " + fmt(a.rhs);
  } else if (id == "L14") {
    a.lhs = -opt.alpha * v("D2_w") - 0.5 * (opt.beta - opt.alpha / 3.0) * v("R2gf2_w");
    a.magnitude =
        std::fabs(opt.alpha) * v("D2_w") +
        std::fabs(0.5 * (opt.beta - opt.alpha / 3.0)) * std::fabs(v("R2gf2_w"));
    a.residual = std::fabs(a.lhs);
    a.note = "value = " + fmt(a.lhs) + " at (alpha, beta) = (" + fmt(opt.alpha) + ", " +
             fmt(opt.beta) + ")";
  } else {
    throw std::invalid_argument("unknown lemma id: " + id);
  }
  return a;
}

void required_integrands(const std::string& id, std::set<std::string>& vol,
                         std::set<std::string>& bdry) {
  if (id == "L3.1") {
    bdry.insert({"dot_over", "dot_over_abs"});
  } else if (id == "L3.2") {
    vol.insert({"dot", "dot_abs"});
  } else if (id == "L3.3") {
    vol.insert("gradR2");
    bdry.insert({"Rdot_over", "gfdot"});
  } else if (id == "L3.4") {
    vol.insert({"dot_w", "dot_w_abs"});
  } else if (id == "L3.5") {
    vol.insert({"RRcff_w", "gradR2_w"});
    bdry.insert("gfdot_w");
  } else if (id == "L3.6") {
    vol.insert({"fdot_w", "fdot_w_abs"});
  } else if (id == "L4") {
    vol.insert({"Vff", "L4mid", "L4mid_abs"});
  } else if (id == "L5") {
    vol.insert({"hessRff_w", "gradR2", "gradR2_w"});
  } else if (id == "L9") {
    vol.insert({"Uff", "L9rhs"});
  } else if (id == "L-VW") {
    vol.insert({"Vff_w", "R2gf2_w"});
  } else if (id == "L10") {
    vol.insert({"Uff_w", "L9rhs_w"});
  } else if (id == "L11") {
    vol.insert({"L11_w", "L11_w_abs"});
  } else if (id == "L13") {
    vol.insert({"Bff_w", "D2_w"});
  } else if (id == "L14") {
    vol.insert({"D2_w", "R2gf2_w"});
  } else {
    throw std::invalid_argument("unknown lemma id: " + id);
  }
}

}  // namespace

std::span<const char* const> known_lemma_ids() {
  return {kLemmaIds, sizeof(kLemmaIds) / sizeof(kLemmaIds[0])};
}

std::vector<IdentityReport> verify_lemmas(std::span<const std::string> ids,
                                          const GeometrySpec& geom, const LemmaOptions& opt) {
  std::vector<IdentityReport> out;
  bool need_bach_like = false;
  for (const auto& id : ids)
    if (id == "L11" || id == "L14") need_bach_like = true;

  const Gate gate = sample_gate(geom, opt, need_bach_like);

  // Partition the requested ids into runnable groups and early-skip the rest.
  std::map<Group, std::vector<std::string>> groups;
  for (const auto& id : ids) {
    IdentityReport rep;
    rep.id = id;
    rep.anchor = kAnchors.at(id);
    rep.geometry = geom.name;
    rep.tolerance = opt.tol_abs;

    if (!gate.has_potential) {
      rep.verdict = Verdict::SkippedHypothesis;
      rep.note = "geometry has no potential f";
      out.push_back(std::move(rep));
      continue;
    }
    if (gate.soliton_residual > 1e-8) {
      rep.verdict = Verdict::SkippedHypothesis;
      rep.note = "soliton residual " + fmt(gate.soliton_residual) + " exceeds 1e-8";
      out.push_back(std::move(rep));
      continue;
    }
    if (needs_harmonic_R(id) && gate.delta_R > 1e-8) {
      rep.verdict = Verdict::SkippedHypothesis;
      rep.note = "Delta R = " + fmt(gate.delta_R) + " violates the harmonic-R hypothesis";
      out.push_back(std::move(rep));
      continue;
    }
    groups[group_of(id)].push_back(id);
  }

  for (auto& [grp, gids] : groups) {
    std::set<std::string> vol_keys, bdry_keys;
    for (const auto& id : gids) required_integrands(id, vol_keys, bdry_keys);
    SweepValues sv = run_sweep(geom, vol_keys, bdry_keys, grp == Group::WholeM, opt);

    for (const auto& id : gids) {
      IdentityReport rep;
      rep.id = id;
      rep.anchor = kAnchors.at(id);
      rep.geometry = geom.name;
      rep.samples = sv.samples;
      rep.refinement = refinement_of(sv);

      Assembled a = assemble(id, sv, geom, opt, gate);
      rep.max_residual = a.residual;
      rep.tolerance = std::max(opt.tol_abs, opt.tol_rel * a.magnitude);
      rep.note = a.note;

      const bool gated_bach_like = (id == "L11" || id == "L14");
      if (gated_bach_like && (gate.bach_like > 1e-8 ||
                              (id == "L11" && std::fabs(3.0 * opt.beta - opt.alpha) < 1e-14))) {
        rep.verdict = Verdict::NotApplicable;
        rep.note = "hypothesis alpha U + beta V = 0 fails (max " + fmt(gate.bach_like) +
                   "); " + a.note;
      } else if (gated_bach_like && gate.delta_R > 1e-8) {
        rep.verdict = Verdict::SkippedHypothesis;
        rep.note = "Delta R gate failed; " + a.note;
      } else if (!geom.closed && grp == Group::WholeM && sv.tail_estimate > opt.tail_tol) {
        rep.verdict = Verdict::LowAccuracy;
        rep.note = "tail estimate " + fmt(sv.tail_estimate) + " above threshold; " + a.note;
      } else {
        rep.verdict = rep.max_residual <= rep.tolerance ? Verdict::Pass : Verdict::Fail;
      }
      out.push_back(std::move(rep));
    }
  }

  // Preserve the caller's id order.
  std::vector<IdentityReport> ordered;
  ordered.reserve(out.size());
  for (const auto& id : ids)
    for (auto& rep : out)
      if (rep.id == id) ordered.push_back(std::move(rep));
  return ordered;
}

IdentityReport verify_lemma(const std::string& id, const GeometrySpec& geom,
                            const LemmaOptions& opt) {
  const std::string ids[1] = {id};
  return verify_lemmas(std::span<const std::string>(ids, 1), geom, opt)[0];
}

std::vector<DecayPoint> decay_probe(const GeometrySpec& geom, double alpha,
                                    std::span<const double> rs, int q, int threads) {
  if (alpha <= 0.0) throw std::invalid_argument("decay probe needs alpha > 0");
  std::vector<DecayPoint> out;
  Integrand gradR2{"gradR2", 3, false,
                   [](PointContext& c) { return c.norm_grad_R2_value(); }};
  for (double r : rs) {
    QuadratureRegion region(geom, geom.closed ? std::optional<double>{} : std::optional<double>{r},
                            q);
    const double I = integrate_region(region, gradR2, threads).value;
    out.push_back({r, std::exp(-alpha * r) * I});
  }
  return out;
}

}  // namespace gradsol
