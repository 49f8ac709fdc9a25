#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gradsol/curvature.hpp"
#include "gradsol/geometry.hpp"
#include "gradsol/point_context.hpp"

using namespace gradsol;

namespace {

GeometrySpec rand_geom(std::uint64_t seed, int dim = 4) {
  RandomMetricSpec spec;
  spec.seed = seed;
  spec.dim = dim;
  return random_metric(spec);
}

MetricAtPoint metric_at(const GeometrySpec& g, const ChartPoint& p, int order) {
  return make_metric(g.primary().metric_jets(p.x, order), p.x);
}

PointTensor random_rank2(const MetricAtPoint& m, std::mt19937_64& rng) {
  PointTensor t(m.dim, {Variance::Down, Variance::Down}, m.order);
  for (std::size_t i = 0; i < t.ncomp(); ++i)
    for (std::size_t c = 0; c < t[i].ncoeffs(); ++c)
      t[i].coeff(c) = uniform_in(rng, -1.0, 1.0);
  return t;
}

}  // namespace

TEST_CASE("contract basics") {
  GeometrySpec e4 = catalog_get("E4");
  auto pts = sample_points(e4, 1, 3);
  MetricAtPoint m = metric_at(e4, pts[0], 3);

  // delta^i_j trace is the dimension.
  PointTensor delta(4, {Variance::Up, Variance::Down}, 3);
  for (int i = 0; i < 4; ++i) delta.at({i, i}) = Jet::constant(4, 3, 1.0);
  PointTensor tr = contract(delta, 0, 1);
  CHECK(tr[0].value() == doctest::Approx(4.0));

  // g g^-1 full trace is the dimension.
  PointTensor mixed = contract_with(m.g, 1, m.g_inv, 0);
  CHECK(contract(mixed, 0, 1)[0].value() == doctest::Approx(4.0).epsilon(1e-14));

  // Flat space: Riemann vanishes, so any valid contraction does too.
  CurvatureBundle b = curvature_bundle(m);
  CHECK(contract(b.Rm_mixed, 0, 3).max_abs_value() <= 1e-14);
  CHECK(contract(b.Rm_mixed, 1, 3).max_abs_value() <= 1e-14);

  CHECK_THROWS_AS(contract(m.g, 0, 1), std::invalid_argument);  // same variance
}

TEST_CASE("raise and lower") {
  GeometrySpec g = rand_geom(21);
  auto pts = sample_points(g, 1, 4);
  MetricAtPoint m = metric_at(g, pts[0], 4);
  std::mt19937_64 rng(9);

  PointTensor t = random_rank2(m, rng);
  PointTensor round = raise_lower(raise_lower(t, 0, m), 0, m);
  CHECK((round - t).max_abs_coeff() <= 1e-12 * (1.0 + t.max_abs_coeff()));

  PointTensor lowered = raise_lower(raise_lower(m.g_inv, 0, m), 1, m);
  CHECK((lowered - m.g).max_abs_coeff() <= 1e-12 * (1.0 + m.g.max_abs_coeff()));

  // Ricci of the round sphere raised one slot is delta/2.
  GeometrySpec s4 = catalog_get("S4");
  auto spts = sample_points(s4, 3, 7);
  for (const auto& p : spts) {
    MetricAtPoint sm = metric_at(s4, p, 3);
    CurvatureBundle sb = curvature_bundle(sm);
    PointTensor rc_mixed = raise_lower(sb.Rc, 0, sm);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        CHECK(rc_mixed.at({i, j}).value() ==
              doctest::Approx(i == j ? 0.5 : 0.0).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("metric compatibility on random metrics") {
  for (std::uint64_t seed : {11u, 12u}) {
    GeometrySpec g = rand_geom(seed);
    auto pts = sample_points(g, 50, seed + 1);
    for (const auto& p : pts) {
      MetricAtPoint m = metric_at(g, p, 4);
      PointTensor dg = covariant_derivative(m.g, m);
      double dscale = 0.0;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          for (int a = 0; a < 4; ++a)
            dscale = std::max(dscale,
                              std::fabs(m.g.at({i, j}).axis_derivative(a).value()));
      CHECK(dg.max_abs_value() <= 1e-11 * std::max(1.0, dscale));
    }
  }
}

TEST_CASE("flat-chart covariant derivative of a scalar is the partials") {
  GeometrySpec e4 = catalog_get("E4");
  auto pts = sample_points(e4, 1, 3);
  MetricAtPoint m = metric_at(e4, pts[0], 3);
  Jet u = sin(Jet::variable(0, pts[0].x[0], 4, 3)) *
          Jet::variable(2, pts[0].x[2], 4, 3);
  PointTensor s = PointTensor::scalar(u);
  PointTensor ds = covariant_derivative(s, m);
  for (int a = 0; a < 4; ++a)
    CHECK(ds.at({a}).value() == doctest::Approx(u.axis_derivative(a).value()));
}

TEST_CASE("Ricci commutation identity on random metrics and covectors") {
  // (grad_i grad_j - grad_j grad_i) w_k = -R_ijk^l w_l on 100 samples.
  std::mt19937_64 rng(1234);
  int checked = 0;
  for (std::uint64_t seed : {31u, 32u}) {
    GeometrySpec g = rand_geom(seed);
    std::vector<Polynomial> w;
    for (int k = 0; k < 4; ++k) w.push_back(random_polynomial(4, 3, rng));
    auto pts = sample_points(g, 50, seed + 5);
    for (const auto& p : pts) {
      MetricAtPoint m = metric_at(g, p, 4);
      CurvatureBundle b = curvature_bundle_core(m);
      std::vector<Jet> xj(4);
      for (int i = 0; i < 4; ++i) xj[i] = Jet::variable(i, p.x[i], 4, 4);
      PointTensor omega(4, {Variance::Down}, 4, p.x);
      for (int k = 0; k < 4; ++k)
        omega.at({k}) = w[k].eval(std::span<const Jet>(xj.data(), xj.size()));
      PointTensor ddw = covariant_derivative(covariant_derivative(omega, m), m);
      const PointTensor omega_t = truncate_tensor(omega, ddw.order());
      const PointTensor mixed_t = truncate_tensor(b.Rm_mixed, ddw.order());
      double res = 0.0;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          for (int k = 0; k < 4; ++k) {
            double v = ddw.at({i, j, k}).value() - ddw.at({j, i, k}).value();
            for (int l = 0; l < 4; ++l)
              v += mixed_t.at({i, j, k, l}).value() * omega_t.at({l}).value();
            res = std::max(res, std::fabs(v));
          }
      CHECK(res <= 1e-9);
      ++checked;
    }
  }
  CHECK(checked == 100);
}

TEST_CASE("norms") {
  GeometrySpec s4 = catalog_get("S4");
  auto pts = sample_points(s4, 3, 11);
  MetricAtPoint m = metric_at(s4, pts[0], 3);
  CHECK(tensor_norm2(m.g, m) == doctest::Approx(4.0).epsilon(1e-13));  // |g|^2 = n

  CurvatureBundle b = curvature_bundle(m);
  CHECK(tensor_norm2(b.Rc, m) == doctest::Approx(1.0).epsilon(1e-10));  // 4 x (1/2)^2

  GeometrySpec e4 = catalog_get("E4");
  auto epts = sample_points(e4, 1, 3);
  MetricAtPoint em = metric_at(e4, epts[0], 3);
  CurvatureBundle eb = curvature_bundle(em);
  CHECK(tensor_norm2(eb.Rm, em) <= 1e-24);

  // Non-negativity and agreement between the jet and value paths.
  std::mt19937_64 rng(77);
  GeometrySpec g = rand_geom(41);
  auto rpts = sample_points(g, 20, 8);
  for (const auto& p : rpts) {
    MetricAtPoint rm = metric_at(g, p, 3);
    PointTensor t = random_rank2(rm, rng);
    const double n2 = tensor_norm2(t, rm);
    CHECK(n2 >= -1e-12);
    CHECK(tensor_norm2_value(t, rm) == doctest::Approx(n2).epsilon(1e-12));
  }
}

TEST_CASE("contraction order independence under symmetry") {
  // For a tensor symmetric in a slot pair, contracting either way agrees.
  GeometrySpec g = rand_geom(55);
  auto pts = sample_points(g, 5, 2);
  for (const auto& p : pts) {
    MetricAtPoint m = metric_at(g, p, 3);
    PointTensor hmix = contract_with(m.g_inv, 1, m.g, 0);  // delta, symmetric roles
    PointTensor t1 = contract(hmix, 0, 1);
    PointTensor outer_gg = outer(m.g_inv, m.g);
    PointTensor t2 = contract(contract(outer_gg, 1, 2), 0, 1);
    PointTensor t3 = contract(contract(outer_gg, 0, 3), 0, 1);
    CHECK(std::fabs(t1[0].value() - 4.0) <= 1e-12);
    CHECK(std::fabs(t2[0].value() - t3[0].value()) <= 1e-12);
  }
}

TEST_CASE("jet order bookkeeping fails fast") {
  GeometrySpec g = rand_geom(66);
  auto pts = sample_points(g, 1, 2);
  MetricAtPoint m = metric_at(g, pts[0], 3);
  CurvatureBundle b = curvature_bundle(m);
  // Rc has order 1 here; two more derivatives must exhaust it.
  PointTensor d1 = covariant_derivative(b.Rc, m);
  CHECK_THROWS_AS(covariant_derivative(covariant_derivative(d1, m), m), std::domain_error);
}

TEST_CASE("metric validation") {
  SmallMat<Jet> bad(2);
  bad(0, 0) = Jet::constant(2, 3, 1.0);
  bad(0, 1) = Jet::constant(2, 3, 0.3);
  bad(1, 0) = Jet::constant(2, 3, -0.3);  // not symmetric
  bad(1, 1) = Jet::constant(2, 3, 1.0);
  CHECK_THROWS_AS(make_metric(bad, {0.0, 0.0}), std::invalid_argument);

  SmallMat<Jet> neg(2);
  neg(0, 0) = Jet::constant(2, 3, -1.0);
  neg(0, 1) = Jet::constant(2, 3, 0.0);
  neg(1, 0) = Jet::constant(2, 3, 0.0);
  neg(1, 1) = Jet::constant(2, 3, 1.0);
  CHECK_THROWS_AS(make_metric(neg, {0.0, 0.0}), std::domain_error);
}

TEST_CASE("symmetry residual tags") {
  GeometrySpec g = rand_geom(71);
  auto pts = sample_points(g, 3, 13);
  for (const auto& p : pts) {
    MetricAtPoint m = metric_at(g, p, 4);
    CurvatureBundle b = curvature_bundle(m);
    const double scale = curvature_scale(m, b);
    CHECK(symmetry_residual(b.Rm) <= 1e-10 * scale);
    CHECK(symmetry_residual(b.W_weyl) <= 1e-10 * scale);
    CHECK(symmetry_residual(b.Rc) <= 1e-10 * scale);
    // Pair-exchange holds for the directly contracted lowered tensor too
    // (not just the class-filled one).
    PointTensor direct =
        contract_with(b.Rm_mixed, 3, truncate_tensor(m.g, b.Rm_mixed.order()), 0) * -1.0;
    direct.set_symmetry(SymmetryTag::RiemannType);
    CHECK(symmetry_residual(direct) <= 1e-12 * scale);
    CHECK((direct - b.Rm).max_abs_coeff() <= 1e-12 * scale);
  }
}
