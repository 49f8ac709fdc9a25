#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gradsol/point_context.hpp"

using namespace gradsol;

TEST_CASE("catalog entries") {
  // GAUSS: flat with f = |x|^2/4; residuals vanish.
  GeometrySpec gauss = catalog_get("GAUSS");
  CHECK(gauss.has_potential);
  for (const auto& p : sample_points(gauss, 10, 3)) {
    PointContext ctx(gauss, p, 3);
    CHECK(ctx.soliton().soliton_residual.max_abs_value() <= 1e-12);
    CHECK(std::fabs(ctx.soliton().normalization_residual) <= 1e-12);
    CHECK(ctx.bundle().Rm.max_abs_coeff() <= 1e-13);
  }

  // S4: scalar curvature 2, closed.
  GeometrySpec s4 = catalog_get("S4");
  CHECK(s4.closed);
  for (const auto& p : sample_points(s4, 10, 5)) {
    PointContext ctx(s4, p, 3);
    CHECK(ctx.R_value() == doctest::Approx(2.0).epsilon(1e-10));
  }

  // CYL: R = 3/2; normalization forces the additive constant 3/2 in f.
  GeometrySpec cyl = catalog_get("CYL");
  for (const auto& p : sample_points(cyl, 10, 5)) {
    PointContext ctx(cyl, p, 3);
    CHECK(ctx.R_value() == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(std::fabs(ctx.soliton().normalization_residual) <= 1e-12);
  }

  CHECK_THROWS_AS(catalog_get("NOPE"), std::invalid_argument);
}

TEST_CASE("catalog soliton residuals at 50 points") {
  for (const char* name : {"GAUSS", "S4", "CYL"}) {
    GeometrySpec g = catalog_get(name);
    for (const auto& p : sample_points(g, 50, 7)) {
      PointContext ctx(g, p, 3);
      CHECK(ctx.soliton().soliton_residual.max_abs_value() <= 1e-10);
      CHECK(std::fabs(ctx.soliton().normalization_residual) <= 1e-10);
    }
  }
}

TEST_CASE("cylinder is conformally flat: B and D vanish at sampled points") {
  GeometrySpec cyl = catalog_get("CYL");
  for (const auto& p : sample_points(cyl, 20, 11)) {
    PointContext ctx(cyl, p, 4);
    CHECK(ctx.bach4().max_abs_value() <= 1e-9);
    CHECK(ctx.dtensor().max_abs_value() <= 1e-9);
  }
}

TEST_CASE("random metric generation") {
  RandomMetricSpec spec;
  spec.seed = 42;

  // Determinism: same seed gives identical component functions.
  GeometrySpec a = random_metric(spec);
  GeometrySpec b = random_metric(spec);
  std::mt19937_64 rng(1);
  for (int k = 0; k < 20; ++k) {
    std::vector<double> x(4);
    for (double& v : x) v = uniform_in(rng, -1.0, 1.0);
    SmallMat<double> ga = a.primary().metric_values(x);
    SmallMat<double> gb = b.primary().metric_values(x);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) CHECK(ga(i, j) == gb(i, j));
  }

  // eps = 0 gives the flat metric regardless of seed.
  RandomMetricSpec flat;
  flat.seed = 977;
  flat.eps = 0.0;
  GeometrySpec f = random_metric(flat);
  std::vector<double> x = {0.3, -0.8, 0.5, 0.9};
  SmallMat<double> gf = f.primary().metric_values(x);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(gf(i, j) == (i == j ? 1.0 : 0.0));

  // Seed 42, eps = 0.05: minimum eigenvalue at the origin above 0.5.
  std::vector<double> origin(4, 0.0);
  SmallMat<double> g0 = a.primary().metric_values(origin);
  auto ev = symmetric_eigenvalues(g0);
  CHECK(ev.front() > 0.5);

  // Positive definite across the box.
  for (const auto& p : sample_points(a, 100, 3)) {
    CHECK(is_positive_definite(a.primary().metric_values(p.x)));
  }
}

TEST_CASE("sample_points") {
  GeometrySpec e4 = catalog_get("E4");
  auto one = sample_points(e4, 1, 9);
  REQUIRE(one.size() == 1);
  for (int i = 0; i < 4; ++i) {
    CHECK(one[0].x[i] > e4.primary().lo[i]);
    CHECK(one[0].x[i] < e4.primary().hi[i]);
  }

  // Margins on the sphere chart keep samples off the poles.
  GeometrySpec s4 = catalog_get("S4");
  for (const auto& p : sample_points(s4, 200, 13)) {
    for (int i = 0; i < 4; ++i) {
      CHECK(p.x[i] >= s4.primary().lo[i] + s4.margin);
      CHECK(p.x[i] <= s4.primary().hi[i] - s4.margin);
    }
  }

  // Determinism.
  auto s1 = sample_points(s4, 25, 21);
  auto s2 = sample_points(s4, 25, 21);
  for (int k = 0; k < 25; ++k)
    for (int i = 0; i < 4; ++i) CHECK(s1[k].x[i] == s2[k].x[i]);

  CHECK_THROWS_AS(sample_points(e4, 0, 1), std::invalid_argument);
}

TEST_CASE("random metric with potential exercises the weighted paths") {
  RandomMetricSpec spec;
  spec.seed = 8;
  spec.with_potential = true;
  GeometrySpec g = random_metric(spec);
  CHECK(g.has_potential);
  auto p = sample_points(g, 1, 2)[0];
  PointContext ctx(g, p, 3);
  CHECK(std::isfinite(ctx.f_value()));
  CHECK(ctx.norm_grad_f2_value() >= 0.0);
  // Off the soliton locus the residual is genuinely nonzero.
  CHECK(ctx.soliton().soliton_residual.max_abs_value() > 1e-6);
}
