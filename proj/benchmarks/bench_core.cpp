#include <benchmark/benchmark.h>

#include "gradsol/point_context.hpp"
#include "gradsol/quadrature.hpp"

using namespace gradsol;

namespace {

GeometrySpec rand4() {
  RandomMetricSpec spec;
  spec.seed = 42;
  spec.with_potential = true;
  return random_metric(spec);
}

void BM_jet_mul(benchmark::State& state) {
  const int K = static_cast<int>(state.range(0));
  Jet a = Jet::variable(0, 1.3, 4, K);
  Jet b = Jet::variable(1, -0.4, 4, K);
  a = sin(a) + b * b;
  b = exp(b * 0.25) + a * 0.5;
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_jet_mul)->Arg(2)->Arg(3)->Arg(4)->Arg(5);

void BM_curvature_bundle(benchmark::State& state) {
  GeometrySpec g = rand4();
  auto pts = sample_points(g, 1, 7);
  const int K = static_cast<int>(state.range(0));
  for (auto _ : state) {
    PointContext ctx(g, pts[0], K);
    benchmark::DoNotOptimize(ctx.bundle().R.value());
  }
}
BENCHMARK(BM_curvature_bundle)->Arg(3)->Arg(4)->Arg(5);

void BM_bach_and_quadratic(benchmark::State& state) {
  GeometrySpec g = rand4();
  auto pts = sample_points(g, 1, 7);
  for (auto _ : state) {
    PointContext ctx(g, pts[0], 5);
    benchmark::DoNotOptimize(ctx.bach4().max_abs_value() +
                             ctx.quadratic().V.max_abs_value());
  }
}
BENCHMARK(BM_bach_and_quadratic);

void BM_region_integral(benchmark::State& state) {
  GeometrySpec g = catalog_get("GAUSS");
  const int q = static_cast<int>(state.range(0));
  QuadratureRegion region(g, 4.0, q);
  Integrand one{"1", 3, false, [](PointContext&) { return 1.0; }};
  for (auto _ : state) benchmark::DoNotOptimize(integrate_region(region, one).value);
}
BENCHMARK(BM_region_integral)->Arg(8)->Arg(12);

}  // namespace

BENCHMARK_MAIN();
