#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gradsol/fd_oracle.hpp"
#include "gradsol/geometry.hpp"
#include "gradsol/jet.hpp"
#include "gradsol/linalg.hpp"

using namespace gradsol;

namespace {

Jet random_jet(int dim, int order, std::mt19937_64& rng) {
  Jet j = Jet::constant(dim, order, 0.0);
  for (std::size_t r = 0; r < j.ncoeffs(); ++r) j.coeff(r) = uniform_in(rng, -1.0, 1.0);
  return j;
}

// Composite used for the finite-difference cross-check of jet arithmetic.
template <class T>
T composite(std::span<const T> x) {
  using gradsol::g_cos;
  using gradsol::g_exp;
  using gradsol::g_sin;
  return (g_sin(x[0]) * x[1] + g_exp(x[0] * x[1] * 0.3)) / (g_cos(x[0]) + 1.5);
}

}  // namespace

TEST_CASE("coordinate jets") {
  Jet j = Jet::variable(0, 3.0, 2, 2);
  CHECK(j.value() == 3.0);
  CHECK(extract_partial(j, {1, 0}) == 1.0);
  CHECK(extract_partial(j, {0, 1}) == 0.0);
  CHECK(extract_partial(j, {2, 0}) == 0.0);
  CHECK(extract_partial(j, {1, 1}) == 0.0);

  CHECK(Jet::variable(2, -1.5, 4, 5).value() == -1.5);

  CHECK_THROWS_AS(Jet::variable(1, 0.0, 1, 3), std::invalid_argument);
}

TEST_CASE("arithmetic basics") {
  // (x)^2 about x = 2: 4 + 4(x-2) + (x-2)^2.
  Jet x = Jet::variable(0, 2.0, 1, 2);
  Jet sq = x * x;
  CHECK(sq.coeff(0) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(sq.coeff(1) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(sq.coeff(2) == doctest::Approx(1.0).epsilon(1e-15));

  // 1/(1+x) about 0: geometric series.
  Jet x0 = Jet::variable(0, 0.0, 1, 3);
  Jet geo = 1.0 / (x0 + 1.0);
  CHECK(geo.coeff(0) == doctest::Approx(1.0));
  CHECK(geo.coeff(1) == doctest::Approx(-1.0));
  CHECK(geo.coeff(2) == doctest::Approx(1.0));
  CHECK(geo.coeff(3) == doctest::Approx(-1.0));

  Jet other = Jet::variable(0, 0.0, 2, 3);
  CHECK_THROWS_AS(x0 + other, std::invalid_argument);
  CHECK_THROWS_AS(x0 / (x0 * x0), std::domain_error);  // zero constant term
}

TEST_CASE("elementary functions") {
  // Maclaurin coefficients of sine.
  Jet s = sin(Jet::variable(0, 0.0, 1, 3));
  CHECK(s.coeff(0) == doctest::Approx(0.0));
  CHECK(s.coeff(1) == doctest::Approx(1.0));
  CHECK(s.coeff(2) == doctest::Approx(0.0));
  CHECK(s.coeff(3) == doctest::Approx(-1.0 / 6.0));

  // exp(-x^2/4) at x = 2: value and slope e^{-1}, -e^{-1}.
  Jet x = Jet::variable(0, 2.0, 1, 1);
  Jet w = exp(-(x * x) * 0.25);
  CHECK(w.value() == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(w.coeff(1) == doctest::Approx(-std::exp(-1.0)).epsilon(1e-13));

  CHECK_THROWS_AS(sqrt(Jet::variable(0, -1.0, 1, 2)), std::domain_error);
  CHECK_THROWS_AS(pow(Jet::variable(0, -1.0, 1, 2), 0.5), std::domain_error);
  CHECK_NOTHROW(pow(Jet::variable(0, -1.0, 1, 2), 3.0));  // integral exponent
}

TEST_CASE("extract_partial") {
  Jet x = Jet::variable(0, 1.0, 1, 3);
  CHECK(extract_partial(x * x, {2}) == doctest::Approx(2.0));
  Jet c = Jet::constant(2, 3, 5.0);
  CHECK(extract_partial(c, {1, 0}) == 0.0);
  CHECK(extract_partial(c, {0, 2}) == 0.0);
  Jet s = sin(Jet::variable(0, 0.0, 1, 3));
  CHECK(extract_partial(s, {3}) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(extract_partial(s, {4}), std::out_of_range);
}

TEST_CASE("ring axioms and division inverse") {
  std::mt19937_64 rng(12345);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const int K = 2 + static_cast<int>(rng() % 4);
    Jet a = random_jet(n, K, rng);
    Jet b = random_jet(n, K, rng);
    Jet c = random_jet(n, K, rng);

    const double scale = (1.0 + a.max_abs()) * (1.0 + b.max_abs()) * (1.0 + c.max_abs());
    CHECK(((a * b) * c - a * (b * c)).max_abs() <= 1e-12 * scale);
    CHECK((a * (b + c) - (a * b + a * c)).max_abs() <= 1e-12 * scale);

    b.coeff(0) = 1.0 + uniform01(rng);  // keep the divisor invertible
    CHECK(((a * b) / b - a).max_abs() <= 1e-12 * scale);
  }
}

TEST_CASE("truncation consistency") {
  std::mt19937_64 rng(99);
  Jet a = random_jet(3, 5, rng);
  Jet b = random_jet(3, 5, rng);
  b.coeff(0) = 2.0;
  Jet full = sin(a) * b + exp(a * 0.1) / b;
  Jet a3 = a.truncated(3);
  Jet b3 = b.truncated(3);
  Jet small = sin(a3) * b3 + exp(a3 * 0.1) / b3;
  CHECK((full.truncated(3) - small).max_abs() == 0.0);
}

TEST_CASE("finite-difference oracle for composed arithmetic") {
  // Every coefficient of order <= 4 must match h = 1e-3 central differences
  // of the same composite within relative 1e-5.
  const double h = 1e-3;
  const std::vector<double> base = {0.4, -0.7};
  Jet x0 = Jet::variable(0, base[0], 2, 5);
  Jet x1 = Jet::variable(1, base[1], 2, 5);
  const Jet xs[2] = {x0, x1};
  Jet val = composite(std::span<const Jet>(xs, 2));

  auto F = [](std::span<const __float128> x) { return composite(x); };
  const MultiIndexTable& tab = val.table();
  for (std::size_t r = 0; r < tab.prefix_size(4); ++r) {
    auto e = tab.exponents(r);
    const int alpha[2] = {e[0], e[1]};
    const double expect = fd_partial(F, base, {alpha, 2}, h) / tab.factorial_of(r);
    const double got = val.coeff(r);
    CHECK(std::fabs(got - expect) <= 1e-5 * std::max(1.0, std::fabs(expect)));
  }
}

TEST_CASE("finite-difference oracle for sqrt(det g) on the round sphere chart") {
  GeometrySpec s4 = catalog_get("S4");
  const std::vector<double> x = {1.2, 0.8, 1.9, 2.5};
  SmallMat<Jet> g = s4.primary().metric_jets(x, 5);
  Jet sd = sqrt(determinant(g));

  const Chart& chart = s4.primary();
  auto F = [&chart](std::span<const __float128> y) {
    SmallMat<__float128> m(4);
    std::vector<__float128> buf(16);
    chart.metric_q(y, buf.data());
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) m(i, j) = buf[i * 4 + j];
    return g_sqrt(determinant(m));
  };
  const MultiIndexTable& tab = sd.table();
  for (std::size_t r = 0; r < tab.prefix_size(4); ++r) {
    auto e = tab.exponents(r);
    const int alpha[4] = {e[0], e[1], e[2], e[3]};
    const double expect = fd_partial(F, x, {alpha, 4}, 1e-3) / tab.factorial_of(r);
    CHECK(std::fabs(sd.coeff(r) - expect) <= 1e-5 * std::max(1.0, std::fabs(expect)));
  }
}

TEST_CASE("axis derivative bookkeeping") {
  Jet x = Jet::variable(0, 0.5, 2, 3);
  Jet y = Jet::variable(1, 0.25, 2, 3);
  Jet f = sin(x) * y;
  Jet fx = f.axis_derivative(0);
  CHECK(fx.order() == 2);
  CHECK(fx.value() == doctest::Approx(std::cos(0.5) * 0.25));
  Jet fxy = fx.axis_derivative(1);
  Jet fyx = f.axis_derivative(1).axis_derivative(0);
  CHECK((fxy - fyx).max_abs() <= 1e-15);
  Jet v = f;
  for (int i = 0; i < 3; ++i) v = v.axis_derivative(0);
  CHECK_THROWS_AS(v.axis_derivative(0), std::domain_error);
}
