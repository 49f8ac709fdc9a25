#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "gradsol/jet.hpp"
#include "gradsol/linalg.hpp"

namespace gradsol {

template <class T>
using MetricFn = std::function<void(std::span<const T>, T*)>;  // row-major dim*dim
template <class T>
using ScalarFn = std::function<T(std::span<const T>)>;

/// One coordinate chart: a box of coordinates plus metric components (and an
/// optional potential) evaluable over doubles, __float128, and jets from a
/// single generic formula.
struct Chart {
  std::string name;
  int dim = 0;
  std::vector<double> lo, hi;

  MetricFn<double> metric_d;
  MetricFn<__float128> metric_q;
  MetricFn<Jet> metric_j;

  bool has_potential = false;
  ScalarFn<double> potential_d;
  ScalarFn<Jet> potential_j;

  template <class F>
  void set_metric(F f) {
    metric_d = [f](std::span<const double> x, double* g) { f(x, g); };
    metric_q = [f](std::span<const __float128> x, __float128* g) { f(x, g); };
    metric_j = [f](std::span<const Jet> x, Jet* g) { f(x, g); };
  }

  template <class F>
  void set_potential(F f) {
    has_potential = true;
    potential_d = [f](std::span<const double> x) { return f(x); };
    potential_j = [f](std::span<const Jet> x) { return f(x); };
  }

  /// Metric components as jets expanded at `x` to the given order.
  SmallMat<Jet> metric_jets(std::span<const double> x, int order) const;
  Jet potential_jet(std::span<const double> x, int order) const;
  SmallMat<double> metric_values(std::span<const double> x) const;
};

/// Sparse multivariate polynomial with double coefficients; evaluation is
/// generic over the scalar algebra (derivatives of jets are exact).
struct Polynomial {
  int dim = 0;
  struct Term {
    double coef;
    std::array<std::uint8_t, 6> exps;
  };
  std::vector<Term> terms;

  template <class T>
  T eval(std::span<const T> x) const {
    T acc = scalar_like(x[0], 0.0);
    for (const Term& t : terms) {
      T m = scalar_like(x[0], t.coef);
      for (int i = 0; i < dim; ++i)
        for (int e = 0; e < t.exps[i]; ++e) m = m * x[i];
      acc = acc + m;
    }
    return acc;
  }

  double eval_d(std::span<const double> x) const { return eval<double>(x); }

  /// Sum of |coefficients|; bounds |p| on the unit box.
  double coef_l1() const {
    double s = 0.0;
    for (const Term& t : terms) s += std::fabs(t.coef);
    return s;
  }

  void scale(double s) {
    for (Term& t : terms) t.coef *= s;
  }
};

/// All monomials of total degree <= degree with coefficients drawn uniformly
/// from [-1, 1] by `rng`.
Polynomial random_polynomial(int dim, int degree, std::mt19937_64& rng);

/// Deterministic uniform double in [0, 1) from the engine's raw output;
/// avoids std::uniform_real_distribution (implementation-defined sequences).
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}
inline double uniform_in(std::mt19937_64& rng, double a, double b) {
  return a + (b - a) * uniform01(rng);
}

}  // namespace gradsol
