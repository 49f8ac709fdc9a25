#include "gradsol/chart.hpp"

#include <stdexcept>

namespace gradsol {

SmallMat<Jet> Chart::metric_jets(std::span<const double> x, int order) const {
  if (static_cast<int>(x.size()) != dim) throw std::invalid_argument("chart point dimension");
  std::vector<Jet> xj(dim);
  for (int i = 0; i < dim; ++i) xj[i] = Jet::variable(i, x[i], dim, order);
  std::vector<Jet> g(static_cast<std::size_t>(dim) * dim);
  metric_j(std::span<const Jet>(xj.data(), xj.size()), g.data());
  SmallMat<Jet> m(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = g[static_cast<std::size_t>(i) * dim + j];
  return m;
}

Jet Chart::potential_jet(std::span<const double> x, int order) const {
  if (!has_potential) throw std::logic_error("chart has no potential");
  std::vector<Jet> xj(dim);
  for (int i = 0; i < dim; ++i) xj[i] = Jet::variable(i, x[i], dim, order);
  return potential_j(std::span<const Jet>(xj.data(), xj.size()));
}

SmallMat<double> Chart::metric_values(std::span<const double> x) const {
  std::vector<double> g(static_cast<std::size_t>(dim) * dim);
  metric_d(x, g.data());
  SmallMat<double> m(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = g[static_cast<std::size_t>(i) * dim + j];
  return m;
}

Polynomial random_polynomial(int dim, int degree, std::mt19937_64& rng) {
  Polynomial p;
  p.dim = dim;
  std::array<std::uint8_t, 6> exps{};
  // Enumerate exponent tuples of total degree <= degree in a fixed order.
  std::function<void(int, int)> rec = [&](int axis, int remaining) {
    if (axis == dim) {
      p.terms.push_back({2.0 * uniform01(rng) - 1.0, exps});
      return;
    }
    for (int e = 0; e <= remaining; ++e) {
      exps[axis] = static_cast<std::uint8_t>(e);
      rec(axis + 1, remaining - e);
    }
    exps[axis] = 0;
  };
  rec(0, degree);
  return p;
}

}  // namespace gradsol
