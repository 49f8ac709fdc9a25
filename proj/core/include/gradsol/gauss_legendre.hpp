#pragma once

#include <vector>

namespace gradsol {

/// Gauss-Legendre rule on [-1, 1]; nodes ascending. Computed by Newton
/// iteration on the Legendre recurrence and cached per q.
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

const GaussLegendreRule& gauss_legendre(int q);

}  // namespace gradsol
