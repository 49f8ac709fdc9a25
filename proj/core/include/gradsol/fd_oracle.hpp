#pragma once

#include <functional>
#include <span>
#include <vector>

#include "gradsol/chart.hpp"

namespace gradsol {

/// Curvature computed by central finite differences of the chart's metric
/// functions, independent of the jet pipeline. Differencing runs in
/// __float128 so fourth-derivative quantities (Bach, U, V) keep well below
/// the comparison tolerance; the stencils themselves are plain central
/// differences at the configured step.
struct FdCurvature {
  int dim = 0;
  std::vector<double> christoffel;  // n^3, Gamma^k_ij at (k,i,j)
  std::vector<double> Rm;           // n^4, lowered, same convention as the jet path
  std::vector<double> Rc;           // n^2
  double R = 0;
  std::vector<double> W;            // n^4
  std::vector<double> bach;         // n^2 (general-n normalization)
  std::vector<double> U;            // n^2
  std::vector<double> V;            // n^2

  double rm_at(int i, int j, int k, int l) const {
    return Rm[((static_cast<std::size_t>(i) * dim + j) * dim + k) * dim + l];
  }
};

FdCurvature fd_curvature(const Chart& chart, std::span<const double> x, double h);

/// d^alpha F at x by nested 4th-order central first-derivative stencils,
/// evaluated in __float128. |alpha| <= 4 is the intended use.
double fd_partial(const std::function<__float128(std::span<const __float128>)>& F,
                  std::span<const double> x, std::span<const int> alpha, double h);

}  // namespace gradsol
