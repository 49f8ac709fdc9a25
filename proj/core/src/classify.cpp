#include "gradsol/classify.hpp"

namespace gradsol {

RegimeVerdict classify_regime(double alpha, double beta) {
  RegimeVerdict v;
  v.alpha = alpha;
  v.beta = beta;
  v.in_lambda = (alpha >= 0.0 && beta > alpha / 3.0) || (alpha <= 0.0 && beta < alpha / 3.0);

  if (alpha == 0.0 && beta != 0.0) {
    v.regime = Regime::VOnly;
    v.conclusion =
        "Einstein or Gaussian soliton (pure V; the point also lies in the Lambda region)";
  } else if (alpha != 0.0 && beta == alpha / 3.0) {
    v.regime = Regime::BachLine;
    v.conclusion =
        "Einstein, or a finite quotient of the Gaussian soliton on R^4 or of the round "
        "cylinder S^3 x R";
  } else if (v.in_lambda) {
    v.regime = Regime::Lambda;
    v.conclusion = "Einstein or Gaussian soliton";
  } else {
    v.regime = Regime::Open;
    v.conclusion = "no classification established (conjectured for pure U)";
  }
  return v;
}

std::vector<RegimeVerdict> regime_grid(double lo, double hi, double step) {
  std::vector<RegimeVerdict> out;
  const int steps = static_cast<int>((hi - lo) / step + 1.5);
  for (int i = 0; i < steps; ++i)
    for (int j = 0; j < steps; ++j) {
      const double a = lo + i * step;
      const double b = lo + j * step;
      out.push_back(classify_regime(a, b));
    }
  return out;
}

}  // namespace gradsol
