#pragma once

#include <string>
#include <vector>

namespace gradsol {

enum class Regime { VOnly, BachLine, Lambda, Open };

inline const char* regime_name(Regime r) {
  switch (r) {
    case Regime::VOnly: return "V-ONLY";
    case Regime::BachLine: return "BACH-LINE";
    case Regime::Lambda: return "LAMBDA";
    case Regime::Open: return "OPEN";
  }
  return "?";
}

/// Classification of the (alpha, beta) parameter point of alpha U + beta V:
///   Lambda   = {a >= 0, b > a/3} u {a <= 0, b < a/3}  -> Einstein or Gaussian
///   BachLine = {b = a/3, a != 0}                      -> Bach-flat results
///   VOnly    = {a = 0, b != 0}  (also lies in Lambda; both facts reported)
///   Open     = everything else (incl. the zero tensor at the origin)
struct RegimeVerdict {
  double alpha = 0.0;
  double beta = 0.0;
  Regime regime = Regime::Open;
  bool in_lambda = false;
  std::string conclusion;
};

RegimeVerdict classify_regime(double alpha, double beta);

/// Square lattice of verdicts over [lo, hi]^2 with the given step.
std::vector<RegimeVerdict> regime_grid(double lo, double hi, double step);

}  // namespace gradsol
