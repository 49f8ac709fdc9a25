#pragma once

#include <string>

namespace gradsol {

enum class Verdict { Pass, Fail, SkippedHypothesis, NotApplicable, LowAccuracy };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::SkippedHypothesis: return "SKIPPED-HYPOTHESIS";
    case Verdict::NotApplicable: return "NOT-APPLICABLE";
    case Verdict::LowAccuracy: return "LOW-ACCURACY";
  }
  return "?";
}

/// One verified identity: id, anchor, geometry, sample count, max residual,
/// tolerance, verdict. PASS iff the residual met the tolerance with the
/// hypotheses holding.
struct IdentityReport {
  std::string id;
  std::string anchor;
  std::string geometry;
  long samples = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  Verdict verdict = Verdict::Pass;
  double refinement = 0.0;  // quadrature refinement estimate, when integral
  std::string note;
};

}  // namespace gradsol
