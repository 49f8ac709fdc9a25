#include "gradsol/gauss_legendre.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace gradsol {

namespace {

GaussLegendreRule build_rule(int q) {
  GaussLegendreRule r;
  r.nodes.resize(q);
  r.weights.resize(q);
  for (int k = 0; k < q; ++k) {
    // Chebyshev-based initial guess, then Newton on P_q.
    long double x = std::cos(M_PI * (k + 0.75L) / (q + 0.5L));
    long double dp = 0.0L;
    for (int iter = 0; iter < 100; ++iter) {
      long double p0 = 1.0L, p1 = x;
      for (int j = 2; j <= q; ++j) {
        const long double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = q * (x * p1 - p0) / (x * x - 1.0L);
      const long double dx = p1 / dp;
      x -= dx;
      if (std::fabs((double)dx) < 1e-19) break;
    }
    r.nodes[q - 1 - k] = (double)x;
    r.weights[q - 1 - k] = (double)(2.0L / ((1.0L - x * x) * dp * dp));
  }
  return r;
}

}  // namespace

const GaussLegendreRule& gauss_legendre(int q) {
  if (q < 1 || q > 256) throw std::invalid_argument("Gauss-Legendre order out of range");
  static std::mutex mtx;
  static std::map<int, GaussLegendreRule> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(q);
  if (it == cache.end()) it = cache.emplace(q, build_rule(q)).first;
  return it->second;
}

}  // namespace gradsol
