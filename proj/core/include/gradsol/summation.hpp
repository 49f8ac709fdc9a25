#pragma once

#include <cstddef>
#include <span>

namespace gradsol {

/// Pairwise (tree) summation with a fixed recursion shape: the result depends
/// only on the contents, not on how many threads produced them.
inline double pairwise_sum(std::span<const double> v, std::size_t lo, std::size_t hi) {
  const std::size_t len = hi - lo;
  if (len <= 8) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += v[i];
    return s;
  }
  const std::size_t mid = lo + len / 2;
  return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

inline double pairwise_sum(std::span<const double> v) { return pairwise_sum(v, 0, v.size()); }

}  // namespace gradsol
