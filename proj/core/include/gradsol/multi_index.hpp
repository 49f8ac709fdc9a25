#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace gradsol {

/// Ranked multi-index tables for truncated multivariate Taylor arithmetic.
///
/// Multi-indices over n variables are ordered graded-lexicographically
/// (ascending total order, then lexicographic with the first exponent
/// largest). With this ordering the table for (n, K') is a prefix of the
/// table for (n, K) whenever K' <= K, so truncation is a coefficient-vector
/// prefix copy and ranks are stable across orders.
class MultiIndexTable {
public:
  struct Triple {
    std::int32_t a;    // rank of left factor
    std::int32_t b;    // rank of right factor
    std::int32_t out;  // rank of a + b
  };
  struct DerivEntry {
    std::int32_t src;  // rank of alpha + e_axis in this table
    double factor;     // alpha[axis] + 1
  };

  static constexpr int kMaxDim = 6;
  static constexpr int kMaxOrder = 8;

  /// Shared immutable table for (dim, order); built once, lives for the
  /// process lifetime.
  static const MultiIndexTable& get(int dim, int order);

  static std::size_t count(int dim, int order);

  int dim() const { return dim_; }
  int order() const { return order_; }
  std::size_t size() const { return exps_.size() / dim_; }

  std::span<const std::uint8_t> exponents(std::size_t rank) const {
    return {exps_.data() + rank * dim_, static_cast<std::size_t>(dim_)};
  }
  int order_of(std::size_t rank) const { return order_of_[rank]; }
  double factorial_of(std::size_t rank) const { return fact_[rank]; }

  /// Rank of a multi-index; requires sum(alpha) <= order().
  std::size_t rank_of(std::span<const int> alpha) const;

  /// Number of coefficients of total order <= m (prefix length).
  std::size_t prefix_size(int m) const { return order_begin_[m + 1]; }

  /// Product triples: every (a, b) with order(a) + order(b) <= order(),
  /// grouped by ascending `out`.
  std::span<const Triple> triples() const { return triples_; }
  /// Offsets into triples() by output rank: group for `out` is
  /// [triple_begin()[out], triple_begin()[out+1]).
  std::span<const std::int32_t> triple_begin() const { return triple_begin_; }

  /// Partial-derivative map for one axis: entry t (a rank in the (dim,
  /// order-1) prefix) pulls from src = rank(alpha_t + e_axis) with weight
  /// alpha_t[axis] + 1.
  std::span<const DerivEntry> deriv(int axis) const {
    return {deriv_[axis].data(), deriv_[axis].size()};
  }

private:
  MultiIndexTable(int dim, int order);

  int dim_ = 0;
  int order_ = 0;
  std::vector<std::uint8_t> exps_;
  std::vector<std::uint8_t> order_of_;
  std::vector<double> fact_;
  std::vector<std::size_t> order_begin_;
  std::vector<Triple> triples_;
  std::vector<std::int32_t> triple_begin_;
  std::vector<std::vector<DerivEntry>> deriv_;
};

}  // namespace gradsol
