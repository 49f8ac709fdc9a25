#include "gradsol/multi_index.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace gradsol {

namespace {

std::uint64_t binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t r = 1;
  for (int i = 0; i < k; ++i) r = r * static_cast<std::uint64_t>(n - i) / (i + 1);
  return r;
}

// Compositions of m into n parts, lexicographic with the leading exponent
// descending: (m,0,..), (m-1,1,0,..), ...
void emit_compositions(int n, int m, std::vector<std::uint8_t>& scratch,
                       std::vector<std::uint8_t>& out) {
  if (n == 1) {
    scratch.push_back(static_cast<std::uint8_t>(m));
    out.insert(out.end(), scratch.begin(), scratch.end());
    scratch.pop_back();
    return;
  }
  for (int v = m; v >= 0; --v) {
    scratch.push_back(static_cast<std::uint8_t>(v));
    emit_compositions(n - 1, m - v, scratch, out);
    scratch.pop_back();
  }
}

}  // namespace

std::size_t MultiIndexTable::count(int dim, int order) {
  return static_cast<std::size_t>(binom(dim + order, order));
}

MultiIndexTable::MultiIndexTable(int dim, int order) : dim_(dim), order_(order) {
  order_begin_.assign(order + 2, 0);
  std::vector<std::uint8_t> scratch;
  for (int m = 0; m <= order; ++m) {
    order_begin_[m] = exps_.size() / dim;
    emit_compositions(dim, m, scratch, exps_);
  }
  order_begin_[order + 1] = exps_.size() / dim;

  const std::size_t n = size();
  order_of_.resize(n);
  fact_.resize(n);
  for (std::size_t r = 0; r < n; ++r) {
    int o = 0;
    double f = 1.0;
    for (int i = 0; i < dim; ++i) {
      const int e = exps_[r * dim + i];
      o += e;
      for (int j = 2; j <= e; ++j) f *= j;
    }
    order_of_[r] = static_cast<std::uint8_t>(o);
    fact_[r] = f;
  }

  // Product triples grouped by output rank.
  std::vector<int> sum(dim);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (order_of_[a] + order_of_[b] > order) continue;
      for (int i = 0; i < dim; ++i) sum[i] = exps_[a * dim + i] + exps_[b * dim + i];
      const std::size_t out = rank_of(sum);
      triples_.push_back({static_cast<std::int32_t>(a), static_cast<std::int32_t>(b),
                          static_cast<std::int32_t>(out)});
    }
  }
  std::sort(triples_.begin(), triples_.end(), [](const Triple& x, const Triple& y) {
    if (x.out != y.out) return x.out < y.out;
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  });
  triple_begin_.assign(n + 1, 0);
  for (const Triple& t : triples_) ++triple_begin_[t.out + 1];
  for (std::size_t i = 1; i <= n; ++i) triple_begin_[i] += triple_begin_[i - 1];

  // Per-axis derivative maps over the (dim, order-1) prefix.
  deriv_.resize(dim);
  if (order >= 1) {
    const std::size_t small = prefix_size(order - 1);
    std::vector<int> shifted(dim);
    for (int axis = 0; axis < dim; ++axis) {
      deriv_[axis].resize(small);
      for (std::size_t t = 0; t < small; ++t) {
        for (int i = 0; i < dim; ++i) shifted[i] = exps_[t * dim + i];
        shifted[axis] += 1;
        deriv_[axis][t] = {static_cast<std::int32_t>(rank_of(shifted)),
                           static_cast<double>(shifted[axis])};
      }
    }
  }
}

std::size_t MultiIndexTable::rank_of(std::span<const int> alpha) const {
  int m = 0;
  for (int v : alpha) m += v;
  if (m > order_) throw std::out_of_range("multi-index order exceeds table order");
  // Rank within the block of total order m, leading exponent descending.
  std::size_t within = 0;
  int rem = m;
  for (int i = 0; i + 1 < dim_; ++i) {
    for (int v = rem; v > alpha[i]; --v)
      within += static_cast<std::size_t>(binom(rem - v + dim_ - i - 2, dim_ - i - 2));
    rem -= alpha[i];
  }
  return order_begin_[m] + within;
}

const MultiIndexTable& MultiIndexTable::get(int dim, int order) {
  if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("jet dimension out of range [1,6]");
  if (order < 0 || order > kMaxOrder) throw std::invalid_argument("jet order out of range [0,8]");
  struct Slot {
    std::atomic<const MultiIndexTable*> ptr{nullptr};
  };
  static Slot slots[kMaxDim + 1][kMaxOrder + 1];
  static std::mutex build_mutex;

  Slot& s = slots[dim][order];
  const MultiIndexTable* p = s.ptr.load(std::memory_order_acquire);
  if (p != nullptr) return *p;
  std::lock_guard<std::mutex> lock(build_mutex);
  p = s.ptr.load(std::memory_order_acquire);
  if (p == nullptr) {
    p = new MultiIndexTable(dim, order);  // intentionally immortal
    s.ptr.store(p, std::memory_order_release);
  }
  return *p;
}

}  // namespace gradsol
