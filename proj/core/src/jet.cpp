#include "gradsol/jet.hpp"

#include <cmath>

namespace gradsol {

double Jet::partial(std::span<const int> alpha) const {
  require_nonempty();
  int m = 0;
  for (int v : alpha) {
    if (v < 0) throw std::invalid_argument("negative multi-index entry");
    m += v;
  }
  if (static_cast<int>(alpha.size()) != dim())
    throw std::invalid_argument("multi-index dimension mismatch");
  if (m > order()) throw std::out_of_range("multi-index order exceeds jet order");
  const std::size_t r = tab_->rank_of(alpha);
  return c_[r] * tab_->factorial_of(r);
}

Jet Jet::truncated(int new_order) const {
  require_nonempty();
  if (new_order < 0 || new_order > order())
    throw std::invalid_argument("truncation order out of range");
  if (new_order == order()) return *this;
  Jet r(dim(), new_order);
  const std::size_t n = r.c_.size();
  for (std::size_t i = 0; i < n; ++i) r.c_[i] = c_[i];
  return r;
}

Jet Jet::axis_derivative(int axis) const {
  require_nonempty();
  if (axis < 0 || axis >= dim()) throw std::invalid_argument("derivative axis out of range");
  if (order() < 1) throw std::domain_error("jet order exhausted");
  Jet r(dim(), order() - 1);
  const auto map = tab_->deriv(axis);
  for (std::size_t t = 0; t < map.size(); ++t) r.c_[t] = c_[map[t].src] * map[t].factor;
  return r;
}

Jet& Jet::operator+=(const Jet& o) {
  require_same(*this, o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  require_same(*this, o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

namespace {

// Triples are grouped by output rank, so each output accumulates in a
// register and stores once. Orders 0 and 1 are unrolled; they dominate the
// call counts in the curvature kernels.
inline void convolve_acc(const MultiIndexTable& tab, const double* pa, const double* pb,
                         double* pr) {
  const std::size_t n = tab.size();
  if (tab.order() == 0) {
    pr[0] += pa[0] * pb[0];
    return;
  }
  if (tab.order() == 1) {
    const double a0 = pa[0], b0 = pb[0];
    pr[0] += a0 * b0;
    for (std::size_t i = 1; i < n; ++i) pr[i] += a0 * pb[i] + pa[i] * b0;
    return;
  }
  const auto triples = tab.triples();
  const auto begin = tab.triple_begin();
  for (std::size_t out = 0; out < n; ++out) {
    double acc = pr[out];
    for (std::int32_t k = begin[out]; k < begin[out + 1]; ++k)
      acc += pa[triples[k].a] * pb[triples[k].b];
    pr[out] = acc;
  }
}

}  // namespace

Jet operator*(const Jet& a, const Jet& b) {
  const MultiIndexTable& tab = Jet::require_same(a, b);
  Jet r(a.dim(), a.order());
  convolve_acc(tab, a.c_.data(), b.c_.data(), r.c_.data());
  return r;
}

void Jet::fma_acc(Jet& dst, const Jet& a, const Jet& b) {
  const MultiIndexTable& tab = require_same(a, b);
  if (dst.tab_ != a.tab_) throw std::invalid_argument("jet operands differ in (dim, order)");
  convolve_acc(tab, a.c_.data(), b.c_.data(), dst.c_.data());
}

Jet operator/(const Jet& a, const Jet& b) {
  const MultiIndexTable& tab = Jet::require_same(a, b);
  if (b.value() == 0.0) throw std::domain_error("division by jet with zero constant term");
  // Solve q * b = a by ascending output rank; graded ordering guarantees
  // every dependency q[t.a] with t.b != 0 has a smaller rank.
  Jet q(a.dim(), a.order());
  const double* pa = a.c_.data();
  const double* pb = b.c_.data();
  double* pq = q.c_.data();
  const auto triples = tab.triples();
  const auto begin = tab.triple_begin();
  const double inv_b0 = 1.0 / pb[0];
  const std::size_t n = tab.size();
  for (std::size_t out = 0; out < n; ++out) {
    double acc = pa[out];
    for (std::int32_t k = begin[out]; k < begin[out + 1]; ++k) {
      const auto& t = triples[k];
      if (t.b == 0) continue;  // that's the q[out] * b0 term being solved for
      acc -= pq[t.a] * pb[t.b];
    }
    pq[out] = acc * inv_b0;
  }
  return q;
}

Jet operator/(double s, const Jet& a) {
  return Jet::constant(a.dim(), a.order(), s) / a;
}

/// Horner evaluation of sum_m c[m] * (a - a0)^m truncated at the jet order.
Jet jet_compose_univariate(const Jet& a, std::span<const double> c) {
  Jet ahat = a;
  ahat.c_[0] = 0.0;
  const int K = a.order();
  Jet res = Jet::constant(a.dim(), K, c[K]);
  for (int m = K - 1; m >= 0; --m) {
    res = res * ahat;
    res += c[m];
  }
  return res;
}

namespace {

constexpr int kMaxK = MultiIndexTable::kMaxOrder;

}  // namespace

Jet sin(const Jet& a) {
  const int K = a.order();
  const double s0 = std::sin(a.value());
  const double c0 = std::cos(a.value());
  double c[kMaxK + 1];
  double fact = 1.0;
  for (int m = 0; m <= K; ++m) {
    if (m > 0) fact *= m;
    const double d = (m % 4 == 0) ? s0 : (m % 4 == 1) ? c0 : (m % 4 == 2) ? -s0 : -c0;
    c[m] = d / fact;
  }
  return jet_compose_univariate(a, {c, static_cast<std::size_t>(K + 1)});
}

Jet cos(const Jet& a) {
  const int K = a.order();
  const double s0 = std::sin(a.value());
  const double c0 = std::cos(a.value());
  double c[kMaxK + 1];
  double fact = 1.0;
  for (int m = 0; m <= K; ++m) {
    if (m > 0) fact *= m;
    const double d = (m % 4 == 0) ? c0 : (m % 4 == 1) ? -s0 : (m % 4 == 2) ? -c0 : s0;
    c[m] = d / fact;
  }
  return jet_compose_univariate(a, {c, static_cast<std::size_t>(K + 1)});
}

Jet exp(const Jet& a) {
  const int K = a.order();
  const double e0 = std::exp(a.value());
  double c[kMaxK + 1];
  double fact = 1.0;
  for (int m = 0; m <= K; ++m) {
    if (m > 0) fact *= m;
    c[m] = e0 / fact;
  }
  return jet_compose_univariate(a, {c, static_cast<std::size_t>(K + 1)});
}

Jet pow(const Jet& a, double expo) {
  const int K = a.order();
  const double a0 = a.value();
  const bool integral = expo == std::floor(expo);
  if (!integral && a0 <= 0.0)
    throw std::domain_error("pow(jet, non-integer) requires positive constant term");
  if (integral && a0 == 0.0 && expo < 0)
    throw std::domain_error("pow(jet, negative) requires nonzero constant term");
  // Taylor coefficients binom(expo, m) * a0^(expo - m); for integral expo the
  // series terminates, allowing a0 <= 0.
  double c[kMaxK + 1];
  double binom = 1.0;
  for (int m = 0; m <= K; ++m) {
    if (m > 0) binom *= (expo - (m - 1)) / m;
    c[m] = (binom == 0.0) ? 0.0 : binom * std::pow(a0, expo - m);
  }
  return jet_compose_univariate(a, {c, static_cast<std::size_t>(K + 1)});
}

Jet sqrt(const Jet& a) {
  if (a.value() <= 0.0) throw std::domain_error("sqrt(jet) requires positive constant term");
  return pow(a, 0.5);
}

double extract_partial(const Jet& a, std::span<const int> alpha) { return a.partial(alpha); }

}  // namespace gradsol
