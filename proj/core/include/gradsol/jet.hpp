#pragma once

#include <cmath>
#include <cstring>
#include <span>
#include <stdexcept>

#include "gradsol/jet_arena.hpp"
#include "gradsol/multi_index.hpp"

namespace gradsol {

namespace detail {

/// Coefficient storage with inline capacity covering (n=4, K<=2), the bulk of
/// quadrature-node work; higher orders spill to the active jet arena (inside
/// a JetArenaScope) or the heap. Always zero-initialized on resize.
class CoeffVec {
public:
  static constexpr std::size_t kInline = 16;

  CoeffVec() = default;
  explicit CoeffVec(std::size_t n) { resize_zero(n); }
  CoeffVec(const CoeffVec& o) { assign(o); }
  CoeffVec(CoeffVec&& o) noexcept { steal(o); }
  CoeffVec& operator=(const CoeffVec& o) {
    if (this != &o) {
      release();
      assign(o);
    }
    return *this;
  }
  CoeffVec& operator=(CoeffVec&& o) noexcept {
    if (this != &o) {
      release();
      steal(o);
    }
    return *this;
  }
  ~CoeffVec() { release(); }

  std::size_t size() const { return size_; }
  double* data() { return heap_ ? heap_ : inline_; }
  const double* data() const { return heap_ ? heap_ : inline_; }
  double& operator[](std::size_t i) { return data()[i]; }
  double operator[](std::size_t i) const { return data()[i]; }

  void resize_zero(std::size_t n) {
    release();
    if (n > kInline) spill(n);
    size_ = n;
    std::memset(data(), 0, n * sizeof(double));
  }

private:
  void spill(std::size_t n) {
    if (double* p = JetArena::try_alloc(n)) {
      heap_ = p;
      arena_ = true;
    } else {
      heap_ = new double[n];
      arena_ = false;
    }
  }
  void assign(const CoeffVec& o) {
    if (o.size_ > kInline) spill(o.size_);
    size_ = o.size_;
    std::memcpy(data(), o.data(), size_ * sizeof(double));
  }
  void steal(CoeffVec& o) {
    if (o.heap_) {
      heap_ = o.heap_;
      arena_ = o.arena_;
      size_ = o.size_;
      o.heap_ = nullptr;
      o.size_ = 0;
    } else {
      size_ = o.size_;
      std::memcpy(inline_, o.inline_, size_ * sizeof(double));
      o.size_ = 0;
    }
  }
  void release() {
    if (!arena_) delete[] heap_;
    heap_ = nullptr;
    arena_ = false;
    size_ = 0;
  }

  double inline_[kInline];
  double* heap_ = nullptr;
  std::size_t size_ = 0;
  bool arena_ = false;
};

}  // namespace detail

/// Truncated multivariate Taylor expansion of a scalar at a point.
///
/// Coefficients are Taylor-normalized (partial derivative divided by the
/// multi-index factorial), stored densely over all multi-indices of total
/// order <= order(), graded-lex ranked. Arithmetic is closed at fixed
/// (dim, order); binary operations require both operands to match.
class Jet {
public:
  Jet() = default;

  static Jet constant(int dim, int order, double value) {
    Jet j(dim, order);
    j.c_[0] = value;
    return j;
  }

  /// Coordinate function x_axis expanded at `value`.
  static Jet variable(int axis, double value, int dim, int order) {
    if (axis < 0 || axis >= dim) throw std::invalid_argument("jet variable axis out of range");
    Jet j(dim, order);
    j.c_[0] = value;
    if (order >= 1) j.c_[1 + axis] = 1.0;
    return j;
  }

  bool empty() const { return tab_ == nullptr; }
  int dim() const { return tab_ ? tab_->dim() : 0; }
  int order() const { return tab_ ? tab_->order() : 0; }
  std::size_t ncoeffs() const { return c_.size(); }
  const MultiIndexTable& table() const { return *tab_; }

  double value() const { return c_.size() ? c_[0] : 0.0; }
  double coeff(std::size_t rank) const { return c_[rank]; }
  double& coeff(std::size_t rank) { return c_[rank]; }
  std::span<const double> coeffs() const { return {c_.data(), c_.size()}; }

  /// Partial derivative value d^alpha f = coeff(alpha) * alpha!.
  double partial(std::span<const int> alpha) const;

  /// max |coefficient|.
  double max_abs() const {
    double m = 0.0;
    for (std::size_t i = 0; i < c_.size(); ++i) m = std::max(m, std::fabs(c_[i]));
    return m;
  }

  Jet truncated(int new_order) const;

  /// Derivative along one axis; result order drops by one.
  Jet axis_derivative(int axis) const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(const Jet& o) { return *this = *this * o; }
  Jet& operator/=(const Jet& o) { return *this = *this / o; }
  Jet& operator+=(double s) {
    require_nonempty();
    c_[0] += s;
    return *this;
  }
  Jet& operator-=(double s) { return *this += -s; }
  Jet& operator*=(double s) {
    require_nonempty();
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] *= s;
    return *this;
  }
  Jet& operator/=(double s) { return *this *= 1.0 / s; }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator+(Jet a, double s) { return a += s; }
  friend Jet operator+(double s, Jet a) { return a += s; }
  friend Jet operator-(Jet a, double s) { return a -= s; }
  friend Jet operator-(double s, const Jet& a) {
    Jet r = -a;
    r += s;
    return r;
  }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, double s) { return a /= s; }
  friend Jet operator/(double s, const Jet& a);
  friend Jet operator-(const Jet& a) {
    Jet r = a;
    for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = -r.c_[i];
    return r;
  }

  /// dst += a * b, without a temporary. Hot path for tensor kernels.
  static void fma_acc(Jet& dst, const Jet& a, const Jet& b);

private:
  Jet(int dim, int order) : tab_(&MultiIndexTable::get(dim, order)) {
    c_.resize_zero(tab_->size());
  }
  void require_nonempty() const {
    if (!tab_) throw std::logic_error("operation on empty jet");
  }
  static const MultiIndexTable& require_same(const Jet& a, const Jet& b) {
    a.require_nonempty();
    b.require_nonempty();
    if (a.tab_ != b.tab_)
      throw std::invalid_argument("jet operands differ in (dim, order)");
    return *a.tab_;
  }

  const MultiIndexTable* tab_ = nullptr;
  detail::CoeffVec c_;

  friend Jet jet_compose_univariate(const Jet&, std::span<const double>);
};

// Elementwise Taylor composition of univariate functions.
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet exp(const Jet& a);
Jet sqrt(const Jet& a);
Jet pow(const Jet& a, double expo);

/// d^alpha value of the jet (coefficient times alpha!).
double extract_partial(const Jet& a, std::span<const int> alpha);
inline double extract_partial(const Jet& a, std::initializer_list<int> alpha) {
  return extract_partial(a, std::span<const int>(alpha.begin(), alpha.size()));
}

}  // namespace gradsol
