#pragma once

#include <quadmath.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "gradsol/jet.hpp"

namespace gradsol {

// Scalar shims so chart formulas and matrix kernels can be written once and
// instantiated for double (values), __float128 (finite-difference oracle),
// and Jet (derivative pipeline).

inline double g_sin(double x) { return std::sin(x); }
inline double g_cos(double x) { return std::cos(x); }
inline double g_exp(double x) { return std::exp(x); }
inline double g_sqrt(double x) { return std::sqrt(x); }
inline double g_pow(double x, double e) { return std::pow(x, e); }

inline __float128 g_sin(__float128 x) { return sinq(x); }
inline __float128 g_cos(__float128 x) { return cosq(x); }
inline __float128 g_exp(__float128 x) { return expq(x); }
inline __float128 g_sqrt(__float128 x) { return sqrtq(x); }
inline __float128 g_pow(__float128 x, double e) { return powq(x, (__float128)e); }

inline Jet g_sin(const Jet& x) { return sin(x); }
inline Jet g_cos(const Jet& x) { return cos(x); }
inline Jet g_exp(const Jet& x) { return exp(x); }
inline Jet g_sqrt(const Jet& x) { return sqrt(x); }
inline Jet g_pow(const Jet& x, double e) { return pow(x, e); }

/// A constant in the same scalar algebra as `proto`.
inline double scalar_like(double, double v) { return v; }
inline __float128 scalar_like(__float128, double v) { return (__float128)v; }
inline Jet scalar_like(const Jet& proto, double v) {
  return Jet::constant(proto.dim(), proto.order(), v);
}

inline double scalar_mag(double x) { return std::fabs(x); }
inline double scalar_mag(__float128 x) { return static_cast<double>(fabsq(x)); }
inline double scalar_mag(const Jet& x) { return std::fabs(x.value()); }

/// Dense n-by-n matrix over any of the supported scalars.
template <class T>
class SmallMat {
public:
  SmallMat() = default;
  explicit SmallMat(int n) : n_(n), a_(static_cast<std::size_t>(n) * n) {}

  int n() const { return n_; }
  T& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  const T& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  T* data() { return a_.data(); }
  const T* data() const { return a_.data(); }

private:
  int n_ = 0;
  std::vector<T> a_;
};

/// Gauss-Jordan inverse with partial pivoting on scalar magnitude. One
/// reciprocal per column; everything else multiplies.
template <class T>
SmallMat<T> invert(SmallMat<T> m) {
  const int n = m.n();
  SmallMat<T> inv(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv(i, j) = scalar_like(m(0, 0), i == j ? 1.0 : 0.0);
  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = scalar_mag(m(col, col));
    for (int r = col + 1; r < n; ++r) {
      const double v = scalar_mag(m(r, col));
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best == 0.0) throw std::domain_error("singular matrix");
    if (piv != col) {
      for (int j = 0; j < n; ++j) {
        std::swap(m(piv, j), m(col, j));
        std::swap(inv(piv, j), inv(col, j));
      }
    }
    const T dinv = scalar_like(m(0, 0), 1.0) / m(col, col);
    for (int j = 0; j < n; ++j) {
      m(col, j) = m(col, j) * dinv;
      inv(col, j) = inv(col, j) * dinv;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const T f = m(r, col);
      if (scalar_mag(f) == 0.0) continue;
      for (int j = 0; j < n; ++j) {
        m(r, j) = m(r, j) - f * m(col, j);
        inv(r, j) = inv(r, j) - f * inv(col, j);
      }
    }
  }
  return inv;
}

/// Determinant by LU elimination with partial pivoting.
template <class T>
T determinant(SmallMat<T> m) {
  const int n = m.n();
  T det = scalar_like(m(0, 0), 1.0);
  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = scalar_mag(m(col, col));
    for (int r = col + 1; r < n; ++r) {
      const double v = scalar_mag(m(r, col));
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best == 0.0) return scalar_like(m(0, 0), 0.0);
    if (piv != col) {
      for (int j = 0; j < n; ++j) std::swap(m(piv, j), m(col, j));
      det = -det;
    }
    det = det * m(col, col);
    for (int r = col + 1; r < n; ++r) {
      const T f = m(r, col) / m(col, col);
      if (scalar_mag(f) == 0.0) continue;
      for (int j = col; j < n; ++j) m(r, j) = m(r, j) - f * m(col, j);
    }
  }
  return det;
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
std::vector<double> symmetric_eigenvalues(SmallMat<double> m);

/// Cheap positive-definiteness check (Cholesky).
bool is_positive_definite(const SmallMat<double>& m);

}  // namespace gradsol
