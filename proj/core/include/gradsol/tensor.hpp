#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gradsol/jet.hpp"
#include "gradsol/linalg.hpp"

namespace gradsol {

enum class Variance : std::uint8_t { Up, Down };

enum class SymmetryTag : std::uint8_t { None, SymmetricPair, RiemannType };

/// Dense tensor of jet components at one chart point, with per-slot variance.
class PointTensor {
public:
  PointTensor() = default;
  PointTensor(int dim, std::vector<Variance> variance, int jet_order,
              std::vector<double> point = {});

  static PointTensor scalar(Jet j, std::vector<double> point = {});

  int dim() const { return dim_; }
  int rank() const { return static_cast<int>(var_.size()); }
  int order() const { return comp_.empty() ? 0 : comp_[0].order(); }
  std::span<const Variance> variance() const { return var_; }
  std::span<const double> point() const { return point_; }
  SymmetryTag symmetry() const { return sym_; }
  void set_symmetry(SymmetryTag s) { sym_ = s; }

  std::size_t ncomp() const { return comp_.size(); }
  Jet& operator[](std::size_t flat) { return comp_[flat]; }
  const Jet& operator[](std::size_t flat) const { return comp_[flat]; }

  std::size_t flatten(std::span<const int> idx) const;
  Jet& at(std::span<const int> idx) { return comp_[flatten(idx)]; }
  const Jet& at(std::span<const int> idx) const { return comp_[flatten(idx)]; }
  Jet& at(std::initializer_list<int> idx) {
    return comp_[flatten(std::span<const int>(idx.begin(), idx.size()))];
  }
  const Jet& at(std::initializer_list<int> idx) const {
    return comp_[flatten(std::span<const int>(idx.begin(), idx.size()))];
  }
  double value_at(std::initializer_list<int> idx) const { return at(idx).value(); }

  /// max over components of |value at base point|.
  double max_abs_value() const;
  /// max over components and Taylor coefficients.
  double max_abs_coeff() const;

  PointTensor& operator+=(const PointTensor& o);
  PointTensor& operator-=(const PointTensor& o);
  PointTensor& operator*=(double s);
  friend PointTensor operator+(PointTensor a, const PointTensor& b) { return a += b; }
  friend PointTensor operator-(PointTensor a, const PointTensor& b) { return a -= b; }
  friend PointTensor operator*(PointTensor a, double s) { return a *= s; }
  friend PointTensor operator*(double s, PointTensor a) { return a *= s; }

private:
  int dim_ = 0;
  std::vector<Variance> var_;
  std::vector<Jet> comp_;
  SymmetryTag sym_ = SymmetryTag::None;
  std::vector<double> point_;
};

/// Metric data at a point: g, its inverse, and the Christoffel symbols
/// (jet-valued, one order below g). Immutable once built.
struct MetricAtPoint {
  int dim = 0;
  int order = 0;
  PointTensor g;            // Down Down, order K
  PointTensor g_inv;        // Up Up, order K
  PointTensor christoffel;  // (k, i, j) = Gamma^k_ij, order K-1
};

PointTensor truncate_tensor(const PointTensor& t, int order);

/// Trace over two slots of opposite variance (no metric involved).
PointTensor contract(const PointTensor& t, int slot_a, int slot_b);

/// Contraction of slot_a of `a` against slot_b of `b` (opposite variance).
PointTensor contract_with(const PointTensor& a, int slot_a, const PointTensor& b, int slot_b);

/// Flip one slot's variance with g or its inverse.
PointTensor raise_lower(const PointTensor& t, int slot, const MetricAtPoint& metric);

/// Levi-Civita covariant derivative; adds a leading Down slot and consumes
/// one jet order.
PointTensor covariant_derivative(const PointTensor& t, const MetricAtPoint& metric);

/// g^{as} (grad t)_{a ... s ...}: covariant derivative contracted against one
/// Down slot (or plain contraction for an Up slot). Rank is unchanged minus
/// one; avoids materializing the full derivative when only a divergence is
/// needed.
PointTensor covariant_divergence(const PointTensor& t, int slot, const MetricAtPoint& metric);

/// Full self-contraction |t|^2 with every index pair closed through the
/// metric; returned as a jet so callers can differentiate it further.
Jet tensor_norm2_jet(const PointTensor& t, const MetricAtPoint& metric);
double tensor_norm2(const PointTensor& t, const MetricAtPoint& metric);

/// |t|^2 at the base point only, metric values, no jet arithmetic.
double tensor_norm2_value(const PointTensor& t, const MetricAtPoint& metric);

/// Scalar product <a, b> with all slots of `a` paired against `b`.
Jet tensor_dot_jet(const PointTensor& a, const PointTensor& b, const MetricAtPoint& metric);

PointTensor outer(const PointTensor& a, const PointTensor& b);
PointTensor permuted(const PointTensor& t, std::span<const int> perm);
PointTensor scale_by_jet(const PointTensor& t, const Jet& s);

/// How far the components are from the declared symmetry, as a max-abs over
/// jet coefficients.
double symmetry_residual(const PointTensor& t);

/// Metric + inverse + Christoffel symbols from metric component jets.
/// Rejects non-symmetric or non-positive-definite input.
MetricAtPoint make_metric(const SmallMat<Jet>& g_jets, std::vector<double> point);

}  // namespace gradsol
