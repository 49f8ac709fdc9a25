#include "gradsol/tensor.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace gradsol {

namespace {

std::size_t ipow(int base, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

struct IndexIter {
  int rank;
  int dim;
  std::array<int, 8> idx{};
  bool first = true;

  explicit IndexIter(int r, int d) : rank(r), dim(d) {}
  bool next() {
    if (first) {
      first = false;
      return true;
    }
    for (int s = rank - 1; s >= 0; --s) {
      if (++idx[s] < dim) return true;
      idx[s] = 0;
    }
    return false;
  }
  std::span<const int> span() const { return {idx.data(), static_cast<std::size_t>(rank)}; }
};

}  // namespace

PointTensor::PointTensor(int dim, std::vector<Variance> variance, int jet_order,
                         std::vector<double> point)
    : dim_(dim), var_(std::move(variance)), point_(std::move(point)) {
  comp_.assign(ipow(dim, static_cast<int>(var_.size())),
               Jet::constant(dim, jet_order, 0.0));
}

PointTensor PointTensor::scalar(Jet j, std::vector<double> point) {
  PointTensor t;
  t.dim_ = j.dim();
  t.comp_.push_back(std::move(j));
  t.point_ = std::move(point);
  return t;
}

std::size_t PointTensor::flatten(std::span<const int> idx) const {
  std::size_t f = 0;
  for (std::size_t s = 0; s < idx.size(); ++s) f = f * dim_ + idx[s];
  return f;
}

double PointTensor::max_abs_value() const {
  double m = 0.0;
  for (const Jet& j : comp_) m = std::max(m, std::fabs(j.value()));
  return m;
}

double PointTensor::max_abs_coeff() const {
  double m = 0.0;
  for (const Jet& j : comp_) m = std::max(m, j.max_abs());
  return m;
}

PointTensor& PointTensor::operator+=(const PointTensor& o) {
  if (dim_ != o.dim_ || var_ != o.var_) throw std::invalid_argument("tensor shape mismatch");
  for (std::size_t i = 0; i < comp_.size(); ++i) comp_[i] += o.comp_[i];
  return *this;
}

PointTensor& PointTensor::operator-=(const PointTensor& o) {
  if (dim_ != o.dim_ || var_ != o.var_) throw std::invalid_argument("tensor shape mismatch");
  for (std::size_t i = 0; i < comp_.size(); ++i) comp_[i] -= o.comp_[i];
  return *this;
}

PointTensor& PointTensor::operator*=(double s) {
  for (Jet& j : comp_) j *= s;
  return *this;
}

PointTensor truncate_tensor(const PointTensor& t, int order) {
  if (order == t.order()) return t;
  PointTensor r(t.dim(), {t.variance().begin(), t.variance().end()}, order,
                {t.point().begin(), t.point().end()});
  r.set_symmetry(t.symmetry());
  for (std::size_t i = 0; i < t.ncomp(); ++i) r[i] = t[i].truncated(order);
  return r;
}

PointTensor contract(const PointTensor& t, int slot_a, int slot_b) {
  const int r = t.rank();
  if (slot_a == slot_b || slot_a < 0 || slot_b < 0 || slot_a >= r || slot_b >= r)
    throw std::invalid_argument("contraction slots out of range");
  if (t.variance()[slot_a] == t.variance()[slot_b])
    throw std::invalid_argument("contraction requires slots of opposite variance");
  if (slot_a > slot_b) std::swap(slot_a, slot_b);

  const int n = t.dim();
  std::vector<Variance> out_var;
  for (int s = 0; s < r; ++s)
    if (s != slot_a && s != slot_b) out_var.push_back(t.variance()[s]);
  PointTensor out(n, out_var, t.order(), {t.point().begin(), t.point().end()});

  std::array<int, 8> full{};
  IndexIter it(r - 2, n);
  std::size_t flat_out = 0;
  while (it.next()) {
    int k = 0;
    for (int s = 0; s < r; ++s) {
      if (s == slot_a || s == slot_b) continue;
      full[s] = it.idx[k++];
    }
    Jet& dst = out[flat_out++];
    for (int p = 0; p < n; ++p) {
      full[slot_a] = p;
      full[slot_b] = p;
      dst += t.at(std::span<const int>(full.data(), r));
    }
  }
  return out;
}

PointTensor contract_with(const PointTensor& a, int slot_a, const PointTensor& b, int slot_b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("tensor dimension mismatch");
  if (a.order() != b.order()) throw std::invalid_argument("tensor jet order mismatch");
  if (a.variance()[slot_a] == b.variance()[slot_b])
    throw std::invalid_argument("contraction requires slots of opposite variance");
  const int n = a.dim();
  const int ra = a.rank(), rb = b.rank();

  std::vector<Variance> out_var;
  for (int s = 0; s < ra; ++s)
    if (s != slot_a) out_var.push_back(a.variance()[s]);
  for (int s = 0; s < rb; ++s)
    if (s != slot_b) out_var.push_back(b.variance()[s]);
  PointTensor out(n, out_var, a.order(), {a.point().begin(), a.point().end()});

  std::array<int, 8> ia{}, ib{};
  IndexIter it(ra + rb - 2, n);
  std::size_t flat_out = 0;
  while (it.next()) {
    int k = 0;
    for (int s = 0; s < ra; ++s)
      if (s != slot_a) ia[s] = it.idx[k++];
    for (int s = 0; s < rb; ++s)
      if (s != slot_b) ib[s] = it.idx[k++];
    Jet& dst = out[flat_out++];
    for (int p = 0; p < n; ++p) {
      ia[slot_a] = p;
      ib[slot_b] = p;
      Jet::fma_acc(dst, a.at(std::span<const int>(ia.data(), ra)),
                   b.at(std::span<const int>(ib.data(), rb)));
    }
  }
  return out;
}

PointTensor raise_lower(const PointTensor& t, int slot, const MetricAtPoint& metric) {
  if (slot < 0 || slot >= t.rank()) throw std::invalid_argument("slot out of range");
  const bool lower = t.variance()[slot] == Variance::Up;
  const PointTensor& m = lower ? metric.g : metric.g_inv;
  PointTensor mt = truncate_tensor(m, t.order());

  const int n = t.dim();
  const int r = t.rank();
  std::vector<Variance> out_var(t.variance().begin(), t.variance().end());
  out_var[slot] = lower ? Variance::Down : Variance::Up;
  PointTensor out(n, out_var, t.order(), {t.point().begin(), t.point().end()});
  out.set_symmetry(t.symmetry());

  std::array<int, 8> src{};
  IndexIter it(r, n);
  std::size_t flat_out = 0;
  while (it.next()) {
    for (int s = 0; s < r; ++s) src[s] = it.idx[s];
    Jet& dst = out[flat_out++];
    const int i = it.idx[slot];
    for (int p = 0; p < n; ++p) {
      src[slot] = p;
      Jet::fma_acc(dst, mt.at({i, p}), t.at(std::span<const int>(src.data(), r)));
    }
  }
  return out;
}

PointTensor covariant_derivative(const PointTensor& t, const MetricAtPoint& metric) {
  const int m = t.order();
  if (m < 1) throw std::domain_error("jet order exhausted: covariant derivative needs order >= 1");
  const int n = t.dim();
  const int r = t.rank();
  if (n != metric.dim) throw std::invalid_argument("tensor/metric dimension mismatch");

  std::vector<Variance> out_var;
  out_var.push_back(Variance::Down);
  out_var.insert(out_var.end(), t.variance().begin(), t.variance().end());
  PointTensor out(n, out_var, m - 1, {t.point().begin(), t.point().end()});

  if (m == 1) {
    // Output jets are plain values; run the whole kernel on doubles.
    // Partial-derivative values sit at coefficient ranks 1..n (order-1 block).
    const PointTensor& G = metric.christoffel;
    std::array<int, 8> src{};
    IndexIter it(r, n);
    while (it.next()) {
      for (int a = 0; a < n; ++a) {
        std::array<int, 9> oidx{};
        oidx[0] = a;
        for (int s = 0; s < r; ++s) oidx[s + 1] = it.idx[s];
        double acc = t.at(it.span()).coeff(1 + a);
        for (int s = 0; s < r; ++s) {
          for (int ss = 0; ss < r; ++ss) src[ss] = it.idx[ss];
          const int js = it.idx[s];
          const double sign = t.variance()[s] == Variance::Down ? -1.0 : 1.0;
          for (int p = 0; p < n; ++p) {
            src[s] = p;
            const double gamma = t.variance()[s] == Variance::Down
                                     ? G.at({p, a, js}).value()
                                     : G.at({js, a, p}).value();
            acc += sign * gamma * t.at(std::span<const int>(src.data(), r)).value();
          }
        }
        out.at(std::span<const int>(oidx.data(), r + 1)).coeff(0) = acc;
      }
    }
    return out;
  }

  const PointTensor tt = truncate_tensor(t, m - 1);
  const PointTensor G = truncate_tensor(metric.christoffel, m - 1);
  const PointTensor Gneg = G * -1.0;

  std::array<int, 8> src{};
  IndexIter it(r, n);
  while (it.next()) {
    for (int a = 0; a < n; ++a) {
      std::array<int, 9> oidx{};
      oidx[0] = a;
      for (int s = 0; s < r; ++s) oidx[s + 1] = it.idx[s];
      Jet& dst = out.at(std::span<const int>(oidx.data(), r + 1));
      dst = t.at(it.span()).axis_derivative(a);
      for (int s = 0; s < r; ++s) {
        for (int ss = 0; ss < r; ++ss) src[ss] = it.idx[ss];
        const int js = it.idx[s];
        if (t.variance()[s] == Variance::Down) {
          // - Gamma^p_{a js} T[... p ...]
          for (int p = 0; p < n; ++p) {
            src[s] = p;
            Jet::fma_acc(dst, Gneg.at({p, a, js}), tt.at(std::span<const int>(src.data(), r)));
          }
        } else {
          // + Gamma^{js}_{a p} T[... p ...]
          for (int p = 0; p < n; ++p) {
            src[s] = p;
            Jet::fma_acc(dst, G.at({js, a, p}), tt.at(std::span<const int>(src.data(), r)));
          }
        }
      }
    }
  }
  return out;
}

PointTensor covariant_divergence(const PointTensor& t, int slot, const MetricAtPoint& metric) {
  PointTensor grad = covariant_derivative(t, metric);
  if (t.variance()[slot] == Variance::Up) return contract(grad, 0, slot + 1);

  // g^{ab} (grad)_{a ... b@slot ...}, fused so no raised intermediate is
  // materialized.
  const int n = t.dim();
  const int r = t.rank();
  const PointTensor ginv = truncate_tensor(metric.g_inv, grad.order());
  std::vector<Variance> out_var;
  for (int s = 0; s < r; ++s)
    if (s != slot) out_var.push_back(t.variance()[s]);
  PointTensor out(n, out_var, grad.order(), {t.point().begin(), t.point().end()});

  std::array<int, 9> gidx{};
  IndexIter it(r - 1, n);
  std::size_t flat_out = 0;
  while (it.next()) {
    int k = 0;
    for (int s = 0; s < r; ++s)
      if (s != slot) gidx[s + 1] = it.idx[k++];
    Jet& dst = out[flat_out++];
    for (int a = 0; a < n; ++a) {
      gidx[0] = a;
      for (int b = 0; b < n; ++b) {
        gidx[slot + 1] = b;
        Jet::fma_acc(dst, ginv.at({a, b}), grad.at(std::span<const int>(gidx.data(), r + 1)));
      }
    }
  }
  return out;
}

Jet tensor_norm2_jet(const PointTensor& t, const MetricAtPoint& metric) {
  return tensor_dot_jet(t, t, metric);
}

Jet tensor_dot_jet(const PointTensor& a, const PointTensor& b, const MetricAtPoint& metric) {
  if (a.rank() != b.rank() || a.dim() != b.dim())
    throw std::invalid_argument("tensor shape mismatch");
  PointTensor flipped = b;
  for (int s = 0; s < b.rank(); ++s)
    if (flipped.variance()[s] == a.variance()[s]) flipped = raise_lower(flipped, s, metric);
  Jet acc = Jet::constant(a.dim(), a.order(), 0.0);
  for (std::size_t i = 0; i < a.ncomp(); ++i) Jet::fma_acc(acc, a[i], flipped[i]);
  return acc;
}

double tensor_norm2(const PointTensor& t, const MetricAtPoint& metric) {
  return tensor_norm2_jet(t, metric).value();
}

double tensor_norm2_value(const PointTensor& t, const MetricAtPoint& metric) {
  const int n = t.dim();
  const int r = t.rank();
  // Flip every slot through metric values, then pair componentwise.
  std::vector<double> flipped(t.ncomp());
  for (std::size_t i = 0; i < t.ncomp(); ++i) flipped[i] = t[i].value();
  std::vector<double> next(t.ncomp());
  std::array<std::size_t, 8> stride{};
  std::size_t s = 1;
  for (int k = r - 1; k >= 0; --k) {
    stride[k] = s;
    s *= n;
  }
  for (int slot = 0; slot < r; ++slot) {
    const bool lower = t.variance()[slot] == Variance::Up;
    const PointTensor& m = lower ? metric.g : metric.g_inv;
    for (std::size_t flat = 0; flat < t.ncomp(); ++flat) {
      const int i = static_cast<int>(flat / stride[slot]) % n;
      const std::size_t base = flat - i * stride[slot];
      double acc = 0.0;
      for (int p = 0; p < n; ++p)
        acc += m.at({i, p}).value() * flipped[base + p * stride[slot]];
      next[flat] = acc;
    }
    std::swap(flipped, next);
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < t.ncomp(); ++i) acc += t[i].value() * flipped[i];
  return acc;
}

PointTensor outer(const PointTensor& a, const PointTensor& b) {
  if (a.dim() != b.dim() || a.order() != b.order())
    throw std::invalid_argument("tensor shape mismatch");
  std::vector<Variance> var(a.variance().begin(), a.variance().end());
  var.insert(var.end(), b.variance().begin(), b.variance().end());
  PointTensor out(a.dim(), var, a.order(), {a.point().begin(), a.point().end()});
  for (std::size_t i = 0; i < a.ncomp(); ++i)
    for (std::size_t j = 0; j < b.ncomp(); ++j) {
      Jet::fma_acc(out[i * b.ncomp() + j], a[i], b[j]);
    }
  return out;
}

PointTensor permuted(const PointTensor& t, std::span<const int> perm) {
  const int r = t.rank();
  if (static_cast<int>(perm.size()) != r) throw std::invalid_argument("permutation size");
  std::vector<Variance> var(r);
  for (int s = 0; s < r; ++s) var[s] = t.variance()[perm[s]];
  PointTensor out(t.dim(), var, t.order(), {t.point().begin(), t.point().end()});
  std::array<int, 8> src{};
  IndexIter it(r, t.dim());
  std::size_t flat_out = 0;
  while (it.next()) {
    for (int s = 0; s < r; ++s) src[perm[s]] = it.idx[s];
    out[flat_out++] = t.at(std::span<const int>(src.data(), r));
  }
  return out;
}

PointTensor scale_by_jet(const PointTensor& t, const Jet& s) {
  PointTensor out(t.dim(), {t.variance().begin(), t.variance().end()}, t.order(),
                  {t.point().begin(), t.point().end()});
  out.set_symmetry(t.symmetry());
  for (std::size_t i = 0; i < t.ncomp(); ++i) Jet::fma_acc(out[i], t[i], s);
  return out;
}

double symmetry_residual(const PointTensor& t) {
  const int n = t.dim();
  double res = 0.0;
  auto diff = [&](std::span<const int> a, std::span<const int> b, double sign) {
    const Jet& ja = t.at(a);
    const Jet& jb = t.at(b);
    for (std::size_t c = 0; c < ja.ncoeffs(); ++c)
      res = std::max(res, std::fabs(ja.coeff(c) - sign * jb.coeff(c)));
  };
  switch (t.symmetry()) {
    case SymmetryTag::None:
      return 0.0;
    case SymmetryTag::SymmetricPair: {
      if (t.rank() != 2) throw std::logic_error("SymmetricPair expects rank 2");
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          const int a[2] = {i, j}, b[2] = {j, i};
          diff({a, 2}, {b, 2}, 1.0);
        }
      return res;
    }
    case SymmetryTag::RiemannType: {
      if (t.rank() != 4) throw std::logic_error("RiemannType expects rank 4");
      IndexIter it(4, n);
      while (it.next()) {
        const int i = it.idx[0], j = it.idx[1], k = it.idx[2], l = it.idx[3];
        const int anti_ij[4] = {j, i, k, l};
        const int anti_kl[4] = {i, j, l, k};
        const int pair[4] = {k, l, i, j};
        diff(it.span(), {anti_ij, 4}, -1.0);
        diff(it.span(), {anti_kl, 4}, -1.0);
        diff(it.span(), {pair, 4}, 1.0);
      }
      return res;
    }
  }
  return res;
}

MetricAtPoint make_metric(const SmallMat<Jet>& g_jets, std::vector<double> point) {
  const int n = g_jets.n();
  const int K = g_jets(0, 0).order();

  SmallMat<double> gv(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) gv(i, j) = g_jets(i, j).value();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::fabs(gv(i, j) - gv(j, i)) > 1e-12 * (1.0 + std::fabs(gv(i, j))))
        throw std::invalid_argument("metric components not symmetric");
  if (!is_positive_definite(gv))
    throw std::domain_error("metric not positive definite at base point");

  MetricAtPoint m;
  m.dim = n;
  m.order = K;
  m.g = PointTensor(n, {Variance::Down, Variance::Down}, K, point);
  m.g.set_symmetry(SymmetryTag::SymmetricPair);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m.g.at({i, j}) = g_jets(i, j);

  SmallMat<Jet> inv = invert(g_jets);
  m.g_inv = PointTensor(n, {Variance::Up, Variance::Up}, K, point);
  m.g_inv.set_symmetry(SymmetryTag::SymmetricPair);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m.g_inv.at({i, j}) = inv(i, j);

  if (K >= 1) {
    // Gamma^k_ij = 1/2 g^{kl} (d_i g_jl + d_j g_il - d_l g_ij)
    m.christoffel =
        PointTensor(n, {Variance::Up, Variance::Down, Variance::Down}, K - 1, point);
    std::vector<Jet> dg(static_cast<std::size_t>(n) * n * n);  // dg[a][i][j] = d_a g_ij
    for (int a = 0; a < n; ++a)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          dg[(static_cast<std::size_t>(a) * n + i) * n + j] =
              g_jets(i, j).axis_derivative(a);
    auto dgat = [&](int a, int i, int j) -> const Jet& {
      return dg[(static_cast<std::size_t>(a) * n + i) * n + j];
    };
    SmallMat<Jet> inv_t(n), inv_neg(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        inv_t(i, j) = inv(i, j).truncated(K - 1);
        inv_neg(i, j) = -inv_t(i, j);
      }
    // Symmetric in (i, j); compute the upper triangle and mirror.
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          Jet acc = Jet::constant(n, K - 1, 0.0);
          for (int l = 0; l < n; ++l) {
            Jet::fma_acc(acc, inv_t(k, l), dgat(i, j, l));
            Jet::fma_acc(acc, inv_t(k, l), dgat(j, i, l));
            Jet::fma_acc(acc, inv_neg(k, l), dgat(l, i, j));
          }
          acc *= 0.5;
          if (j != i) m.christoffel.at({k, j, i}) = acc;
          m.christoffel.at({k, i, j}) = std::move(acc);
        }
  }
  return m;
}

}  // namespace gradsol
