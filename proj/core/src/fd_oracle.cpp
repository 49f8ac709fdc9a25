#include "gradsol/fd_oracle.hpp"

#include <stdexcept>

#include "gradsol/linalg.hpp"

namespace gradsol {

namespace {

using Q = __float128;

std::size_t i2(int n, int a, int b) { return static_cast<std::size_t>(a) * n + b; }
std::size_t i3(int n, int a, int b, int c) {
  return (static_cast<std::size_t>(a) * n + b) * n + c;
}
std::size_t i4(int n, int a, int b, int c, int d) {
  return ((static_cast<std::size_t>(a) * n + b) * n + c) * n + d;
}

/// Stage-1 data at a point: metric, first and second coordinate partials,
/// built from 4th-order central stencils of the chart metric.
struct Stage1 {
  std::vector<Q> g;    // n^2
  std::vector<Q> dg;   // n^3 at (a,i,j) = d_a g_ij
  std::vector<Q> d2g;  // n^4 at (a,b,i,j)
};

/// Stage-2 fields at a point: curvature algebra on Stage-1 data.
struct Stage2 {
  std::vector<Q> Rc;  // n^2
  Q R = 0;
  std::vector<Q> W;   // n^4
  std::vector<Q> Rm;  // n^4 lowered
  // center-only extras
  std::vector<Q> gamma;   // n^3 (k,i,j)
  std::vector<Q> dgamma;  // n^4 (a,k,i,j)
  std::vector<Q> ginv;    // n^2
};

class FdPipeline {
public:
  FdPipeline(const Chart& chart, std::span<const double> x, double h)
      : chart_(chart), n_(chart.dim), h_(h) {
    x_.resize(n_);
    for (int i = 0; i < n_; ++i) x_[i] = (Q)x[i];
  }

  FdCurvature run();

private:
  void metric_at(const Q* y, Q* g) const {
    chart_.metric_q(std::span<const Q>(y, n_), g);
  }

  Stage1 stage1(const Q* y) const;
  Stage2 stage2(const Q* y, bool center_extras) const;

  const Chart& chart_;
  int n_;
  Q h_;
  std::vector<Q> x_;
};

Stage1 FdPipeline::stage1(const Q* y) const {
  const int n = n_;
  const std::size_t nn = static_cast<std::size_t>(n) * n;
  Stage1 s;
  s.g.resize(nn);
  s.dg.assign(nn * n, 0);
  s.d2g.assign(nn * n * n, 0);
  metric_at(y, s.g.data());

  std::vector<Q> yp(y, y + n);
  std::vector<Q> e[4];  // evaluations at -2h,-h,+h,+2h along one axis
  for (auto& v : e) v.resize(nn);

  auto eval_shift = [&](int axis, Q offset, Q* out) {
    yp.assign(y, y + n);
    yp[axis] += offset;
    metric_at(yp.data(), out);
  };

  // First derivatives and diagonal second derivatives.
  for (int a = 0; a < n; ++a) {
    eval_shift(a, -2 * h_, e[0].data());
    eval_shift(a, -h_, e[1].data());
    eval_shift(a, h_, e[2].data());
    eval_shift(a, 2 * h_, e[3].data());
    for (std::size_t c = 0; c < nn; ++c) {
      s.dg[a * nn + c] = (e[0][c] - 8 * e[1][c] + 8 * e[2][c] - e[3][c]) / (12 * h_);
      s.d2g[(static_cast<std::size_t>(a) * n + a) * nn + c] =
          (-e[0][c] + 16 * e[1][c] - 30 * s.g[c] + 16 * e[2][c] - e[3][c]) / (12 * h_ * h_);
    }
  }

  // Mixed second derivatives: outer 4th-order stencil of inner first
  // derivatives.
  std::vector<Q> inner(nn), outer[4];
  for (auto& v : outer) v.resize(nn);
  std::vector<Q> f0(nn), f1(nn), f2(nn), f3(nn);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const Q offs[4] = {-2 * h_, -h_, h_, 2 * h_};
      for (int oa = 0; oa < 4; ++oa) {
        // first derivative along b at y + offs[oa] e_a
        yp.assign(y, y + n);
        yp[a] += offs[oa];
        std::vector<Q> base = yp;
        auto eval_b = [&](Q off, Q* out) {
          yp = base;
          yp[b] += off;
          metric_at(yp.data(), out);
        };
        eval_b(-2 * h_, f0.data());
        eval_b(-h_, f1.data());
        eval_b(h_, f2.data());
        eval_b(2 * h_, f3.data());
        for (std::size_t c = 0; c < nn; ++c)
          outer[oa][c] = (f0[c] - 8 * f1[c] + 8 * f2[c] - f3[c]) / (12 * h_);
      }
      for (std::size_t c = 0; c < nn; ++c) {
        const Q v =
            (outer[0][c] - 8 * outer[1][c] + 8 * outer[2][c] - outer[3][c]) / (12 * h_);
        s.d2g[(static_cast<std::size_t>(a) * n + b) * nn + c] = v;
        s.d2g[(static_cast<std::size_t>(b) * n + a) * nn + c] = v;
      }
    }
  }
  return s;
}

Stage2 FdPipeline::stage2(const Q* y, bool center_extras) const {
  const int n = n_;
  const std::size_t nn = static_cast<std::size_t>(n) * n;
  Stage1 s1 = stage1(y);

  SmallMat<Q> gm(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) gm(i, j) = s1.g[i2(n, i, j)];
  SmallMat<Q> gi = invert(gm);

  // Gamma^k_ij and d_a Gamma^k_ij.
  std::vector<Q> gamma(nn * n, 0), dgamma(nn * nn, 0);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Q acc = 0;
        for (int l = 0; l < n; ++l)
          acc += gi(k, l) *
                 (s1.dg[i3(n, i, j, l)] + s1.dg[i3(n, j, i, l)] - s1.dg[i3(n, l, i, j)]);
        gamma[i3(n, k, i, j)] = acc / 2;
      }
  // d_a ginv = -ginv dg[a] ginv
  std::vector<Q> dginv(nn * n, 0);
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Q acc = 0;
        for (int p = 0; p < n; ++p)
          for (int q = 0; q < n; ++q) acc += gi(i, p) * s1.dg[i3(n, a, p, q)] * gi(q, j);
        dginv[i3(n, a, i, j)] = -acc;
      }
  for (int a = 0; a < n; ++a)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          Q acc = 0;
          for (int l = 0; l < n; ++l) {
            const Q sym = s1.dg[i3(n, i, j, l)] + s1.dg[i3(n, j, i, l)] - s1.dg[i3(n, l, i, j)];
            const Q dsym = s1.d2g[i4(n, a, i, j, l)] + s1.d2g[i4(n, a, j, i, l)] -
                           s1.d2g[i4(n, a, l, i, j)];
            acc += dginv[i3(n, a, k, l)] * sym + gi(k, l) * dsym;
          }
          dgamma[i4(n, a, k, i, j)] = acc / 2;
        }

  // Mixed Riemann R_ijk^l, then the lowered/paper tensor, Ricci, scalar, Weyl.
  std::vector<Q> rm_mixed(nn * nn, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          Q acc = dgamma[i4(n, i, l, j, k)] - dgamma[i4(n, j, l, i, k)];
          for (int p = 0; p < n; ++p)
            acc += gamma[i3(n, l, i, p)] * gamma[i3(n, p, j, k)] -
                   gamma[i3(n, l, j, p)] * gamma[i3(n, p, i, k)];
          rm_mixed[i4(n, i, j, k, l)] = acc;
        }

  Stage2 s2;
  s2.Rm.assign(nn * nn, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          Q acc = 0;
          for (int p = 0; p < n; ++p) acc += rm_mixed[i4(n, i, j, k, p)] * gm(p, l);
          s2.Rm[i4(n, i, j, k, l)] = -acc;
        }
  s2.Rc.assign(nn, 0);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      Q acc = 0;
      for (int i = 0; i < n; ++i) acc += rm_mixed[i4(n, i, j, k, i)];
      s2.Rc[i2(n, j, k)] = acc;
    }
  s2.R = 0;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) s2.R += gi(j, k) * s2.Rc[i2(n, j, k)];

  s2.W.assign(nn * nn, 0);
  const Q c1 = Q(1) / (n - 2);
  const Q c2 = s2.R / ((n - 1) * (n - 2));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const Q gik = gm(i, k), gil = gm(i, l), gjk = gm(j, k), gjl = gm(j, l);
          Q w = s2.Rm[i4(n, i, j, k, l)];
          w -= c1 * (gik * s2.Rc[i2(n, j, l)] - gil * s2.Rc[i2(n, j, k)] -
                     gjk * s2.Rc[i2(n, i, l)] + gjl * s2.Rc[i2(n, i, k)]);
          w += c2 * (gik * gjl - gil * gjk);
          s2.W[i4(n, i, j, k, l)] = w;
        }

  if (center_extras) {
    s2.gamma = std::move(gamma);
    s2.dgamma = std::move(dgamma);
    s2.ginv.resize(nn);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s2.ginv[i2(n, i, j)] = gi(i, j);
  }
  return s2;
}

FdCurvature FdPipeline::run() {
  const int n = n_;
  const std::size_t nn = static_cast<std::size_t>(n) * n;
  const std::size_t n4 = nn * nn;

  Stage2 c = stage2(x_.data(), true);

  // Field stencils of the stage-2 outputs (W, Rc, R).
  std::vector<Q> dW(n4 * n, 0), dRc(nn * n, 0), dR(n, 0);
  std::vector<Q> d2W(n4 * nn, 0), d2Rc(nn * nn, 0), d2R(nn, 0);

  std::vector<Q> yp;
  auto at_shift = [&](int axis, Q off) {
    yp.assign(x_.begin(), x_.end());
    yp[axis] += off;
    return stage2(yp.data(), false);
  };
  auto at_shift2 = [&](int a, Q offa, int b, Q offb) {
    yp.assign(x_.begin(), x_.end());
    yp[a] += offa;
    yp[b] += offb;
    return stage2(yp.data(), false);
  };

  const Q offs[4] = {-2 * h_, -h_, h_, 2 * h_};
  const Q wts1[4] = {1, -8, 8, -1};  // / 12h
  for (int a = 0; a < n; ++a) {
    Stage2 e[4];
    for (int o = 0; o < 4; ++o) e[o] = at_shift(a, offs[o]);
    for (std::size_t cidx = 0; cidx < n4; ++cidx) {
      Q acc1 = 0;
      for (int o = 0; o < 4; ++o) acc1 += wts1[o] * e[o].W[cidx];
      dW[a * n4 + cidx] = acc1 / (12 * h_);
      Q acc2 = -e[0].W[cidx] + 16 * e[1].W[cidx] - 30 * c.W[cidx] + 16 * e[2].W[cidx] -
               e[3].W[cidx];
      d2W[(static_cast<std::size_t>(a) * n + a) * n4 + cidx] = acc2 / (12 * h_ * h_);
    }
    for (std::size_t cidx = 0; cidx < nn; ++cidx) {
      Q acc1 = 0;
      for (int o = 0; o < 4; ++o) acc1 += wts1[o] * e[o].Rc[cidx];
      dRc[a * nn + cidx] = acc1 / (12 * h_);
      Q acc2 = -e[0].Rc[cidx] + 16 * e[1].Rc[cidx] - 30 * c.Rc[cidx] + 16 * e[2].Rc[cidx] -
               e[3].Rc[cidx];
      d2Rc[(static_cast<std::size_t>(a) * n + a) * nn + cidx] = acc2 / (12 * h_ * h_);
    }
    {
      Q acc1 = 0;
      for (int o = 0; o < 4; ++o) acc1 += wts1[o] * e[o].R;
      dR[a] = acc1 / (12 * h_);
      d2R[i2(n, a, a)] = (-e[0].R + 16 * e[1].R - 30 * c.R + 16 * e[2].R - e[3].R) /
                         (12 * h_ * h_);
    }
  }
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      std::vector<Q> innerW[4];
      std::vector<Q> innerRc[4];
      Q innerR[4];
      for (int oa = 0; oa < 4; ++oa) {
        innerW[oa].assign(n4, 0);
        innerRc[oa].assign(nn, 0);
        innerR[oa] = 0;
        for (int ob = 0; ob < 4; ++ob) {
          Stage2 e = at_shift2(a, offs[oa], b, offs[ob]);
          for (std::size_t cidx = 0; cidx < n4; ++cidx)
            innerW[oa][cidx] += wts1[ob] * e.W[cidx];
          for (std::size_t cidx = 0; cidx < nn; ++cidx)
            innerRc[oa][cidx] += wts1[ob] * e.Rc[cidx];
          innerR[oa] += wts1[ob] * e.R;
        }
        for (std::size_t cidx = 0; cidx < n4; ++cidx) innerW[oa][cidx] /= 12 * h_;
        for (std::size_t cidx = 0; cidx < nn; ++cidx) innerRc[oa][cidx] /= 12 * h_;
        innerR[oa] /= 12 * h_;
      }
      for (std::size_t cidx = 0; cidx < n4; ++cidx) {
        Q acc = 0;
        for (int oa = 0; oa < 4; ++oa) acc += wts1[oa] * innerW[oa][cidx];
        acc /= 12 * h_;
        d2W[(static_cast<std::size_t>(a) * n + b) * n4 + cidx] = acc;
        d2W[(static_cast<std::size_t>(b) * n + a) * n4 + cidx] = acc;
      }
      for (std::size_t cidx = 0; cidx < nn; ++cidx) {
        Q acc = 0;
        for (int oa = 0; oa < 4; ++oa) acc += wts1[oa] * innerRc[oa][cidx];
        acc /= 12 * h_;
        d2Rc[(static_cast<std::size_t>(a) * n + b) * nn + cidx] = acc;
        d2Rc[(static_cast<std::size_t>(b) * n + a) * nn + cidx] = acc;
      }
      Q acc = 0;
      for (int oa = 0; oa < 4; ++oa) acc += wts1[oa] * innerR[oa];
      acc /= 12 * h_;
      d2R[i2(n, a, b)] = acc;
      d2R[i2(n, b, a)] = acc;
    }
  }

  auto G = [&](int k, int i, int j) { return c.gamma[i3(n, k, i, j)]; };
  auto dG = [&](int a, int k, int i, int j) { return c.dgamma[i4(n, a, k, i, j)]; };
  auto GI = [&](int i, int j) { return c.ginv[i2(n, i, j)]; };

  // First covariant derivatives of W and Rc at the center.
  std::vector<Q> cdW(n4 * n, 0), cdRc(nn * n, 0);
  for (int b = 0; b < n; ++b)
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
          for (int l = 0; l < n; ++l) {
            Q acc = dW[b * n4 + i4(n, i, k, j, l)];
            for (int p = 0; p < n; ++p) {
              acc -= G(p, b, i) * c.W[i4(n, p, k, j, l)];
              acc -= G(p, b, k) * c.W[i4(n, i, p, j, l)];
              acc -= G(p, b, j) * c.W[i4(n, i, k, p, l)];
              acc -= G(p, b, l) * c.W[i4(n, i, k, j, p)];
            }
            cdW[b * n4 + i4(n, i, k, j, l)] = acc;
          }
  for (int b = 0; b < n; ++b)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        Q acc = dRc[b * nn + i2(n, j, k)];
        for (int p = 0; p < n; ++p) {
          acc -= G(p, b, j) * c.Rc[i2(n, p, k)];
          acc -= G(p, b, k) * c.Rc[i2(n, j, p)];
        }
        cdRc[b * nn + i2(n, j, k)] = acc;
      }

  // Second covariant derivative of W, assembled at the center, contracted
  // into the Bach tensor on the fly.
  FdCurvature out;
  out.dim = n;
  out.christoffel.resize(nn * n);
  for (std::size_t i = 0; i < nn * static_cast<std::size_t>(n); ++i)
    out.christoffel[i] = (double)c.gamma[i];
  out.Rm.resize(n4);
  out.W.resize(n4);
  for (std::size_t i = 0; i < n4; ++i) {
    out.Rm[i] = (double)c.Rm[i];
    out.W[i] = (double)c.W[i];
  }
  out.Rc.resize(nn);
  for (std::size_t i = 0; i < nn; ++i) out.Rc[i] = (double)c.Rc[i];
  out.R = (double)c.R;

  std::vector<Q> bach1(nn, 0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      // (grad^2 W)_{ab;ikjl}
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
          for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l) {
              Q acc = d2W[(static_cast<std::size_t>(a) * n + b) * n4 + i4(n, i, k, j, l)];
              for (int p = 0; p < n; ++p) {
                acc -= dG(a, p, b, i) * c.W[i4(n, p, k, j, l)];
                acc -= dG(a, p, b, k) * c.W[i4(n, i, p, j, l)];
                acc -= dG(a, p, b, j) * c.W[i4(n, i, k, p, l)];
                acc -= dG(a, p, b, l) * c.W[i4(n, i, k, j, p)];
                acc -= G(p, b, i) * dW[a * n4 + i4(n, p, k, j, l)];
                acc -= G(p, b, k) * dW[a * n4 + i4(n, i, p, j, l)];
                acc -= G(p, b, j) * dW[a * n4 + i4(n, i, k, p, l)];
                acc -= G(p, b, l) * dW[a * n4 + i4(n, i, k, j, p)];
                acc -= G(p, a, b) * cdW[p * n4 + i4(n, i, k, j, l)];
                acc -= G(p, a, i) * cdW[b * n4 + i4(n, p, k, j, l)];
                acc -= G(p, a, k) * cdW[b * n4 + i4(n, i, p, j, l)];
                acc -= G(p, a, j) * cdW[b * n4 + i4(n, i, k, p, l)];
                acc -= G(p, a, l) * cdW[b * n4 + i4(n, i, k, j, p)];
              }
              // grad^k grad^l W_ikjl: pair slot k with derivative a, l with b.
              bach1[i2(n, i, j)] += GI(k, a) * GI(l, b) * acc;
            }
    }

  // ... plus the algebraic term and the quadratic tensors.
  std::vector<Q> rc_uu(nn, 0);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      Q acc = 0;
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) acc += GI(k, p) * GI(l, q) * c.Rc[i2(n, p, q)];
      rc_uu[i2(n, k, l)] = acc;
    }
  std::vector<Q> bach2(nn, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Q acc = 0;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) acc += rc_uu[i2(n, k, l)] * c.W[i4(n, i, k, j, l)];
      bach2[i2(n, i, j)] = acc;
    }
  out.bach.resize(nn);
  for (std::size_t i = 0; i < nn; ++i)
    out.bach[i] = (double)(bach1[i] / (n - 3) + bach2[i] / (n - 2));

  // Delta Rc, Hess R, Delta R.
  std::vector<Q> lap_rc(nn, 0);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      Q acc = 0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          Q h2 = d2Rc[(static_cast<std::size_t>(a) * n + b) * nn + i2(n, j, k)];
          for (int p = 0; p < n; ++p) {
            h2 -= dG(a, p, b, j) * c.Rc[i2(n, p, k)];
            h2 -= dG(a, p, b, k) * c.Rc[i2(n, j, p)];
            h2 -= G(p, b, j) * dRc[a * nn + i2(n, p, k)];
            h2 -= G(p, b, k) * dRc[a * nn + i2(n, j, p)];
            h2 -= G(p, a, b) * cdRc[p * nn + i2(n, j, k)];
            h2 -= G(p, a, j) * cdRc[b * nn + i2(n, p, k)];
            h2 -= G(p, a, k) * cdRc[b * nn + i2(n, j, p)];
          }
          acc += GI(a, b) * h2;
        }
      lap_rc[i2(n, j, k)] = acc;
    }
  std::vector<Q> hessR(nn, 0);
  Q lapR = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Q acc = d2R[i2(n, a, b)];
      for (int p = 0; p < n; ++p) acc -= G(p, a, b) * dR[p];
      hessR[i2(n, a, b)] = acc;
      lapR += GI(a, b) * acc;
    }

  Q rc2 = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          rc2 += GI(i, k) * GI(j, l) * c.Rc[i2(n, i, j)] * c.Rc[i2(n, k, l)];

  std::vector<Q> rmrc(nn, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Q acc = 0;
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) acc += c.Rm[i4(n, i, p, j, q)] * rc_uu[i2(n, p, q)];
      rmrc[i2(n, i, j)] = acc;
    }

  out.U.resize(nn);
  out.V.resize(nn);
  const Q nm3 = n - 3;
  std::vector<Q> g0(nn);
  metric_at(x_.data(), g0.data());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const std::size_t ij = i2(n, i, j);
      const Q u = nm3 * (2 * rmrc[ij] + lap_rc[ij] - rc2 * g0[ij] / 2 - c.R * c.Rc[ij] -
                         lapR * g0[ij] / 2 + c.R * c.R * g0[ij] / 4);
      const Q v = -hessR[ij] + lapR * g0[ij] + c.R * c.Rc[ij] - c.R * c.R * g0[ij] / 4;
      out.U[ij] = (double)u;
      out.V[ij] = (double)v;
    }
  return out;
}

}  // namespace

FdCurvature fd_curvature(const Chart& chart, std::span<const double> x, double h) {
  if (chart.dim <= 3) throw std::invalid_argument("fd_curvature expects dimension > 3");
  FdPipeline p(chart, x, h);
  return p.run();
}

double fd_partial(const std::function<__float128(std::span<const __float128>)>& F,
                  std::span<const double> x, std::span<const int> alpha, double h) {
  const int n = static_cast<int>(x.size());
  std::vector<Q> y(n);
  for (int i = 0; i < n; ++i) y[i] = (Q)x[i];

  // Recursive nested 4th-order central first differences.
  std::function<Q(std::vector<Q>&, std::vector<int>&)> rec = [&](std::vector<Q>& pt,
                                                                 std::vector<int>& a) -> Q {
    int axis = -1;
    for (int i = 0; i < n; ++i)
      if (a[i] > 0) {
        axis = i;
        break;
      }
    if (axis < 0) return F(std::span<const Q>(pt.data(), pt.size()));
    a[axis] -= 1;
    const Q offs[4] = {-2 * (Q)h, -(Q)h, (Q)h, 2 * (Q)h};
    const Q wts[4] = {1, -8, 8, -1};
    Q acc = 0;
    for (int o = 0; o < 4; ++o) {
      pt[axis] += offs[o];
      acc += wts[o] * rec(pt, a);
      pt[axis] -= offs[o];
    }
    a[axis] += 1;
    return acc / (12 * (Q)h);
  };
  std::vector<int> a(alpha.begin(), alpha.end());
  return (double)rec(y, a);
}

}  // namespace gradsol
