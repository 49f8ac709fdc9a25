#include "gradsol/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include "gradsol/gauss_legendre.hpp"
#include "gradsol/jet_arena.hpp"
#include "gradsol/parallel.hpp"
#include "gradsol/summation.hpp"

namespace gradsol {

namespace {

constexpr double kRegularEps = 1e-12;

/// Unbounded directions get more nodes as the region grows, so quadrature
/// density stays roughly the canonical q-per-8-units.
int scaled_nodes(int q, double length) {
  const int factor = std::max(1, static_cast<int>(std::ceil(length / 8.0)));
  return q * factor;
}

struct AxisGrid {
  std::vector<double> x;
  std::vector<double> w;  // absolute weights; the node weight is the product
};

AxisGrid axis_grid(AxisWeight rule, int n, double lo, double hi) {
  AxisGrid g;
  g.x.resize(n);
  g.w.resize(n);
  switch (rule) {
    case AxisWeight::Plain: {
      const GaussLegendreRule& r = gauss_legendre(n);
      const double c = 0.5 * (lo + hi);
      const double sscale = 0.5 * (hi - lo);
      for (int k = 0; k < n; ++k) {
        g.x[k] = c + sscale * r.nodes[k];
        g.w[k] = sscale * r.weights[k];
      }
      return g;
    }
    case AxisWeight::SinOdd: {
      // int_0^pi f sin^p dx (p odd) = int_-1^1 f(arccos u)(1-u^2)^{(p-1)/2} du;
      // Gauss-Legendre in u, weights divided by the sine to leave the chart's
      // own sin^p factor in place.
      const GaussLegendreRule& r = gauss_legendre(n);
      for (int k = 0; k < n; ++k) {
        const double u = r.nodes[n - 1 - k];  // ascending angle
        g.x[k] = std::acos(u);
        g.w[k] = r.weights[n - 1 - k] / std::sqrt(1.0 - u * u);
      }
      return g;
    }
    case AxisWeight::SinEven: {
      // Chebyshev-second (Gauss w.r.t. sin^2): equally spaced interior nodes.
      for (int k = 0; k < n; ++k) {
        g.x[k] = M_PI * (k + 1) / (n + 1);
        g.w[k] = M_PI / (n + 1);
      }
      return g;
    }
  }
  throw std::logic_error("unreachable");
}

std::vector<AxisGrid> patch_grids(std::span<const AxisWeight> rules,
                                  const std::vector<double>& lo, const std::vector<double>& hi,
                                  const std::vector<int>& nodes) {
  std::vector<AxisGrid> out(rules.size());
  for (std::size_t i = 0; i < rules.size(); ++i) {
    if (rules[i] != AxisWeight::Plain &&
        (std::fabs(lo[i]) > 1e-14 || std::fabs(hi[i] - M_PI) > 1e-14))
      throw std::logic_error("polar axis rules require the range [0, pi]");
    out[i] = axis_grid(rules[i], nodes[i], lo[i], hi[i]);
  }
  return out;
}

}  // namespace

QuadratureRegion::QuadratureRegion(const GeometrySpec& geom, std::optional<double> r, int q)
    : geom_(&geom), r_(r), q_(q) {
  if (q < 2) throw std::invalid_argument("quadrature needs q >= 2");
  if (r && !geom.has_potential)
    throw std::invalid_argument("sublevel region needs a geometry with potential f");

  switch (geom.kind) {
    case CatalogKind::Gaussian: {
      if (!r) throw std::invalid_argument("GAUSS region needs a level r");
      if (*r < 0.0) throw std::domain_error("empty region: r below min f");
      if (*r < kRegularEps) throw std::domain_error("level r is not a regular value");
      const double rho_b = 2.0 * std::sqrt(*r);
      VolumePatch v;
      v.chart = gauss_polar_chart();
      v.lo = v.chart.lo;
      v.hi = v.chart.hi;
      v.hi[0] = rho_b;
      v.nodes = {scaled_nodes(q, rho_b), q, q, q};
      v.rules = {AxisWeight::Plain, AxisWeight::SinEven, AxisWeight::SinOdd,
                 AxisWeight::Plain};
      vol_.push_back(std::move(v));
      BoundaryPatch b;
      b.chart = s3_round_chart(rho_b);
      b.lo = b.chart.lo;
      b.hi = b.chart.hi;
      b.rules = {AxisWeight::SinEven, AxisWeight::SinOdd, AxisWeight::Plain};
      b.to_ambient = [rho_b](std::span<const double> a) {
        return std::vector<double>{rho_b, a[0], a[1], a[2]};
      };
      bdry_.push_back(std::move(b));
      break;
    }
    case CatalogKind::Cylinder: {
      if (!r) throw std::invalid_argument("CYL region needs a level r");
      if (*r < 1.5) throw std::domain_error("empty region: r below min f");
      if (*r - 1.5 < kRegularEps) throw std::domain_error("level r is not a regular value");
      const double T = 2.0 * std::sqrt(*r - 1.5);
      VolumePatch v;
      v.chart = cylinder_chart();
      v.lo = v.chart.lo;
      v.hi = v.chart.hi;
      v.lo[3] = -T;
      v.hi[3] = T;
      v.nodes = {q, q, q, scaled_nodes(q, 2.0 * T)};
      v.rules = {AxisWeight::SinEven, AxisWeight::SinOdd, AxisWeight::Plain,
                 AxisWeight::Plain};
      vol_.push_back(std::move(v));
      for (const double side : {-1.0, 1.0}) {
        BoundaryPatch b;
        b.chart = s3_round_chart(2.0);
        b.lo = b.chart.lo;
        b.hi = b.chart.hi;
        b.rules = {AxisWeight::SinEven, AxisWeight::SinOdd, AxisWeight::Plain};
        b.to_ambient = [T, side](std::span<const double> a) {
          return std::vector<double>{a[0], a[1], a[2], side * T};
        };
        bdry_.push_back(std::move(b));
      }
      break;
    }
    case CatalogKind::Sphere4: {
      if (r && *r < 2.0) throw std::domain_error("empty region: r below min f");
      VolumePatch v;
      v.chart = sphere4_chart();
      v.lo = v.chart.lo;
      v.hi = v.chart.hi;
      v.nodes.assign(4, q);
      v.rules = {AxisWeight::SinOdd, AxisWeight::SinEven, AxisWeight::SinOdd,
                 AxisWeight::Plain};
      vol_.push_back(std::move(v));
      break;
    }
    case CatalogKind::FlatE4:
    case CatalogKind::Random: {
      VolumePatch v;
      v.chart = geom.primary();
      v.lo = v.chart.lo;
      v.hi = v.chart.hi;
      v.nodes.assign(geom.dim, q);
      v.rules.assign(geom.dim, AxisWeight::Plain);
      v.indicator = r.has_value();
      exact_bounds_ = !r.has_value();
      if (r) {
        // Regularity probe near the level set.
        std::mt19937_64 rng(1234577);
        bool nonempty = false;
        for (int k = 0; k < 512; ++k) {
          std::vector<double> x(geom.dim);
          for (int i = 0; i < geom.dim; ++i) x[i] = uniform_in(rng, v.lo[i], v.hi[i]);
          const double f = v.chart.potential_d(x);
          if (f <= *r) nonempty = true;
          if (std::fabs(f - *r) < 0.05) {
            Jet fj = v.chart.potential_jet(x, 1);
            double grad2 = 0.0;
            for (int i = 0; i < geom.dim; ++i) {
              const double d = fj.axis_derivative(i).value();
              grad2 += d * d;  // coordinate proxy; fine for a 1e-6 gate
            }
            if (std::sqrt(grad2) < 1e-6)
              throw std::domain_error("level r is not a regular value");
          }
        }
        if (!nonempty) throw std::domain_error("empty region: r below min f");
      }
      vol_.push_back(std::move(v));
      break;
    }
  }
}

QuadratureRegion QuadratureRegion::shell(const GeometrySpec& geom, double r_lo, double r_hi,
                                         int q) {
  if (!(r_hi > r_lo)) throw std::invalid_argument("shell needs r_hi > r_lo");
  QuadratureRegion reg;
  reg.geom_ = &geom;
  reg.r_ = r_hi;
  reg.q_ = q;
  switch (geom.kind) {
    case CatalogKind::Gaussian: {
      VolumePatch v;
      v.chart = gauss_polar_chart();
      v.lo = v.chart.lo;
      v.hi = v.chart.hi;
      v.lo[0] = 2.0 * std::sqrt(std::max(0.0, r_lo));
      v.hi[0] = 2.0 * std::sqrt(r_hi);
      v.nodes.assign(4, q);
      v.rules = {AxisWeight::Plain, AxisWeight::SinEven, AxisWeight::SinOdd,
                 AxisWeight::Plain};
      reg.vol_.push_back(std::move(v));
      return reg;
    }
    case CatalogKind::Cylinder: {
      if (r_lo < 1.5) throw std::domain_error("shell below min f on the cylinder");
      const double t0 = 2.0 * std::sqrt(r_lo - 1.5);
      const double t1 = 2.0 * std::sqrt(r_hi - 1.5);
      for (const double side : {-1.0, 1.0}) {
        VolumePatch v;
        v.chart = cylinder_chart();
        v.lo = v.chart.lo;
        v.hi = v.chart.hi;
        v.lo[3] = side < 0 ? -t1 : t0;
        v.hi[3] = side < 0 ? -t0 : t1;
        v.nodes.assign(4, q);
        v.rules = {AxisWeight::SinEven, AxisWeight::SinOdd, AxisWeight::Plain,
                   AxisWeight::Plain};
        reg.vol_.push_back(std::move(v));
      }
      return reg;
    }
    default:
      throw std::invalid_argument("shells are defined for the GAUSS and CYL geometries");
  }
}

long QuadratureRegion::volume_node_count() const {
  long total = 0;
  for (const auto& v : vol_) {
    long c = 1;
    for (int nodes : v.nodes) c *= nodes;
    total += c;
  }
  return total;
}

namespace {

/// One resolution pass over one volume patch; returns per-integrand sums.
std::vector<double> sweep_volume(const QuadratureRegion& region,
                                 const QuadratureRegion::VolumePatch& patch,
                                 std::span<const Integrand> integrands,
                                 const std::vector<int>& nodes, int threads) {
  const int dim = patch.chart.dim;
  const std::vector<AxisGrid> grids = patch_grids(patch.rules, patch.lo, patch.hi, nodes);
  long total = 1;
  for (int i = 0; i < dim; ++i) total *= nodes[i];

  int order = 1;
  for (const Integrand& f : integrands) order = std::max(order, f.min_order);
  const bool any_weighted = [&] {
    for (const Integrand& f : integrands)
      if (f.weighted) return true;
    return false;
  }();
  const std::optional<double> level = region.level();

  const std::size_t m = integrands.size();
  std::vector<std::vector<double>> contrib(m);
  for (auto& c : contrib) c.assign(total, 0.0);

  parallel_for_chunks(total, threads, [&](std::size_t lo, std::size_t hi) {
    std::vector<int> idx(dim);
    std::vector<double> x(dim);
    for (std::size_t node = lo; node < hi; ++node) {
      std::size_t rem = node;
      for (int i = dim - 1; i >= 0; --i) {
        idx[i] = static_cast<int>(rem % nodes[i]);
        rem /= nodes[i];
      }
      double w = 1.0;
      for (int i = 0; i < dim; ++i) {
        x[i] = grids[i].x[idx[i]];
        w *= grids[i].w[idx[i]];
      }
      if (patch.indicator && patch.chart.potential_d(x) > *level) continue;

      JetArenaScope arena;
      PointContext ctx(patch.chart, x, order);
      const double dv = ctx.sqrt_det_g();
      const double ef = (any_weighted && patch.chart.has_potential) ? ctx.weight() : 1.0;
      for (std::size_t k = 0; k < m; ++k) {
        const double val = integrands[k].fn(ctx);
        contrib[k][node] = w * dv * val * (integrands[k].weighted ? ef : 1.0);
      }
    }
  });

  std::vector<double> sums(m);
  for (std::size_t k = 0; k < m; ++k) sums[k] = pairwise_sum(contrib[k]);
  return sums;
}

std::vector<double> sweep_boundary(const QuadratureRegion::BoundaryPatch& patch,
                                   const Chart& ambient, std::span<const Integrand> integrands,
                                   int q, int threads) {
  const int bdim = patch.chart.dim;
  const std::vector<int> nodes(bdim, q);
  const std::vector<AxisGrid> grids = patch_grids(patch.rules, patch.lo, patch.hi, nodes);
  long total = 1;
  for (int i = 0; i < bdim; ++i) total *= q;

  int order = 1;
  for (const Integrand& f : integrands) order = std::max(order, f.min_order);

  const std::size_t m = integrands.size();
  std::vector<std::vector<double>> contrib(m);
  for (auto& c : contrib) c.assign(total, 0.0);

  parallel_for_chunks(total, threads, [&](std::size_t lo, std::size_t hi) {
    std::vector<int> idx(bdim);
    std::vector<double> a(bdim);
    for (std::size_t node = lo; node < hi; ++node) {
      std::size_t rem = node;
      for (int i = bdim - 1; i >= 0; --i) {
        idx[i] = static_cast<int>(rem % q);
        rem /= q;
      }
      double w = 1.0;
      for (int i = 0; i < bdim; ++i) {
        a[i] = grids[i].x[idx[i]];
        w *= grids[i].w[idx[i]];
      }

      // Induced area element from the boundary chart's own metric.
      JetArenaScope arena;
      SmallMat<double> gb = patch.chart.metric_values(a);
      const double ds = std::sqrt(determinant(gb));

      PointContext ctx(ambient, patch.to_ambient(a), order);
      for (std::size_t k = 0; k < m; ++k) {
        const double val = integrands[k].fn(ctx);
        const double ef = integrands[k].weighted ? ctx.weight() : 1.0;
        contrib[k][node] = w * ds * val * ef;
      }
    }
  });

  std::vector<double> sums(m);
  for (std::size_t k = 0; k < m; ++k) sums[k] = pairwise_sum(contrib[k]);
  return sums;
}

std::string measure_name(bool weighted, bool boundary) {
  if (boundary) return weighted ? "e^-f dS" : "dS";
  return weighted ? "e^-f dV" : "dV";
}

std::vector<int> halved(const std::vector<int>& nodes) {
  std::vector<int> h(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) h[i] = std::max(2, nodes[i] / 2);
  return h;
}

}  // namespace

std::vector<IntegralResult> integrate_region_many(const QuadratureRegion& region,
                                                  std::span<const Integrand> integrands,
                                                  int threads) {
  const std::size_t m = integrands.size();
  std::vector<double> full(m, 0.0), half(m, 0.0);
  for (const auto& patch : region.volume_patches()) {
    std::vector<double> s1 = sweep_volume(region, patch, integrands, patch.nodes, threads);
    std::vector<double> s2 =
        sweep_volume(region, patch, integrands, halved(patch.nodes), threads);
    for (std::size_t k = 0; k < m; ++k) {
      full[k] += s1[k];
      half[k] += s2[k];
    }
  }
  std::vector<IntegralResult> out(m);
  for (std::size_t k = 0; k < m; ++k) {
    out[k].value = full[k];
    out[k].refinement = std::fabs(full[k] - half[k]);
    out[k].q = region.q();
    out[k].measure = measure_name(integrands[k].weighted, false);
  }
  return out;
}

IntegralResult integrate_region(const QuadratureRegion& region, const Integrand& integrand,
                                int threads) {
  return integrate_region_many(region, std::span<const Integrand>(&integrand, 1), threads)[0];
}

std::vector<IntegralResult> integrate_boundary_many(const QuadratureRegion& region,
                                                    std::span<const Integrand> integrands,
                                                    int threads) {
  const std::size_t m = integrands.size();
  std::vector<IntegralResult> out(m);
  for (std::size_t k = 0; k < m; ++k) {
    out[k].q = region.q();
    out[k].measure = measure_name(integrands[k].weighted, true);
  }
  if (region.closed()) return out;  // empty boundary: exact zero
  if (region.boundary_patches().empty())
    throw std::logic_error("boundary parameterization unavailable for this geometry");

  const Chart& ambient = region.volume_patches().front().chart;
  std::vector<double> full(m, 0.0), half(m, 0.0);
  const int q = region.q();
  const int q2 = std::max(2, q / 2);
  for (const auto& patch : region.boundary_patches()) {
    std::vector<double> s1 = sweep_boundary(patch, ambient, integrands, q, threads);
    std::vector<double> s2 = sweep_boundary(patch, ambient, integrands, q2, threads);
    for (std::size_t k = 0; k < m; ++k) {
      full[k] += s1[k];
      half[k] += s2[k];
    }
  }
  for (std::size_t k = 0; k < m; ++k) {
    out[k].value = full[k];
    out[k].refinement = std::fabs(full[k] - half[k]);
  }
  return out;
}

IntegralResult integrate_boundary(const QuadratureRegion& region, const Integrand& integrand,
                                  int threads) {
  return integrate_boundary_many(region, std::span<const Integrand>(&integrand, 1), threads)[0];
}

namespace {

/// Per-node work shared by all Stokes fields: jets of the coordinates and of
/// sqrt(det g) at order 1, so that div X = (d_i(sqrt(g) X^i)) / sqrt(g).
struct StokesNode {
  std::vector<Jet> xj;
  Jet sqrtg;
  int dim = 0;

  StokesNode(const Chart& chart, std::span<const double> x) : dim(chart.dim) {
    xj.resize(dim);
    for (int i = 0; i < dim; ++i) xj[i] = Jet::variable(i, x[i], dim, 1);
    SmallMat<Jet> g(dim);
    std::vector<Jet> buf(static_cast<std::size_t>(dim) * dim);
    chart.metric_j(std::span<const Jet>(xj.data(), xj.size()), buf.data());
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) g(i, j) = buf[static_cast<std::size_t>(i) * dim + j];
    sqrtg = sqrt(determinant(g));
  }

  double div(const VectorFieldFn& field) const {
    std::vector<Jet> X(dim);
    field(std::span<const Jet>(xj.data(), xj.size()), X.data());
    double acc = 0.0;
    for (int i = 0; i < dim; ++i) {
      Jet si = sqrtg * X[i];
      acc += si.coeff(1 + i);  // value of d_i(sqrt(g) X^i)
    }
    return acc / sqrtg.value();
  }
};

}  // namespace

std::vector<StokesResult> stokes_residual_many(const QuadratureRegion& region,
                                               std::span<const VectorFieldFn> fields,
                                               int threads) {
  const std::size_t m = fields.size();
  std::vector<StokesResult> out(m);
  for (auto& r : out) r.q = region.q();

  // Volume side: div X and |div X| for every field in one sweep, at full and
  // half resolution (the StokesNode jets are shared per node).
  std::vector<double> vol(m, 0.0), vol_abs(m, 0.0);
  for (const auto& patch : region.volume_patches()) {
    const std::vector<int>& nodes = patch.nodes;
    const int dim = patch.chart.dim;
    const std::vector<AxisGrid> grids = patch_grids(patch.rules, patch.lo, patch.hi, nodes);
    long total = 1;
    for (int i = 0; i < dim; ++i) total *= nodes[i];

    std::vector<std::vector<double>> contrib(m), contrib_abs(m);
    for (auto& c : contrib) c.assign(total, 0.0);
    for (auto& c : contrib_abs) c.assign(total, 0.0);

    parallel_for_chunks(total, threads, [&](std::size_t lo, std::size_t hi) {
      std::vector<int> idx(dim);
      std::vector<double> x(dim);
      for (std::size_t node = lo; node < hi; ++node) {
        std::size_t rem = node;
        for (int i = dim - 1; i >= 0; --i) {
          idx[i] = static_cast<int>(rem % nodes[i]);
          rem /= nodes[i];
        }
        double w = 1.0;
        for (int i = 0; i < dim; ++i) {
          x[i] = grids[i].x[idx[i]];
          w *= grids[i].w[idx[i]];
        }
        JetArenaScope arena;
        StokesNode sn(patch.chart, x);
        const double dv = sn.sqrtg.value();
        for (std::size_t k = 0; k < m; ++k) {
          const double d = sn.div(fields[k]);
          contrib[k][node] = w * dv * d;
          contrib_abs[k][node] = w * dv * std::fabs(d);
        }
      }
    });
    for (std::size_t k = 0; k < m; ++k) {
      vol[k] += pairwise_sum(contrib[k]);
      vol_abs[k] += pairwise_sum(contrib_abs[k]);
    }
  }

  // Boundary side: <X, nu> with nu = grad f / |grad f|; note that
  // X^i g_ij (grad f)^j = X^i d_i f.
  std::vector<Integrand> flux(m);
  for (std::size_t k = 0; k < m; ++k) {
    const VectorFieldFn& field = fields[k];
    flux[k] = Integrand{"<X, nu>", 1, false, [&field](PointContext& ctx) {
                          const int n = ctx.dim();
                          std::vector<Jet> xj(n);
                          for (int i = 0; i < n; ++i)
                            xj[i] = Jet::variable(i, ctx.x()[i], n, 1);
                          std::vector<Jet> X(n);
                          field(std::span<const Jet>(xj.data(), xj.size()), X.data());
                          Jet fj = ctx.chart().potential_jet(ctx.x(), 1);
                          std::vector<double> df(n);
                          for (int a = 0; a < n; ++a) df[a] = fj.coeff(1 + a);
                          SmallMat<double> gi = invert(ctx.chart().metric_values(ctx.x()));
                          double norm2 = 0.0;
                          for (int a = 0; a < n; ++a)
                            for (int b = 0; b < n; ++b) norm2 += df[a] * gi(a, b) * df[b];
                          if (norm2 < 1e-28) return 0.0;
                          double acc = 0.0;
                          for (int i = 0; i < n; ++i) acc += X[i].value() * df[i];
                          return acc / std::sqrt(norm2);
                        }};
  }
  auto flux_res = integrate_boundary_many(region, flux, threads);

  for (std::size_t k = 0; k < m; ++k) {
    out[k].volume_integral = vol[k];
    out[k].boundary_flux = flux_res[k].value;
    out[k].residual = std::fabs(vol[k] - flux_res[k].value);
    out[k].magnitude = std::max(
        {std::fabs(vol[k]), std::fabs(flux_res[k].value), vol_abs[k], 1e-30});
  }
  return out;
}

StokesResult stokes_residual(const QuadratureRegion& region, const VectorFieldFn& field,
                             int threads) {
  return stokes_residual_many(region, std::span<const VectorFieldFn>(&field, 1), threads)[0];
}

}  // namespace gradsol
