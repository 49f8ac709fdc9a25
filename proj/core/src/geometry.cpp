#include "gradsol/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gradsol {

namespace {

constexpr double kPi = std::numbers::pi;

struct FlatMetric {
  int n;
  template <class T>
  void operator()(std::span<const T> x, T* g) const {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g[i * n + j] = scalar_like(x[0], i == j ? 1.0 : 0.0);
  }
};

// Hyperspherical angles (chi1, chi2, chi3, phi) on the round S^4 of radius a.
struct Sphere4Metric {
  double a2;
  template <class T>
  void operator()(std::span<const T> x, T* g) const {
    const T zero = scalar_like(x[0], 0.0);
    for (int i = 0; i < 16; ++i) g[i] = zero;
    const T s1 = g_sin(x[0]);
    const T s2 = g_sin(x[1]);
    const T s3 = g_sin(x[2]);
    g[0] = scalar_like(x[0], a2);
    g[5] = a2 * s1 * s1;
    g[10] = a2 * s1 * s1 * s2 * s2;
    g[15] = a2 * s1 * s1 * s2 * s2 * s3 * s3;
  }
};

// (chi, theta, phi, t) on S^3(a) x R.
struct CylinderMetric {
  double a2;
  template <class T>
  void operator()(std::span<const T> x, T* g) const {
    const T zero = scalar_like(x[0], 0.0);
    for (int i = 0; i < 16; ++i) g[i] = zero;
    const T s1 = g_sin(x[0]);
    const T s2 = g_sin(x[1]);
    g[0] = scalar_like(x[0], a2);
    g[5] = a2 * s1 * s1;
    g[10] = a2 * s1 * s1 * s2 * s2;
    g[15] = scalar_like(x[0], 1.0);
  }
};

// (rho, chi, theta, phi): flat R^4 in hyperspherical-polar coordinates.
struct PolarFlatMetric {
  template <class T>
  void operator()(std::span<const T> x, T* g) const {
    const T zero = scalar_like(x[0], 0.0);
    for (int i = 0; i < 16; ++i) g[i] = zero;
    const T r2 = x[0] * x[0];
    const T s1 = g_sin(x[1]);
    const T s2 = g_sin(x[2]);
    g[0] = scalar_like(x[0], 1.0);
    g[5] = r2;
    g[10] = r2 * s1 * s1;
    g[15] = r2 * s1 * s1 * s2 * s2;
  }
};

struct S3RoundMetric {
  double a2;
  template <class T>
  void operator()(std::span<const T> x, T* g) const {
    const T zero = scalar_like(x[0], 0.0);
    for (int i = 0; i < 9; ++i) g[i] = zero;
    const T s1 = g_sin(x[0]);
    const T s2 = g_sin(x[1]);
    g[0] = scalar_like(x[0], a2);
    g[4] = a2 * s1 * s1;
    g[8] = a2 * s1 * s1 * s2 * s2;
  }
};

struct QuarterNorm2Potential {  // f = |x|^2 / 4 in Cartesian coordinates
  int n;
  template <class T>
  T operator()(std::span<const T> x) const {
    T acc = scalar_like(x[0], 0.0);
    for (int i = 0; i < n; ++i) acc = acc + x[i] * x[i];
    return acc * 0.25;
  }
};

struct PolynomialMetric {
  int n;
  double eps;
  std::vector<Polynomial> q;  // upper triangle, row-major packed
  template <class T>
  void operator()(std::span<const T> x, T* g) const {
    int k = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        T v = q[k++].eval(x) * eps;
        if (i == j) v = v + 1.0;
        g[i * n + j] = v;
        if (i != j) g[j * n + i] = v;
      }
  }
};

}  // namespace

Chart gauss_polar_chart() {
  Chart c;
  c.name = "gauss-polar";
  c.dim = 4;
  c.lo = {0.0, 0.0, 0.0, 0.0};
  c.hi = {1.0, kPi, kPi, 2.0 * kPi};  // rho upper bound set per region
  c.set_metric(PolarFlatMetric{});
  c.set_potential([](auto x) { return x[0] * x[0] * 0.25; });
  return c;
}

Chart sphere4_chart() {
  Chart c;
  c.name = "s4-angles";
  c.dim = 4;
  c.lo = {0.0, 0.0, 0.0, 0.0};
  c.hi = {kPi, kPi, kPi, 2.0 * kPi};
  c.set_metric(Sphere4Metric{6.0});
  c.set_potential([](auto x) { return scalar_like(x[0], 2.0); });
  return c;
}

Chart cylinder_chart() {
  Chart c;
  c.name = "cyl-angles-line";
  c.dim = 4;
  c.lo = {0.0, 0.0, 0.0, -2.0};
  c.hi = {kPi, kPi, 2.0 * kPi, 2.0};  // t range widened per region
  c.set_metric(CylinderMetric{4.0});
  c.set_potential([](auto x) { return x[3] * x[3] * 0.25 + 1.5; });
  return c;
}

Chart s3_round_chart(double radius) {
  Chart c;
  c.name = "s3-round";
  c.dim = 3;
  c.lo = {0.0, 0.0, 0.0};
  c.hi = {kPi, kPi, 2.0 * kPi};
  c.set_metric(S3RoundMetric{radius * radius});
  return c;
}

GeometrySpec catalog_get(const std::string& name) {
  GeometrySpec g;
  if (name == "E4") {
    g.name = name;
    g.kind = CatalogKind::FlatE4;
    g.dim = 4;
    Chart c;
    c.name = "cartesian";
    c.dim = 4;
    c.lo = {-2.0, -2.0, -2.0, -2.0};
    c.hi = {2.0, 2.0, 2.0, 2.0};
    c.set_metric(FlatMetric{4});
    g.charts.push_back(std::move(c));
    return g;
  }
  if (name == "GAUSS") {
    g.name = name;
    g.kind = CatalogKind::Gaussian;
    g.dim = 4;
    g.has_potential = true;
    g.f_min = 0.0;
    Chart c;
    c.name = "cartesian";
    c.dim = 4;
    c.lo = {-2.0, -2.0, -2.0, -2.0};
    c.hi = {2.0, 2.0, 2.0, 2.0};
    c.set_metric(FlatMetric{4});
    c.set_potential(QuarterNorm2Potential{4});
    g.charts.push_back(std::move(c));
    return g;
  }
  if (name == "S4") {
    g.name = name;
    g.kind = CatalogKind::Sphere4;
    g.dim = 4;
    g.closed = true;
    g.has_potential = true;
    g.f_min = 2.0;
    // Angular charts amplify rounding near the poles by powers of the
    // inverse sines, compounding when several angles are small at once;
    // fourth-derivative quantities need a wide singular-locus margin to
    // stay at the 1e-10 exactness the catalog promises.
    g.margin = 0.4;
    g.charts.push_back(sphere4_chart());
    return g;
  }
  if (name == "CYL") {
    g.name = name;
    g.kind = CatalogKind::Cylinder;
    g.dim = 4;
    g.has_potential = true;
    g.f_min = 1.5;
    g.margin = 0.3;  // same pole-conditioning consideration as S4
    g.charts.push_back(cylinder_chart());
    return g;
  }
  throw std::invalid_argument("unknown catalog geometry: " + name);
}

GeometrySpec random_metric(const RandomMetricSpec& spec) {
  const int n = spec.dim;
  if (n < 2 || n > 6) throw std::invalid_argument("random metric dimension out of range");
  std::mt19937_64 rng(spec.seed);

  for (int attempt = 0; attempt < 100; ++attempt) {
    PolynomialMetric pm;
    pm.n = n;
    pm.eps = spec.eps;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        Polynomial p = random_polynomial(n, spec.degree, rng);
        // Normalize so |Q_ij| <= 1 on the unit box; Gershgorin then keeps
        // delta + eps*Q positive definite for eps < 1/n.
        const double l1 = p.coef_l1();
        if (l1 > 0.0) p.scale(1.0 / l1);
        pm.q.push_back(std::move(p));
      }

    Chart c;
    c.name = "cartesian";
    c.dim = n;
    c.lo.assign(n, -1.0);
    c.hi.assign(n, 1.0);
    c.set_metric(pm);
    if (spec.with_potential) {
      Polynomial f = random_polynomial(n, spec.potential_degree, rng);
      const double l1 = f.coef_l1();
      if (l1 > 0.0) f.scale(1.0 / l1);
      c.set_potential([f](auto x) { return f.eval(x); });
    }

    // Probe positive definiteness at the origin, box corners, and a few
    // interior points before accepting the sample.
    bool ok = true;
    std::vector<double> x(n, 0.0);
    auto check = [&](std::span<const double> pt) {
      SmallMat<double> gv = c.metric_values(pt);
      return is_positive_definite(gv);
    };
    ok = check(x);
    for (std::uint32_t mask = 0; ok && mask < (1u << n); ++mask) {
      for (int i = 0; i < n; ++i) x[i] = (mask >> i) & 1 ? 1.0 : -1.0;
      ok = check(x);
    }
    std::mt19937_64 probe_rng(spec.seed ^ 0x9e3779b97f4a7c15ull);
    for (int k = 0; ok && k < 16; ++k) {
      for (int i = 0; i < n; ++i) x[i] = uniform_in(probe_rng, -1.0, 1.0);
      ok = check(x);
    }
    if (!ok) continue;

    GeometrySpec g;
    g.name = "RAND(seed=" + std::to_string(spec.seed) + ",dim=" + std::to_string(n) + ")";
    g.kind = CatalogKind::Random;
    g.dim = n;
    g.has_potential = spec.with_potential;
    g.charts.push_back(std::move(c));
    return g;
  }
  throw std::runtime_error("random metric: positive definiteness unattainable after 100 resamples");
}

std::vector<ChartPoint> sample_points(const GeometrySpec& geom, int count, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("sample count must be >= 1");
  const Chart& c = geom.primary();
  std::vector<double> lo(c.lo), hi(c.hi);
  for (int i = 0; i < c.dim; ++i) {
    lo[i] += geom.margin;
    hi[i] -= geom.margin;
    if (!(lo[i] < hi[i])) throw std::runtime_error("chart box empty after margin shrink");
  }
  std::mt19937_64 rng(seed);
  std::vector<ChartPoint> pts(count);
  for (int k = 0; k < count; ++k) {
    pts[k].chart = 0;
    pts[k].x.resize(c.dim);
    for (int i = 0; i < c.dim; ++i) pts[k].x[i] = uniform_in(rng, lo[i], hi[i]);
  }
  return pts;
}

}  // namespace gradsol
