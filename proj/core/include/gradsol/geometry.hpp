#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gradsol/chart.hpp"

namespace gradsol {

enum class CatalogKind { FlatE4, Gaussian, Sphere4, Cylinder, Random };

/// A point in one chart of a geometry.
struct ChartPoint {
  int chart = 0;
  std::vector<double> x;
};

/// A geometry: chart(s) with jet-evaluable metric (and optional potential),
/// sampling margins, and the structural facts the quadrature engine needs.
struct GeometrySpec {
  std::string name;
  CatalogKind kind = CatalogKind::Random;
  int dim = 0;
  std::vector<Chart> charts;  // charts[0] drives pointwise sampling
  double margin = 1e-3;       // sampling margin from chart boundary
  bool closed = false;        // compact without boundary (whole-manifold regions)
  bool has_potential = false;
  double f_min = 0.0;  // infimum of f (region validation); meaningful if has_potential

  const Chart& primary() const { return charts.front(); }
};

/// Named example geometries: E4 (flat), GAUSS (flat with f = |x|^2/4),
/// S4 (round sphere of radius sqrt 6, f = 2), CYL (S^3(2) x R with
/// f = t^2/4 + 3/2).
GeometrySpec catalog_get(const std::string& name);

struct RandomMetricSpec {
  std::uint64_t seed = 0;
  int dim = 4;
  double eps = 0.05;       // perturbation amplitude
  int degree = 3;          // polynomial degree
  bool with_potential = false;
  int potential_degree = 3;
};

/// g = delta + eps * Q(x) with Q symmetric polynomial entries, normalized so
/// positive definiteness holds on the whole chart box; resamples on failure
/// (at most 100 attempts). Deterministic per seed.
GeometrySpec random_metric(const RandomMetricSpec& spec);

/// Uniform draws over the chart box shrunk by the margin; deterministic per
/// seed, never on singular loci.
std::vector<ChartPoint> sample_points(const GeometrySpec& geom, int count, std::uint64_t seed);

/// Integration charts for the catalog geometries (the sampling chart of
/// GAUSS is Cartesian; its region chart is hyperspherical-polar).
Chart gauss_polar_chart();
Chart sphere4_chart();
Chart cylinder_chart();

/// Round 3-sphere chart of the given radius (boundary measure for the
/// Gaussian ball and the cylinder caps).
Chart s3_round_chart(double radius);

}  // namespace gradsol
