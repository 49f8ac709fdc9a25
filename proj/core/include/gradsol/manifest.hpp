#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace gradsol {

/// Configuration error (bad manifest, bad CLI usage): exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Flat-section key-value manifest: [geometry], [suite], [quadrature],
/// [output]. Unknown sections or keys are rejected.
struct Manifest {
  // [geometry]
  std::vector<std::string> geometries = {"S4", "GAUSS", "CYL", "RAND4", "RAND5"};
  std::uint64_t rand_seed = 7;
  double rand_eps = 0.05;
  int rand_degree = 3;
  bool rand_potential = true;

  // [suite]
  std::vector<std::string> ids = {"all"};
  int samples = 200;
  std::uint64_t seed = 7;
  int jet_order = 5;
  double grid_min = -1.0;
  double grid_max = 1.0;
  double grid_step = 0.25;
  double tol_pointwise = 0.0;  // 0 = per-identity defaults
  double tol_integral_rel = 1e-6;
  double tol_integral_abs = 1e-8;

  // [quadrature]
  int q = 24;
  std::vector<double> levels;  // per-geometry defaults when empty
  double tail_tol = 1e-8;

  // [output]
  std::string out_path = "report.json";
  int threads = 1;
};

Manifest parse_manifest_text(const std::string& text);
Manifest parse_manifest_file(const std::string& path);

}  // namespace gradsol
