#pragma once

#include "gradsol/classify.hpp"
#include "gradsol/geometry.hpp"
#include "gradsol/manifest.hpp"
#include "gradsol/report.hpp"

namespace gradsol {

struct SuiteResult {
  std::vector<IdentityReport> identities;
  std::vector<RegimeVerdict> grid;
  int exit_code = 0;  // 0: no FAIL; 1: at least one FAIL
};

/// Expand suite selections ("all", "pointwise-all", "soliton-all", "lemmas",
/// or explicit ids) into the concrete id list.
std::vector<std::string> expand_suite_ids(const std::vector<std::string>& selection);

/// Smallest jet order an identity needs; the manifest's jet_order must cover
/// every selected identity (checked before anything runs).
int required_jet_order(const std::string& id);

/// Geometry selector from a manifest name: catalog names or RAND / RAND4 /
/// RAND5 (seeded from the manifest).
GeometrySpec build_geometry(const Manifest& m, const std::string& name);

SuiteResult run_identity_suite(const Manifest& m);

/// Regime-grid lattice only (the `grid` subcommand).
SuiteResult run_grid(const Manifest& m);

/// Canonical report text; byte-stable across runs and thread counts.
std::string render_report(const Manifest& m, const SuiteResult& r);

/// Run per the manifest and write the report file. Returns the exit code.
int run_manifest_to_file(const Manifest& m, bool grid_only = false);

}  // namespace gradsol
