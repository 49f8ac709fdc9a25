#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "gradsol/suite.hpp"
#include "gradsol/version.hpp"

namespace {

struct Overrides {
  std::string manifest_path;
  long seed = -1;
  int jet_order = 0;
  int q = 0;
  double tolerance = 0.0;
  std::string out;
  int threads = 0;
};

void add_common(CLI::App* cmd, Overrides& ov) {
  cmd->add_option("manifest", ov.manifest_path, "manifest file")->required();
  cmd->add_option("--seed", ov.seed, "override the suite seed")->envname("GRADSOL_SEED");
  cmd->add_option("--jet-order", ov.jet_order, "override the jet order K")
      ->envname("GRADSOL_JET_ORDER");
  cmd->add_option("--quadrature", ov.q, "override nodes per axis")
      ->envname("GRADSOL_QUADRATURE");
  cmd->add_option("--tolerance", ov.tolerance, "override the pointwise tolerance")
      ->envname("GRADSOL_TOLERANCE");
  cmd->add_option("--out", ov.out, "report output path")->envname("GRADSOL_OUT");
  cmd->add_option("--threads", ov.threads, "worker threads")->envname("GRADSOL_THREADS");
}

gradsol::Manifest load(const Overrides& ov) {
  gradsol::Manifest m = gradsol::parse_manifest_file(ov.manifest_path);
  if (ov.seed >= 0) m.seed = static_cast<std::uint64_t>(ov.seed);
  if (ov.jet_order > 0) m.jet_order = ov.jet_order;
  if (ov.q > 0) m.q = ov.q;
  if (ov.tolerance > 0) m.tol_pointwise = ov.tolerance;
  if (!ov.out.empty()) m.out_path = ov.out;
  if (ov.threads > 0) m.threads = ov.threads;
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gradsol: numerical verification of curvature identities on gradient "
               "shrinking Ricci solitons"};
  app.set_version_flag("--version", gradsol::kVersion);
  app.require_subcommand(1);

  Overrides suite_ov, grid_ov;
  CLI::App* suite = app.add_subcommand("suite", "run the identity suite from a manifest");
  add_common(suite, suite_ov);
  CLI::App* grid = app.add_subcommand("grid", "emit the (alpha, beta) regime grid");
  add_common(grid, grid_ov);

  double alpha = 0.0, beta = 0.0;
  CLI::App* classify = app.add_subcommand("classify", "classify one (alpha, beta) point");
  classify->add_option("alpha", alpha, "U coefficient")->required();
  classify->add_option("beta", beta, "V coefficient")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*classify) {
      gradsol::RegimeVerdict v = gradsol::classify_regime(alpha, beta);
      std::printf("alpha=%g beta=%g regime=%s in_lambda=%s\nconclusion: %s\n", v.alpha,
                  v.beta, gradsol::regime_name(v.regime), v.in_lambda ? "true" : "false",
                  v.conclusion.c_str());
      return 0;
    }
    if (*suite) {
      const int code = gradsol::run_manifest_to_file(load(suite_ov));
      std::printf("report written to %s\n", load(suite_ov).out_path.c_str());
      return code;
    }
    if (*grid) {
      gradsol::run_manifest_to_file(load(grid_ov), /*grid_only=*/true);
      std::printf("grid written to %s\n", load(grid_ov).out_path.c_str());
      return 0;
    }
  } catch (const gradsol::ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
