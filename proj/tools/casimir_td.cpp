// Command-line front end: run / kernel / oracle wick / validate.

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <optional>

#include "casimir/campaign.hpp"
#include "casimir/config.hpp"
#include "casimir/errors.hpp"
#include "casimir/format.hpp"
#include "casimir/kernel.hpp"
#include "casimir/oracle.hpp"
#include "casimir/output.hpp"
#include "casimir/units.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitPartial = 2;

struct RunArgs {
  std::string config;
  std::optional<int> workers, resolution;
  std::optional<double> sigma, tolerance;
  std::optional<std::string> out;
};

void apply_overrides(casimir::RunConfig& c, const RunArgs& a) {
  if (const char* env = std::getenv("CASIMIR_WORKERS")) {
    double w;
    if (!casimir::parse_double(env, w) || w < 1 || w != static_cast<int>(w))
      throw casimir::ValidationError("CASIMIR_WORKERS: must be a positive integer");
    c.campaign.workers = static_cast<int>(w);
  }
  if (a.workers) c.campaign.workers = *a.workers;
  if (a.resolution) c.numeric.resolution = *a.resolution;
  if (a.sigma) c.numeric.sigma_user = *a.sigma;
  if (a.tolerance) c.numeric.tolerance = *a.tolerance;
  if (a.out) c.output.directory = *a.out;
  c.validate();
}

int do_run(const RunArgs& a) {
  casimir::RunConfig c = casimir::load_config(a.config);
  apply_overrides(c, a);
  casimir::check_output_directory(c.output.directory);
  casimir::CampaignResult r = casimir::run_campaign(c);
  casimir::emit_outputs(r, c);
  for (const auto& f : r.forces)
    std::cout << "F_" << (f.component == 0 ? 'x' : 'y') << " = " << casimir::fmt(f.force_inf)
              << "  T = " << casimir::fmt(f.truncation_time)
              << "  Delta(T) = " << casimir::fmt(f.delta_at_truncation)
              << (f.converged ? "" : "  (not converged)") << '\n';
  return r.converged ? kExitOk : kExitPartial;
}

int do_validate(const std::string& path) {
  casimir::RunConfig c = casimir::load_config(path);
  apply_overrides(c, RunArgs{});
  casimir::GeometrySpec g = c.resolved_geometry();
  casimir::MaterialGrid grid =
      casimir::build_grid(g, c.numeric.resolution, c.numeric.sigma_user, c.numeric.courant);
  casimir::SurfacePlan plan = casimir::surface_points(g, grid);
  std::cout << "ok: " << grid.nx << (g.dims == 2 ? "x" + std::to_string(grid.ny) : "")
            << " cells, " << plan.points.size() << " surface points\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Casimir forces from FDTD impulse responses in a conductive medium"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "run a force campaign from a config file");
  run_cmd->add_option("config", run.config, "config file")->required();
  run_cmd->add_option("--workers", run.workers, "worker threads (overrides CASIMIR_WORKERS)");
  run_cmd->add_option("--sigma", run.sigma, "conductivity in 2 pi c / a");
  run_cmd->add_option("--resolution", run.resolution, "cells per a");
  run_cmd->add_option("--tolerance", run.tolerance, "relative convergence tolerance");
  run_cmd->add_option("--out", run.out, "output directory");

  double k_sigma = 1.0, k_dt = 0.0125;
  long k_n = 1000, k_quad = 10000000;
  std::string k_out;
  auto* kernel_cmd = app.add_subcommand("kernel", "compute and write kernel coefficients");
  kernel_cmd->add_option("--sigma", k_sigma, "conductivity in 2 pi c / a");
  kernel_cmd->add_option("--dt", k_dt, "time step in a / c");
  kernel_cmd->add_option("--n", k_n, "coefficients per table");
  kernel_cmd->add_option("--quad", k_quad, "quadrature points");
  kernel_cmd->add_option("--out", k_out, "output file (default: stdout)");

  double w_h = 1.0;
  int w_res = 40;
  auto* oracle_cmd = app.add_subcommand("oracle", "reference computations");
  oracle_cmd->require_subcommand(1);
  auto* wick_cmd = oracle_cmd->add_subcommand("wick", "imaginary-frequency plate force");
  wick_cmd->set_help_flag("--help", "show help");
  wick_cmd->add_option("--h", w_h, "plate separation in a");
  wick_cmd->add_option("--resolution", w_res, "cells per a");

  std::string v_config;
  auto* validate_cmd = app.add_subcommand("validate", "check a config without running it");
  validate_cmd->add_option("config", v_config, "config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run_cmd) return do_run(run);
    if (*validate_cmd) return do_validate(v_config);
    if (*kernel_cmd) {
      casimir::ContourParams p{casimir::from_2pi_units(k_sigma), k_dt, k_n, k_quad};
      casimir::KernelSeries k = casimir::kernel_series(p);
      if (k_out.empty()) {
        std::cout << "n,re,im\n";
        for (std::size_t n = 0; n < k.integer.size(); ++n)
          std::cout << n << ',' << casimir::fmt(k.integer[n].real()) << ','
                    << casimir::fmt(k.integer[n].imag()) << '\n';
        for (std::size_t n = 0; n < k.half.size(); ++n)
          std::cout << n << ".5," << casimir::fmt(k.half[n].real()) << ','
                    << casimir::fmt(k.half[n].imag()) << '\n';
      } else {
        casimir::write_kernel_cache(k_out, k, k_sigma);
      }
      return kExitOk;
    }
    if (*wick_cmd) {
      casimir::WickResult w = casimir::wick_force_1d(w_h, w_res);
      std::cout << "wick force = " << casimir::fmt(w.force) << " (" << w.nodes << " nodes)\n"
                << "mode sum   = " << casimir::fmt(casimir::mode_sum_force_1d(w_h)) << '\n';
      return kExitOk;
    }
  } catch (const casimir::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}
