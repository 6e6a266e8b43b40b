#include "casimir/output.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <system_error>

#include "casimir/errors.hpp"
#include "casimir/format.hpp"

namespace casimir {

namespace fs = std::filesystem;

namespace {

const char* component_name(int c) { return c == 0 ? "x" : "y"; }

const char* field_name(Field f) {
  switch (f) {
    case Field::Ez: return "Ez";
    case Field::Hx: return "Hx";
    case Field::Hy: return "Hy";
  }
  return "?";
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw IoError("cannot write " + p.string());
  return f;
}

void write_series(const fs::path& p, const GammaSeries& g, const ForceResult& f) {
  auto out = open_out(p);
  out << "t,GammaE,GammaH,F,Delta\n";
  for (std::size_t m = 0; m < f.t.size(); ++m)
    out << fmt(f.t[m]) << ',' << fmt(g.e[m]) << ',' << fmt(g.h[m]) << ',' << fmt(f.force[m])
        << ',' << fmt(f.delta[m]) << '\n';
}

}  // namespace

void check_output_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw IoError("cannot create output directory " + dir.string());
  const fs::path probe = dir / ".write_test";
  {
    std::ofstream f(probe, std::ios::binary);
    if (!f || !(f << "x") || !f.flush())
      throw IoError("output directory " + dir.string() + " is not writable");
  }
  fs::remove(probe, ec);
}

std::string summary_json(const CampaignResult& r, const RunConfig& cfg) {
  using nlohmann::ordered_json;
  ordered_json j;
  const auto& g = r.grid;
  j["grid"] = {{"dimensions", g.dims},
               {"resolution_cells_per_a", cfg.numeric.resolution},
               {"dx", g.dx},
               {"dt", g.dt},
               {"cells_x", g.nx},
               {"cells_y", g.ny},
               {"sigma_in_2pi_c_over_a", g.sigma_user}};
  j["steps"] = r.steps;
  j["time"] = static_cast<double>(r.steps) * g.dt;
  j["surface"] = {
      {"mode", cfg.geometry.surface.mode == SurfaceMode::SinglePoint ? "single_point" : "closed"},
      {"points", r.surface.points.size()},
      {"vacuum_subtraction", r.surface.vacuum_subtraction}};
  if (r.surface.vacuum_subtraction) j["lattice_vacuum_force"] = r.vacuum_force_inf;
  j["kernel"] = {{"N", r.kernel.size()}, {"N_q", r.kernel.nq}};
  j["components"] = ordered_json::array();
  for (const auto& f : r.forces)
    j["components"].push_back({{"component", component_name(f.component)},
                               {"force", f.force_inf},
                               {"truncation_time", f.truncation_time},
                               {"delta_at_truncation", f.delta_at_truncation},
                               {"tolerance", f.tolerance},
                               {"converged", f.converged},
                               {"best_delta", f.best_delta}});
  j["simulations"] = ordered_json::array();
  for (const auto& s : r.simulations)
    j["simulations"].push_back({{"gauge", gauge_name(s.measurement.source.gauge)},
                                {"field", field_name(s.measurement.source.site.field)},
                                {"i", s.measurement.source.site.i},
                                {"j", s.measurement.source.site.j},
                                {"probes", s.measurement.probes.size()},
                                {"vacuum_reference", s.vacuum_reference},
                                {"steps", s.steps}});
  j["converged"] = r.converged;
  j["wall_times"] = "timings.csv";
  return j.dump(2) + "\n";
}

void emit_outputs(const CampaignResult& r, const RunConfig& cfg) {
  const fs::path dir = cfg.output.directory;
  check_output_directory(dir);
  if (cfg.output.emit_series)
    for (std::size_t k = 0; k < r.forces.size() && k < r.gammas.size(); ++k)
      write_series(dir / (std::string("force_") + component_name(r.forces[k].component) + ".csv"),
                   r.gammas[k], r.forces[k]);
  if (cfg.output.emit_summary) {
    auto s = open_out(dir / "summary.json");
    s << summary_json(r, cfg);
    auto t = open_out(dir / "timings.csv");
    t << "simulation,gauge,field,i,j,vacuum_reference,steps,wall_seconds\n";
    for (std::size_t k = 0; k < r.simulations.size(); ++k) {
      const auto& sim = r.simulations[k];
      t << k << ',' << gauge_name(sim.measurement.source.gauge) << ','
        << field_name(sim.measurement.source.site.field) << ',' << sim.measurement.source.site.i
        << ',' << sim.measurement.source.site.j << ',' << (sim.vacuum_reference ? 1 : 0) << ','
        << sim.steps << ',' << fmt(sim.wall_seconds) << '\n';
    }
  }
  if (cfg.output.emit_kernel && r.kernel.size() > 0) {
    ContourParams p{r.kernel.sigma, r.kernel.dt, static_cast<long>(r.kernel.size()), r.kernel.nq};
    const fs::path kp = dir / kernel_cache_name(p, r.grid.sigma_user);
    if (!fs::exists(kp)) write_kernel_cache(kp, r.kernel, r.grid.sigma_user);
  }
  if (cfg.output.plot_data) {
    auto p = open_out(dir / "kernel_envelope.csv");
    p << "t,abs_im_g\n";
    // half-step table: the one paired with the field samples
    for (std::size_t n = 0; n < r.kernel.half.size(); ++n)
      p << fmt((static_cast<double>(n) + 0.5) * r.kernel.dt) << ','
        << fmt(std::abs(r.kernel.half[n].imag())) << '\n';
  }
}

}  // namespace casimir
