#include "casimir/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <numbers>
#include <thread>

#include "casimir/errors.hpp"
#include "casimir/output.hpp"
#include "casimir/units.hpp"

namespace casimir {

namespace {

struct Job {
  const MaterialGrid* grid;
  Measurement m;
  bool vacuum;
  FieldState state;
  std::vector<std::vector<double>> series;
  double wall = 0;

  Job(const MaterialGrid* g, Measurement meas, bool vac)
      : grid(g), m(std::move(meas)), vacuum(vac), state(*g, m.source), series(m.probes.size()) {
    for (const auto& p : m.probes) check_site(*g, p);
  }

  void advance(long target) {
    const auto t0 = std::chrono::steady_clock::now();
    for (auto& s : series) s.reserve(static_cast<std::size_t>(target));
    while (state.step < target) {
      step(state, *grid);
      for (std::size_t p = 0; p < m.probes.size(); ++p)
        series[p].push_back(probe_value(state, *grid, m.probes[p]));
    }
    wall += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

void advance_all(std::vector<Job>& jobs, long target, int workers) {
  const int nthreads = std::max(1, std::min<int>(workers, static_cast<int>(jobs.size())));
  if (nthreads == 1) {
    for (auto& j : jobs) j.advance(target);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(nthreads));
  for (int t = 0; t < nthreads; ++t)
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < jobs.size(); k = next++) jobs[k].advance(target);
    });
  for (auto& th : pool) th.join();
}

ResponseMap collect(const std::vector<Job>& jobs, bool vacuum) {
  ResponseMap r;
  for (const auto& j : jobs) {
    if (j.vacuum != vacuum) continue;
    for (std::size_t p = 0; p < j.m.probes.size(); ++p)
      r[{j.m.source.gauge, j.m.source.site, j.m.probes[p]}] = j.series[p];
  }
  return r;
}

bool keep_gauge(const std::vector<Gauge>& gauges, Gauge g) {
  return std::find(gauges.begin(), gauges.end(), g) != gauges.end();
}

// Empty series for gauges that are not run so the stress sums still close.
void fill_missing(ResponseMap& r, const std::vector<Measurement>& all, std::size_t len) {
  for (const auto& m : all)
    for (const auto& p : m.probes) {
      ResponseKey k{m.source.gauge, m.source.site, p};
      if (!r.count(k)) r[k] = std::vector<double>(len, 0.0);
    }
}

struct VacuumSetup {
  MaterialGrid grid;
  SurfacePlan plan;
};

VacuumSetup make_vacuum(const MaterialGrid& like, const SurfacePoint& point, long n_steps,
                        double length_in_a) {
  if (like.dims != 1) throw ConfigurationError("vacuum reference is only available in 1D");
  const double speed = 1.0 / std::sqrt(like.background_eps * like.background_mu);
  const double needed = n_steps * like.dt * speed + 4.0 * like.dx + 1.0;
  if (length_in_a <= 0.0) length_in_a = needed;
  if (length_in_a < needed)
    throw ConfigurationError("vacuum domain is too small for the requested step count");
  GeometrySpec geom = vacuum_domain(1, length_in_a);
  geom.epsilon = like.background_eps;
  geom.mu = like.background_mu;
  const int res = static_cast<int>(std::lround(1.0 / like.dx));
  VacuumSetup v{build_grid(geom, res, like.sigma_user), {}};
  v.grid.dt = like.dt;
  v.grid.sigma = like.sigma;
  v.plan.points.push_back({v.grid.node(v.grid.i_of(0.0)), point.comp, point.weight});
  return v;
}

}  // namespace

GammaSeries vacuum_reference(const MaterialGrid& like, const SurfacePoint& point, long n_steps,
                             double length_in_a) {
  VacuumSetup v = make_vacuum(like, point, n_steps, length_in_a);
  ResponseMap r;
  for (const auto& m : plan_measurements(v.grid, v.plan)) {
    auto series = run_impulse(v.grid, m.source, n_steps, m.probes);
    for (std::size_t p = 0; p < m.probes.size(); ++p)
      r[{m.source.gauge, m.source.site, m.probes[p]}] = std::move(series[p]);
  }
  return gamma_accumulate(r, v.plan, v.grid, point.comp);
}

CampaignResult run_campaign(const RunConfig& cfg) {
  cfg.validate();
  const GeometrySpec geom = cfg.resolved_geometry();
  const NumericConfig& num = cfg.numeric;

  CampaignResult res;
  res.grid = build_grid(geom, num.resolution, num.sigma_user, num.courant);
  const MaterialGrid& grid = res.grid;
  res.surface = surface_points(geom, grid);
  const bool subtract = cfg.subtract_vacuum();
  res.surface.vacuum_subtraction = subtract;

  const long n_max = static_cast<long>(std::ceil(num.max_time / grid.dt));
  ContourParams kp{grid.sigma, grid.dt, n_max, num.quadrature_points};
  if (cfg.output.emit_kernel) {
    check_output_directory(cfg.output.directory);
    res.kernel = load_or_compute_kernel(kp, num.sigma_user, cfg.output.directory);
  } else {
    res.kernel = kernel_series(kp);
  }

  const auto all = plan_measurements(grid, res.surface);
  std::vector<Job> jobs;
  for (const auto& m : all)
    if (keep_gauge(cfg.campaign.gauges, m.source.gauge)) jobs.emplace_back(&grid, m, false);

  VacuumSetup vac;
  std::vector<Measurement> vac_all;
  if (subtract) {
    vac = make_vacuum(grid, res.surface.points.front(), n_max, 0.0);
    vac_all = plan_measurements(vac.grid, vac.plan);
    for (const auto& m : vac_all)
      if (keep_gauge(cfg.campaign.gauges, m.source.gauge)) jobs.emplace_back(&vac.grid, m, true);
    res.vacuum_force_inf = lattice_vacuum_force(grid.sigma, grid.dx, grid.dt,
                                                grid.background_eps, grid.background_mu);
  }

  const double h = geom.separation_in_a;
  ConvergenceOptions opt;
  opt.tolerance = num.tolerance;
  opt.window = 10.0 * h * std::sqrt(geom.epsilon * geom.mu);
  opt.min_time = num.min_time;
  opt.scale_floor = 1e-6 * std::numbers::pi / (24.0 * h * h);
  const long chunk = std::max(1L, static_cast<long>(std::lround(0.25 * opt.window / grid.dt)));

  long n = 0;
  while (true) {
    n = std::min(n + chunk, n_max);
    advance_all(jobs, n, cfg.campaign.workers);

    ResponseMap r = collect(jobs, false);
    fill_missing(r, all, static_cast<std::size_t>(n));
    ResponseMap rv;
    if (subtract) {
      rv = collect(jobs, true);
      fill_missing(rv, vac_all, static_cast<std::size_t>(n));
    }
    res.gammas.clear();
    res.forces.clear();
    bool done = true;
    for (int comp : cfg.campaign.components) {
      GammaSeries gm = gamma_accumulate(r, res.surface, grid, comp);
      std::vector<double> f;
      if (subtract) {
        GammaSeries gv = gamma_accumulate(rv, vac.plan, vac.grid, comp);
        gm = subtract_vacuum(gm, gv);
        f = partial_force(res.kernel, gm);
        // add back the vacuum run and remove its infinite-time limit
        const std::vector<double> fv = partial_force(res.kernel, gv);
        for (std::size_t m = 0; m < f.size(); ++m) f[m] += fv[m] - res.vacuum_force_inf;
      } else {
        f = partial_force(res.kernel, gm);
      }
      ForceResult fr = evaluate_convergence(std::move(f), grid.dt, opt, comp);
      done = done && fr.converged;
      res.gammas.push_back(std::move(gm));
      res.forces.push_back(std::move(fr));
    }
    if (done || n >= n_max) {
      res.converged = done;
      break;
    }
  }
  res.steps = n;
  for (const auto& j : jobs)
    res.simulations.push_back({j.m, j.vacuum, j.state.step, j.wall});
  return res;
}

}  // namespace casimir
