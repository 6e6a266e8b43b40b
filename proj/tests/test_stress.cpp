#include <doctest.h>

#include <cmath>
#include <numbers>

#include "casimir/campaign.hpp"
#include "casimir/errors.hpp"
#include "casimir/stress.hpp"
#include "casimir/units.hpp"

using namespace casimir;

namespace {

struct Setup {
  GeometrySpec geom = parallel_plates(1.0, 3.0);
  MaterialGrid grid;
  SurfacePlan plan;
  ResponseMap responses;

  Setup(long steps, double scale = 1.0) {
    grid = build_grid(geom, 16, 1.0);
    plan = surface_points(geom, grid);
    for (const auto& m : plan_measurements(grid, plan)) {
      auto s = run_impulse(grid, m.source, steps, m.probes);
      for (std::size_t p = 0; p < m.probes.size(); ++p) {
        for (double& v : s[p]) v *= scale;
        responses[{m.source.gauge, m.source.site, m.probes[p]}] = s[p];
      }
    }
  }
};

}  // namespace

TEST_CASE("measurement plan covers the stress tensor pairs") {
  Setup s(1);
  auto m = plan_measurements(s.grid, s.plan);
  REQUIRE(m.size() == 3);
  int electric = 0;
  for (const auto& x : m) {
    if (x.source.gauge == Gauge::Electric) ++electric;
    REQUIRE(x.probes.size() == 1);
    CHECK(x.probes[0] == x.source.site);
  }
  CHECK(electric == 1);

  GeometrySpec g2 = vacuum_domain(2, 2.0, 2.0);
  g2.surface.mode = SurfaceMode::Closed;
  g2.surface.x_min_in_a = g2.surface.y_min_in_a = -0.25;
  g2.surface.x_max_in_a = g2.surface.y_max_in_a = 0.25;
  MaterialGrid grid2 = build_grid(g2, 8);
  auto m2 = plan_measurements(grid2, surface_points(g2, grid2));
  for (std::size_t k = 1; k < m2.size(); ++k)
    CHECK(std::tie(m2[k - 1].source.gauge, m2[k - 1].source.site) <
          std::tie(m2[k].source.gauge, m2[k].source.site));
  for (const auto& x : m2)
    if (x.source.gauge == Gauge::Magnetic) CHECK(x.probes.size() >= 4);
}

TEST_CASE("zero responses give zero gamma and zero force") {
  Setup s(100, 0.0);
  GammaSeries g = gamma_accumulate(s.responses, s.plan, s.grid, 0);
  for (double v : g.e) CHECK(v == 0.0);
  for (double v : g.h) CHECK(v == 0.0);
  KernelSeries k = kernel_series({s.grid.sigma, s.grid.dt, 100, 1000000});
  for (double f : partial_force(k, g)) CHECK(f == 0.0);
}

TEST_CASE("gamma and force are linear in the responses") {
  Setup a(200), b(200, 2.0);
  KernelSeries k = kernel_series({a.grid.sigma, a.grid.dt, 200, 1000000});
  auto fa = partial_force(k, gamma_accumulate(a.responses, a.plan, a.grid, 0));
  auto fb = partial_force(k, gamma_accumulate(b.responses, b.plan, b.grid, 0));
  for (std::size_t m = 0; m < fa.size(); ++m) CHECK(fb[m] == 2.0 * fa[m]);
}

TEST_CASE("gamma error paths") {
  Setup s(50);
  ResponseMap missing = s.responses;
  missing.erase(missing.begin());
  CHECK_THROWS_AS(gamma_accumulate(missing, s.plan, s.grid, 0), IncompleteCampaign);
  ResponseMap uneven = s.responses;
  uneven.rbegin()->second.pop_back();
  CHECK_THROWS_AS(gamma_accumulate(uneven, s.plan, s.grid, 0), InvalidArgument);
  CHECK_THROWS_AS(gamma_accumulate(s.responses, s.plan, s.grid, 1), InvalidArgument);

  GammaSeries g = gamma_accumulate(s.responses, s.plan, s.grid, 0);
  KernelSeries k = kernel_series({s.grid.sigma, 2 * s.grid.dt, 50, 1000000});
  CHECK_THROWS_AS(partial_force(k, g), InvalidArgument);
  KernelSeries shortk = kernel_series({s.grid.sigma, s.grid.dt, 10, 1000000});
  CHECK_THROWS_AS(partial_force(shortk, g), InvalidArgument);
}

TEST_CASE("vacuum reference") {
  MaterialGrid g = build_grid(parallel_plates(1.0, 3.0), 16, 1.0);
  SurfacePoint p{g.node(g.i_of(0.0)), 0, 1.0};
  GammaSeries v = vacuum_reference(g, p, 300);
  GammaSeries z = subtract_vacuum(v, v);
  CHECK(z.vacuum_subtracted);
  CHECK_FALSE(v.vacuum_subtracted);
  for (double x : z.e) CHECK(x == 0.0);
  for (double x : z.h) CHECK(x == 0.0);
  CHECK_THROWS_AS(vacuum_reference(g, p, 300, 2.0), ConfigurationError);
}

TEST_CASE("lattice vacuum force is the limit of the vacuum partial force") {
  const int res = 16;
  MaterialGrid g = build_grid(vacuum_domain(1, 4.0), res, 1.0);
  SurfacePoint p{g.node(g.i_of(0.0)), 0, 1.0};
  const long n = static_cast<long>(400.0 / g.dt);
  GammaSeries v = vacuum_reference(g, p, n);
  KernelSeries k = kernel_series({g.sigma, g.dt, n, 2000000});
  auto f = partial_force(k, v);
  const double lim = lattice_vacuum_force(g.sigma, g.dx, g.dt);
  // algebraic approach: the remainder shrinks like 1/t
  const double r1 = f[n / 4 - 1] - lim, r2 = f[n - 1] - lim;
  CHECK(std::abs(r2) < 0.4 * std::abs(r1));
  CHECK(std::abs(r2) < 1e-3 * std::abs(lim));
}

TEST_CASE("lattice Green function satisfies its difference equation") {
  const double dx = 0.05;
  const cplx z(3.0, 1.5);
  const cplx g0 = lattice_green_1d(z, dx);
  const cplx q = 2.0 - z * dx * dx;
  const cplx r = std::sqrt(q * q - 4.0);
  cplx lam = 0.5 * (q - r);
  if (std::abs(lam) > 1) lam = 0.5 * (q + r);
  const cplx g1 = g0 * lam;
  CHECK(std::abs((2.0 * g0 - 2.0 * g1) / (dx * dx) - z * g0 - 1.0 / dx) < 1e-9 / dx);
}

TEST_CASE("convergence on a synthetic exponential approach") {
  const double dt = 0.01;
  std::vector<double> f;
  for (int m = 0; m < 4000; ++m) f.push_back(2.0 + std::exp(-(m + 0.5) * dt));
  ConvergenceOptions opt;
  opt.tolerance = 1e-3;
  opt.window = 5.0;
  ForceResult r = convergence(f, dt, opt);
  CHECK(r.converged);
  CHECK(r.force_inf == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(r.truncation_time == doctest::Approx(std::log(1.0 / (2e-3))).epsilon(0.01));
  CHECK(r.delta_at_truncation <= 1e-3);
  for (std::size_t m = 1; m < r.delta.size(); ++m) CHECK(r.delta[m] <= r.delta[m - 1] + 1e-15);

  std::vector<double> slow;
  for (int m = 0; m < 1000; ++m) slow.push_back(1.0 + std::exp(-(m + 0.5) * dt * 0.1));
  try {
    convergence(slow, dt, opt);
    FAIL("expected BudgetExceeded");
  } catch (const BudgetExceeded& e) {
    CHECK(e.best_delta() > 1e-3);
  }
  opt.min_time = 100.0;
  CHECK_FALSE(evaluate_convergence(f, dt, opt).converged);
}
