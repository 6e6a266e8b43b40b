#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "casimir/campaign.hpp"
#include "casimir/config.hpp"
#include "casimir/errors.hpp"
#include "casimir/oracle.hpp"
#include "casimir/output.hpp"

using namespace casimir;
namespace fs = std::filesystem;

namespace {

RunConfig small_run(const fs::path& dir) {
  RunConfig c = parse_config(
      "[numeric]\nresolution_cells_per_a = 20\nmax_time_in_a = 100\n"
      "kernel_quadrature_points = 1000000\n");
  c.output.directory = dir;
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("casimir_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("single-point campaign converges to the imaginary-frequency force") {
  RunConfig c = small_run(scratch("conv"));
  CampaignResult r = run_campaign(c);
  REQUIRE(r.forces.size() == 1);
  CHECK(r.converged);
  const double wick = wick_force_1d(1.0, 20).force;
  CHECK(r.forces[0].force_inf == doctest::Approx(wick).epsilon(0.02));
  CHECK(r.forces[0].delta_at_truncation <= c.numeric.tolerance);
  CHECK(r.gammas[0].vacuum_subtracted);
  CHECK(r.vacuum_force_inf < 0);
}

TEST_CASE("worker count does not change the result") {
  RunConfig c = small_run(scratch("w"));
  CampaignResult a = run_campaign(c);
  c.campaign.workers = 3;
  CampaignResult b = run_campaign(c);
  REQUIRE(a.forces.size() == b.forces.size());
  CHECK(a.steps == b.steps);
  CHECK(a.forces[0].force == b.forces[0].force);
  CHECK(a.gammas[0].e == b.gammas[0].e);
  CHECK(a.gammas[0].h == b.gammas[0].h);
}

TEST_CASE("a closed contour in empty 2D space feels no force") {
  RunConfig c = parse_config(
      "[geometry]\ndimensions = 2\nplates = none\ndomain_length_in_a = 3\n"
      "domain_height_in_a = 3\nsurface = closed\nsurface_x_min_in_a = -0.25\n"
      "surface_x_max_in_a = 0.25\nsurface_y_min_in_a = -0.25\nsurface_y_max_in_a = 0.25\n"
      "[numeric]\nresolution_cells_per_a = 8\nmax_time_in_a = 3\n"
      "kernel_quadrature_points = 1000000\n[campaign]\ncomponents = x, y\n");
  c.output.directory = scratch("vac2d");
  CampaignResult r;
  try {
    r = run_campaign(c);
  } catch (const BudgetExceeded&) {
  }
  REQUIRE(r.forces.size() == 2);
  for (const auto& f : r.forces)
    for (double v : f.force) CHECK(std::abs(v) < 1e-9);
}

TEST_CASE("outputs are reproducible and complete") {
  const fs::path d1 = scratch("out1"), d2 = scratch("out2");
  RunConfig c = small_run(d1);
  c.output.plot_data = true;
  CampaignResult r = run_campaign(c);
  emit_outputs(r, c);
  c.output.directory = d2;
  emit_outputs(run_campaign(c), c);
  for (const char* f : {"force_x.csv", "summary.json", "kernel_envelope.csv"}) {
    INFO(f);
    REQUIRE(fs::exists(d1 / f));
    CHECK(slurp(d1 / f) == slurp(d2 / f));
  }
  CHECK(fs::exists(d1 / "timings.csv"));
  bool cache = false;
  for (const auto& e : fs::directory_iterator(d1))
    cache |= e.path().filename().string().rfind("kernel_", 0) == 0 &&
             e.path().extension() == ".csv" && e.path().filename() != "kernel_envelope.csv";
  CHECK(cache);
  const std::string s = slurp(d1 / "summary.json");
  CHECK(s.find("\"converged\": true") != std::string::npos);
}

TEST_CASE("output error paths") {
  const fs::path blocker = scratch("blocker");
  { std::ofstream(blocker) << "x"; }
  CHECK_THROWS_AS(check_output_directory(blocker / "sub"), IoError);
  fs::remove(blocker);

  RunConfig c = small_run(scratch("empty"));
  CampaignResult empty;
  CHECK_NOTHROW(summary_json(empty, c));
  CHECK_NOTHROW(emit_outputs(empty, c));
}

TEST_CASE("vacuum reference needs room for the light cone") {
  MaterialGrid g = build_grid(parallel_plates(1.0, 3.0), 16, 1.0);
  SurfacePoint p{g.node(g.i_of(0.0)), 0, 1.0};
  CHECK_THROWS_AS(vacuum_reference(g, p, 1000, 1.0), ConfigurationError);
  CHECK_NOTHROW(vacuum_reference(g, p, 100));
}

TEST_CASE("background epsilon and mu enter only through their product") {
  RunConfig a = small_run(scratch("em"));
  a.geometry.epsilon = 2.0;
  RunConfig b = a;
  b.geometry.epsilon = 1.0;
  b.geometry.mu = 2.0;
  const double fa = run_campaign(a).forces.at(0).force_inf;
  const double fb = run_campaign(b).forces.at(0).force_inf;
  CHECK(fa == doctest::Approx(fb).epsilon(1e-12));
  CHECK(fa == doctest::Approx(std::numbers::pi / (24 * std::sqrt(2.0))).epsilon(0.02));
}
