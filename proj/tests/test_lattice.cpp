#include <doctest.h>

#include <cmath>

#include "casimir/errors.hpp"
#include "casimir/lattice.hpp"

using namespace casimir;

TEST_CASE("empty vacuum domain has uniform materials and only wall conductors") {
  MaterialGrid g = build_grid(vacuum_domain(1, 2.0), 16);
  CHECK(g.dx == doctest::Approx(1.0 / 16));
  for (double e : g.eps) CHECK(e == 1.0);
  for (double m : g.mu_y) CHECK(m == 1.0);
  for (int i = 1; i < g.nx; ++i) CHECK(g.conductor[g.node(i)] == 0);
  CHECK(g.conductor[0] == 1);
  CHECK(g.conductor[g.node(g.nx)] == 1);
}

TEST_CASE("plates at +-h/2 leave a 40-cell cavity at resolution 40") {
  MaterialGrid g = build_grid(parallel_plates(1.0, 3.0), 40);
  const int l = g.i_of(-0.5), r = g.i_of(0.5);
  CHECK(g.conductor[g.node(l)] == 1);
  CHECK(g.conductor[g.node(l - 1)] == 1);
  CHECK(g.conductor[g.node(r)] == 1);
  CHECK(g.conductor[g.node(r + 1)] == 1);
  CHECK(r - l == 40);
  for (int i = l + 1; i < r; ++i) CHECK(g.conductor[g.node(i)] == 0);
  CHECK(g.conductor[g.node(l - 2)] == 0);
}

TEST_CASE("bad resolutions are rejected") {
  CHECK_THROWS_AS(build_grid(vacuum_domain(1, 2.0), 0), InvalidArgument);
  CHECK_THROWS_AS(build_grid(vacuum_domain(1, 2.0), -3), InvalidArgument);
  CHECK_THROWS_AS(build_grid(vacuum_domain(1, 2.0), 7), InvalidArgument);
  CHECK_THROWS_AS(build_grid(vacuum_domain(1, 2.0), 16, -1.0), InvalidArgument);
}

TEST_CASE("plates outside the domain are rejected") {
  CHECK_THROWS_AS(build_grid(parallel_plates(1.0, 0.9), 20), GeometryError);
  GeometrySpec g = parallel_plates(1.0, 1.05);
  CHECK_THROWS_AS(build_grid(g, 40), GeometryError);
}

TEST_CASE("single-point surface") {
  GeometrySpec geom = parallel_plates(1.0, 3.0);
  MaterialGrid g = build_grid(geom, 40);
  SurfacePlan p = surface_points(geom, g);
  REQUIRE(p.points.size() == 1);
  CHECK(p.points[0].comp == 0);
  CHECK(p.points[0].weight == 1.0);
  CHECK(p.points[0].node == g.node(g.i_of(0.0)));
  CHECK(p.vacuum_subtraction);
}

TEST_CASE("closed 1D surface around the left plate") {
  GeometrySpec geom = parallel_plates(1.0, 4.0);
  geom.surface.mode = SurfaceMode::Closed;
  MaterialGrid g = build_grid(geom, 20);
  SurfacePlan p = surface_points(geom, g);
  REQUIRE(p.points.size() == 2);
  CHECK(p.points[0].weight == -1.0);
  CHECK(p.points[1].weight == 1.0);
  CHECK(p.points[0].weight + p.points[1].weight == 0.0);
  CHECK(g.x_of(g.node_i(p.points[1].node)) == doctest::Approx(0.0));
  CHECK(g.node_i(p.points[0].node) < g.i_of(-0.5) - 1);
  CHECK_FALSE(p.vacuum_subtraction);
}

TEST_CASE("2D rectangle weights sum to edge lengths and close") {
  GeometrySpec geom = vacuum_domain(2, 3.0, 3.0);
  geom.surface.mode = SurfaceMode::Closed;
  geom.surface.x_min_in_a = -0.5;
  geom.surface.x_max_in_a = 0.5;
  geom.surface.y_min_in_a = -0.25;
  geom.surface.y_max_in_a = 0.25;
  MaterialGrid g = build_grid(geom, 16);
  SurfacePlan p = surface_points(geom, g);
  double left = 0, right = 0, bottom = 0, top = 0, sx = 0, sy = 0;
  for (const auto& s : p.points) {
    (s.comp == 0 ? sx : sy) += s.weight;
    if (s.comp == 0) (s.weight < 0 ? left : right) += std::abs(s.weight);
    if (s.comp == 1) (s.weight < 0 ? bottom : top) += std::abs(s.weight);
  }
  CHECK(left == doctest::Approx(0.5));
  CHECK(right == doctest::Approx(0.5));
  CHECK(bottom == doctest::Approx(1.0));
  CHECK(top == doctest::Approx(1.0));
  CHECK(sx == doctest::Approx(0.0));
  CHECK(sy == doctest::Approx(0.0));
}

TEST_CASE("surfaces touching conductors or non-uniform media are rejected") {
  GeometrySpec geom = parallel_plates(1.0, 3.0);
  geom.surface.x_in_a = -0.5 + 1.0 / 40;
  MaterialGrid g = build_grid(geom, 40);
  CHECK_THROWS_AS(surface_points(geom, g), GeometryError);

  GeometrySpec d = parallel_plates(1.0, 3.0);
  d.plates[0].conductor = false;
  d.plates[0].epsilon = 2.0;
  d.plates[0].thickness_cells = 10;
  d.surface.x_in_a = -0.5 - 5.0 / 40;
  MaterialGrid gd = build_grid(d, 40);
  CHECK_THROWS_AS(surface_points(d, gd), GeometryError);
  CHECK(gd.eps[gd.node(gd.i_of(-0.5) - 3)] == 2.0);
}

TEST_CASE("conductor masks nest under refinement") {
  GeometrySpec geom = parallel_plates(1.0, 3.0);
  MaterialGrid c = build_grid(geom, 20), f = build_grid(geom, 40);
  REQUIRE(f.nx == 2 * c.nx);
  for (int i = 0; i <= c.nx; ++i)
    if (f.conductor[f.node(2 * i)]) CHECK(c.conductor[c.node(i)] == 1);
}

TEST_CASE("2D plates span the requested y range") {
  GeometrySpec geom = vacuum_domain(2, 3.0, 2.0);
  PlateSpec p;
  p.face_in_a = 0.0;
  p.y_min_in_a = -0.5;
  p.y_max_in_a = 0.5;
  geom.plates.push_back(p);
  MaterialGrid g = build_grid(geom, 10);
  CHECK(g.conductor[g.node(g.i_of(0.0), g.j_of(0.0))] == 1);
  CHECK(g.conductor[g.node(g.i_of(0.0), g.j_of(0.8))] == 0);
}
