#include "casimir/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "casimir/errors.hpp"
#include "casimir/units.hpp"

namespace casimir {

namespace {

struct Span {
  int lo, hi;
};

Span plate_x_span(const PlateSpec& p, const MaterialGrid& g) {
  int f = g.i_of(p.face_in_a);
  return p.extends_left ? Span{f - p.thickness_cells, f}
                        : Span{f, f + p.thickness_cells};
}

Span plate_y_span(const PlateSpec& p, const MaterialGrid& g) {
  if (g.dims == 1) return {0, 0};
  int lo = std::isfinite(p.y_min_in_a) ? g.j_of(p.y_min_in_a) : 0;
  int hi = std::isfinite(p.y_max_in_a) ? g.j_of(p.y_max_in_a) : g.ny;
  return {std::max(lo, 0), std::min(hi, g.ny)};
}

}  // namespace

void GeometrySpec::validate() const {
  if (dims != 1 && dims != 2)
    throw InvalidArgument("dimensions must be 1 or 2");
  if (!(length_x_in_a > 0))
    throw GeometryError("domain length must be positive");
  if (dims == 2 && !(length_y_in_a > 0))
    throw GeometryError("2D domain needs a positive y length");
  if (!(separation_in_a > 0))
    throw GeometryError("plate separation must be positive");
  if (!(epsilon >= 1) || !(mu >= 1))
    throw GeometryError("background epsilon and mu must be >= 1");
  for (std::size_t k = 0; k < plates.size(); ++k) {
    const auto& p = plates[k];
    std::string tag = "plate " + std::to_string(k) + ": ";
    if (p.thickness_cells < 0)
      throw GeometryError(tag + "negative thickness");
    if (!(std::abs(p.face_in_a) < 0.5 * length_x_in_a))
      throw GeometryError(tag + "face lies outside the domain");
    if (!p.conductor && (!(p.epsilon >= 1) || !(p.mu >= 1)))
      throw GeometryError(tag + "epsilon and mu must be >= 1");
    if (p.y_min_in_a > p.y_max_in_a)
      throw GeometryError(tag + "empty y range");
  }
}

GeometrySpec parallel_plates(double h, double length_x, int thickness_cells) {
  GeometrySpec g;
  g.dims = 1;
  g.length_x_in_a = length_x;
  g.separation_in_a = h;
  PlateSpec left;
  left.face_in_a = -0.5 * h;
  left.extends_left = true;
  left.thickness_cells = thickness_cells;
  PlateSpec right = left;
  right.face_in_a = 0.5 * h;
  right.extends_left = false;
  g.plates = {left, right};
  return g;
}

GeometrySpec vacuum_domain(int dims, double length_x, double length_y) {
  GeometrySpec g;
  g.dims = dims;
  g.length_x_in_a = length_x;
  g.length_y_in_a = length_y;
  g.surface.x_in_a = 0.0;
  return g;
}

int MaterialGrid::i_of(double x) const {
  return static_cast<int>(std::lround((x - x0) / dx));
}

int MaterialGrid::j_of(double y) const {
  return static_cast<int>(std::lround((y - y0) / dx));
}

MaterialGrid build_grid(const GeometrySpec& geom, int resolution,
                        double sigma_user, double courant) {
  if (resolution <= 0)
    throw InvalidArgument("resolution must be positive");
  if (resolution < 8)
    throw InvalidArgument("resolution must be at least 8 cells per a");
  if (!(sigma_user >= 0))
    throw InvalidArgument("sigma must be >= 0 (gain media are not allowed)");
  if (!(courant > 0) || courant > 1.0)
    throw ConfigurationError("Courant factor must lie in (0, 1]");
  geom.validate();

  MaterialGrid g;
  g.dims = geom.dims;
  g.dx = 1.0 / resolution;
  g.dt = courant_dt(g.dx, g.dims, courant);
  g.sigma_user = sigma_user;
  g.sigma = from_2pi_units(sigma_user);
  g.background_eps = geom.epsilon;
  g.background_mu = geom.mu;

  g.nx = 2 * static_cast<int>(std::lround(0.5 * geom.length_x_in_a * resolution));
  g.ny = geom.dims == 2
             ? 2 * static_cast<int>(std::lround(0.5 * geom.length_y_in_a * resolution))
             : 0;
  if (g.nx < 4 || (g.dims == 2 && g.ny < 4))
    throw GeometryError("domain is too small for this resolution");
  g.x0 = -0.5 * g.nx * g.dx;
  g.y0 = -0.5 * g.ny * g.dx;

  const int nxp = g.nx + 1, nyp = g.ny + 1;
  g.eps.assign(static_cast<std::size_t>(nxp) * nyp, geom.epsilon);
  g.conductor.assign(g.eps.size(), 0);
  g.mu_y.assign(static_cast<std::size_t>(g.nx) * nyp, geom.mu);
  if (g.dims == 2) g.mu_x.assign(static_cast<std::size_t>(nxp) * g.ny, geom.mu);

  for (int j = 0; j <= g.ny; ++j) {
    g.conductor[g.node(0, j)] = 1;
    g.conductor[g.node(g.nx, j)] = 1;
  }
  if (g.dims == 2)
    for (int i = 0; i <= g.nx; ++i) {
      g.conductor[g.node(i, 0)] = 1;
      g.conductor[g.node(i, g.ny)] = 1;
    }

  for (std::size_t k = 0; k < geom.plates.size(); ++k) {
    const auto& p = geom.plates[k];
    Span xs = plate_x_span(p, g), ys = plate_y_span(p, g);
    if (xs.lo <= 0 || xs.hi >= g.nx)
      throw GeometryError("plate " + std::to_string(k) +
                          " does not lie strictly inside the domain");
    for (int j = ys.lo; j <= ys.hi; ++j)
      for (int i = xs.lo; i <= xs.hi; ++i) {
        if (p.conductor)
          g.conductor[g.node(i, j)] = 1;
        else
          g.eps[g.node(i, j)] = p.epsilon;
      }
    if (!p.conductor) {
      for (int j = ys.lo; j <= ys.hi; ++j)
        for (int i = xs.lo; i < xs.hi; ++i) g.mu_y[g.hy(i, j)] = p.mu;
      if (g.dims == 2)
        for (int j = ys.lo; j < ys.hi; ++j)
          for (int i = xs.lo; i <= xs.hi; ++i) g.mu_x[g.hx(i, j)] = p.mu;
    }
  }
  return g;
}

void check_uniform_site(const MaterialGrid& g, std::size_t node) {
  if (node >= g.n_nodes()) throw GeometryError("surface point outside the grid");
  const int i = g.node_i(node), j = g.node_j(node);
  auto fail = [&](const char* why) {
    throw GeometryError("surface point at node (" + std::to_string(i) + ", " +
                        std::to_string(j) + ") " + why);
  };
  if (i < 1 || i > g.nx - 1 || (g.dims == 2 && (j < 1 || j > g.ny - 1)))
    fail("touches the outer wall");
  if (g.conductor[node] || g.conductor[g.node(i - 1, j)] || g.conductor[g.node(i + 1, j)])
    fail("touches a conductor");
  if (g.eps[node] != g.background_eps) fail("is not in the background medium");
  if (g.mu_y[g.hy(i - 1, j)] != g.background_mu || g.mu_y[g.hy(i, j)] != g.background_mu)
    fail("is not in the background medium");
  if (g.dims == 2) {
    if (g.conductor[g.node(i, j - 1)] || g.conductor[g.node(i, j + 1)])
      fail("touches a conductor");
    if (g.mu_x[g.hx(i, j - 1)] != g.background_mu || g.mu_x[g.hx(i, j)] != g.background_mu)
      fail("is not in the background medium");
  }
}

SurfacePlan surface_points(const GeometrySpec& geom, const MaterialGrid& g) {
  const SurfaceSpec& s = geom.surface;
  SurfacePlan plan;

  if (s.mode == SurfaceMode::SinglePoint) {
    if (g.dims != 1)
      throw GeometryError("single-point surfaces are only defined in 1D");
    double x = s.x_in_a;
    if (std::isnan(x))
      x = geom.plates.size() >= 2
              ? 0.5 * (geom.plates[0].face_in_a + geom.plates[1].face_in_a)
              : 0.0;
    std::size_t n = g.node(g.i_of(x));
    check_uniform_site(g, n);
    plan.points.push_back({n, 0, 1.0});
    plan.vacuum_subtraction = true;
    return plan;
  }

  if (g.dims == 1) {
    if (s.enclose_plate < 0 || s.enclose_plate >= static_cast<int>(geom.plates.size()))
      throw GeometryError("closed surface must enclose an existing plate");
    const auto& p = geom.plates[static_cast<std::size_t>(s.enclose_plate)];
    Span xs = plate_x_span(p, g);
    double d = std::isnan(s.offset_in_a) ? 0.5 * geom.separation_in_a : s.offset_in_a;
    int off = static_cast<int>(std::lround(d / g.dx));
    if (off < 1) throw GeometryError("closed surface offset is below one cell");
    std::size_t left = g.node(xs.lo - off), right = g.node(xs.hi + off);
    if (xs.lo - off < 1 || xs.hi + off > g.nx - 1)
      throw GeometryError("closed surface leaves the domain");
    check_uniform_site(g, left);
    check_uniform_site(g, right);
    plan.points.push_back({left, 0, -1.0});
    plan.points.push_back({right, 0, 1.0});
    return plan;
  }

  const int i0 = g.i_of(s.x_min_in_a), i1 = g.i_of(s.x_max_in_a);
  const int j0 = g.j_of(s.y_min_in_a), j1 = g.j_of(s.y_max_in_a);
  if (i1 <= i0 || j1 <= j0) throw GeometryError("closed surface rectangle is empty");
  if (i0 < 1 || j0 < 1 || i1 > g.nx - 1 || j1 > g.ny - 1)
    throw GeometryError("closed surface leaves the domain");
  auto add = [&](int i, int j, int comp, double w) {
    std::size_t n = g.node(i, j);
    check_uniform_site(g, n);
    plan.points.push_back({n, comp, w});
  };
  // trapezoid weights along each edge; corners carry half a face each way
  for (int j = j0; j <= j1; ++j) {
    double w = (j == j0 || j == j1) ? 0.5 * g.dx : g.dx;
    add(i0, j, 0, -w);
    add(i1, j, 0, w);
  }
  for (int i = i0; i <= i1; ++i) {
    double w = (i == i0 || i == i1) ? 0.5 * g.dx : g.dx;
    add(i, j0, 1, -w);
    add(i, j1, 1, w);
  }
  return plan;
}

}  // namespace casimir
