#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

namespace casimir {

// A slab bounded in x by a face and a thickness counted in grid cells.
// `extends_left` plates have their face on the +x side.
struct PlateSpec {
  double face_in_a = 0.0;
  bool extends_left = true;
  int thickness_cells = 1;
  bool conductor = true;
  double epsilon = 1.0;  // used when not a conductor
  double mu = 1.0;
  // 2D only; infinite bounds span the whole domain.
  double y_min_in_a = -std::numeric_limits<double>::infinity();
  double y_max_in_a = std::numeric_limits<double>::infinity();
};

enum class SurfaceMode { SinglePoint, Closed };

struct SurfaceSpec {
  SurfaceMode mode = SurfaceMode::SinglePoint;
  // single point; NaN means midway between the first two plates
  double x_in_a = std::numeric_limits<double>::quiet_NaN();
  double y_in_a = 0.0;
  // 1D closed: two points at `offset_in_a` outside each face of plate
  // `enclose_plate` (NaN offset means half the plate separation)
  int enclose_plate = 0;
  double offset_in_a = std::numeric_limits<double>::quiet_NaN();
  // 2D closed rectangle
  double x_min_in_a = 0, x_max_in_a = 0, y_min_in_a = 0, y_max_in_a = 0;
};

struct GeometrySpec {
  int dims = 1;
  double length_x_in_a = 4.0;
  double length_y_in_a = 0.0;  // 2D only
  double separation_in_a = 1.0;
  double epsilon = 1.0;
  double mu = 1.0;
  std::vector<PlateSpec> plates;
  SurfaceSpec surface;

  void validate() const;
};

// Two conductor plates with inner faces at -h/2 and +h/2.
GeometrySpec parallel_plates(double h, double length_x, int thickness_cells = 1);
GeometrySpec vacuum_domain(int dims, double length_x, double length_y = 0.0);

// Yee grid. 1D keeps the Ez/Hy pair of the 2D TM grid.
//   Ez at nodes (i, j),         i = 0..nx, j = 0..ny
//   Hx at (i, j + 1/2),         i = 0..nx, j = 0..ny-1
//   Hy at (i + 1/2, j),         i = 0..nx-1, j = 0..ny
// with ny = 0 in 1D.
struct MaterialGrid {
  int dims = 1;
  int nx = 0, ny = 0;
  double dx = 0, dt = 0;
  double sigma = 0;       // angular, c/a
  double sigma_user = 0;  // 2*pi*c/a
  double x0 = 0, y0 = 0;  // coordinates of node (0, 0)
  double background_eps = 1, background_mu = 1;

  std::vector<double> eps;             // Ez nodes
  std::vector<double> mu_x;            // Hx sites (2D)
  std::vector<double> mu_y;            // Hy sites
  std::vector<std::uint8_t> conductor; // Ez nodes, walls included

  std::size_t node(int i, int j = 0) const {
    return static_cast<std::size_t>(j) * (nx + 1) + i;
  }
  std::size_t hx(int i, int j) const {
    return static_cast<std::size_t>(j) * (nx + 1) + i;
  }
  std::size_t hy(int i, int j = 0) const {
    return static_cast<std::size_t>(j) * nx + i;
  }
  std::size_t n_nodes() const { return eps.size(); }
  int node_i(std::size_t n) const { return static_cast<int>(n % (nx + 1)); }
  int node_j(std::size_t n) const { return static_cast<int>(n / (nx + 1)); }
  double x_of(int i) const { return x0 + i * dx; }
  double y_of(int j) const { return y0 + j * dx; }
  int i_of(double x) const;
  int j_of(double y) const;
};

MaterialGrid build_grid(const GeometrySpec& geom, int resolution,
                        double sigma_user = 1.0, double courant = 0.5);

// One stress-tensor sample: node index, normal component (0 = x, 1 = y)
// and the surface element dS along that component.
struct SurfacePoint {
  std::size_t node;
  int comp;
  double weight;
};

struct SurfacePlan {
  std::vector<SurfacePoint> points;
  bool vacuum_subtraction = false;
};

SurfacePlan surface_points(const GeometrySpec& geom, const MaterialGrid& grid);

// Throws GeometryError unless every field sample used at `node` sits in
// background material away from conductors.
void check_uniform_site(const MaterialGrid& grid, std::size_t node);

}  // namespace casimir
