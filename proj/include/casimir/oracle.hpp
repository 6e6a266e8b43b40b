#pragma once

#include <vector>

#include "casimir/engine.hpp"
#include "casimir/kernel.hpp"
#include "casimir/lattice.hpp"

namespace casimir {

// exp(i xi d) / (i xi); xi must be positive.
cplx vacuum_green_1d(double xi, double d);
// The same expression continued onto the conductivity contour omega(xi).
cplx vacuum_green_1d_contour(double xi, double sigma, double d);

// Field of the source's gauge: Ez for electric sources, (Hx, Hy) for magnetic.
struct FdfdField {
  Gauge gauge = Gauge::Electric;
  std::vector<cplx> ez, hx, hy;
  cplx at(const MaterialGrid& g, const Site& s) const;
};

// Solves the frequency-domain operator the leapfrog update realizes at real
// frequency xi: (K - Omega^2 eps) E = i s delta in the electric gauge and the
// dual equation for H in the magnetic gauge. The result equals the
// transform (offset 1/2) of the impulse response.
FdfdField fdfd_solve(const MaterialGrid& g, double xi, const SourceSpec& src);

// (K + xi^2 eps) G = delta (or the magnetic dual): the imaginary-frequency
// Green function at the source site.
double wick_green(const MaterialGrid& g, double xi, const SourceSpec& src);

struct GaussLaguerre {
  std::vector<double> x;
  std::vector<double> w_exp;  // weight times exp(x)
};
GaussLaguerre gauss_laguerre(int n);

struct WickOptions {
  double rel_tol = 1e-6;
  int n_start = 16;
  int n_max = 128;
  int thickness_cells = 1;
};

struct WickResult {
  double force = 0;
  int nodes = 0;
  double rel_change = 0;
};

// Force on the left plate of a 1D cavity along +x (positive = attraction),
// from a single stress point at the centre with the infinite-lattice vacuum
// removed, integrated along imaginary frequency.
WickResult wick_force_1d(double h, int resolution, const WickOptions& opt = {});

// Heat-kernel regularized sum over cavity modes, same sign convention.
double mode_sum_force_1d(double h);

}  // namespace casimir
