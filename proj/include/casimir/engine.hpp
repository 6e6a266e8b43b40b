#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "casimir/lattice.hpp"

namespace casimir {

enum class Gauge { Electric, Magnetic };
enum class Field { Ez, Hx, Hy };

const char* gauge_name(Gauge g);

// A field sample location. For Hx the site is (i, j + 1/2); for Hy it is
// (i + 1/2, j); in 1D j is always 0.
struct Site {
  Field field = Field::Ez;
  int i = 0;
  int j = 0;
  bool operator==(const Site&) const = default;
  auto operator<=>(const Site&) const = default;
};

// Electric gauge drives Ez with an electric current and damps E.
// Magnetic gauge drives Hx or Hy with a magnetic current and damps H.
struct SourceSpec {
  Site site;
  Gauge gauge = Gauge::Electric;
  double amplitude = 1.0;
};

std::size_t site_index(const MaterialGrid& g, const Site& s);
void check_site(const MaterialGrid& g, const Site& s);
void check_source(const MaterialGrid& g, const SourceSpec& src);

// Impulse-response state. The source fires during the first damped update,
// with current amplitude / (dt * dx^d).
struct FieldState {
  FieldState(const MaterialGrid& grid, const SourceSpec& src);

  std::vector<double> ez, hx, hy;
  long step = 0;
  double dt = 0;
  SourceSpec source;
  // node box that may hold nonzero fields, grown one cell per step
  int ilo = 0, ihi = 0, jlo = 0, jhi = 0;
  // bounds of the region connected to the source (1D)
  int clo = 0, chi = 0;
};

void step_electric(FieldState& s, const MaterialGrid& g);
void step_magnetic(FieldState& s, const MaterialGrid& g);
void step(FieldState& s, const MaterialGrid& g);

double probe_value(const FieldState& s, const MaterialGrid& g, const Site& p);

// Energy straddling one step. `prev` is the state before and `cur` the
// state after the same step; conserved exactly when sigma = 0.
double staggered_energy(const MaterialGrid& g, Gauge gauge,
                        const FieldState& prev, const FieldState& cur);

// Per-probe raw values after each step. Sample m sits (m + 1/2) dt after
// the source current.
std::vector<std::vector<double>> run_impulse(const MaterialGrid& g,
                                             const SourceSpec& src, long n_steps,
                                             const std::vector<Site>& probes);

// Sum_m f_m exp(i xi (m + offset) dt) dt.
std::complex<double> dtft(const std::vector<double>& series, double xi, double dt,
                          double offset = 0.0);

}  // namespace casimir
