#pragma once

#include <map>
#include <vector>

#include "casimir/engine.hpp"
#include "casimir/kernel.hpp"
#include "casimir/lattice.hpp"

namespace casimir {

struct ResponseKey {
  Gauge gauge;
  Site source;
  Site probe;
  auto operator<=>(const ResponseKey&) const = default;
};

using ResponseMap = std::map<ResponseKey, std::vector<double>>;

// One simulation: a source and the probes recorded from it.
struct Measurement {
  SourceSpec source;
  std::vector<Site> probes;
};

// Sources needed by the stress tensor on `plan`, one per (gauge, site),
// in a fixed order.
std::vector<Measurement> plan_measurements(const MaterialGrid& g, const SurfacePlan& plan);

struct GammaSeries {
  int component = 0;
  double dt = 0;
  std::vector<double> e;  // electric-gauge part
  std::vector<double> h;  // magnetic-gauge part
  bool vacuum_subtracted = false;
};

GammaSeries gamma_accumulate(const ResponseMap& responses, const SurfacePlan& plan,
                             const MaterialGrid& g, int component);

// a - vac over the common length, flagged as vacuum subtracted.
GammaSeries subtract_vacuum(const GammaSeries& a, const GammaSeries& vac);

// Running Im (1/pi) sum_m g(-t_m) (GammaE_m + GammaH_m) dt, with both parts
// paired to the half-step kernel table.
std::vector<double> partial_force(const KernelSeries& k, const GammaSeries& gamma);

struct ForceResult {
  int component = 0;
  std::vector<double> t;
  std::vector<double> force;
  std::vector<double> delta;
  double force_inf = 0;
  double truncation_time = 0;
  double delta_at_truncation = 0;
  double tolerance = 0;
  bool converged = false;
  double best_delta = 0;  // max of delta over the trailing window
};

struct ConvergenceOptions {
  double tolerance = 1e-3;
  double window = 10.0;   // time units; five cavity round trips
  double min_time = 0.0;
  double scale_floor = 0.0;  // lower bound on |F_inf| in the relative error
};

// Fills force_inf, delta and truncation time. Does not throw.
ForceResult evaluate_convergence(std::vector<double> force, double dt,
                                 const ConvergenceOptions& opt, int component = 0);

// As evaluate_convergence, but throws BudgetExceeded when the bound is not met.
ForceResult convergence(std::vector<double> force, double dt, const ConvergenceOptions& opt,
                        int component = 0);

// Infinite-time force of a single stress point in the infinite uniform
// 1D lattice, Im (1/pi) int_0^{pi/dt} g_d(xi) GammaVac(xi) dxi.
double lattice_vacuum_force(double sigma, double dx, double dt, double eps = 1.0,
                            double mu = 1.0);

// Point value of the infinite 1D lattice Green function solving
// ((2 G_k - G_{k+1} - G_{k-1}) / dx^2 - z G_k) = delta_k0 / dx.
cplx lattice_green_1d(cplx z, double dx);

}  // namespace casimir
