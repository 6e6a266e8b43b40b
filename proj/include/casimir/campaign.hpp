#pragma once

#include <functional>
#include <string>
#include <vector>

#include "casimir/config.hpp"
#include "casimir/kernel.hpp"
#include "casimir/stress.hpp"

namespace casimir {

struct SimulationRecord {
  Measurement measurement;
  bool vacuum_reference = false;
  long steps = 0;
  double wall_seconds = 0;  // not deterministic; reported separately
};

struct CampaignResult {
  MaterialGrid grid;
  SurfacePlan surface;
  KernelSeries kernel;
  std::vector<GammaSeries> gammas;  // vacuum subtracted when enabled
  std::vector<ForceResult> forces;
  std::vector<SimulationRecord> simulations;
  double vacuum_force_inf = 0;  // lattice vacuum limit that was removed
  long steps = 0;
  bool converged = false;
};

// Runs sources in parallel in fixed-size chunks until every requested
// component has converged or the time budget is spent.
CampaignResult run_campaign(const RunConfig& cfg);

// Stress-tensor responses of a uniform 1D lattice at one point, the
// reference removed in single-point mode. The domain is sized so wall
// echoes arrive after n_steps; a smaller `length_in_a` is rejected.
GammaSeries vacuum_reference(const MaterialGrid& like, const SurfacePoint& point, long n_steps,
                             double length_in_a = 0.0);

}  // namespace casimir
