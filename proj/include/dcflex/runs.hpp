#pragma once
// The two whole-facility runs: the fixed-setpoint base case (no flexibility,
// no storage) and the integrated cost optimisation with its shift-minimising
// second pass.

#include <string>
#include <vector>

#include "dcflex/backend.hpp"
#include "dcflex/piecewise.hpp"
#include "dcflex/schedule.hpp"

namespace dcflex {

struct BaseRunResult {
  ScheduleSolution schedule;          // full extended horizon, simulated
  double overhead_estimate_kw = 0.0;  // 7%-of-IT+CRAC rule applied to this run
  std::vector<std::string> warnings;
};

// Everything inflexible and executed at arrival, cold aisle held at its
// setpoint, storage idle. Closed-form simulation; throws if the pinned
// setpoint is thermally infeasible.
BaseRunResult run_scenario1(const FacilityConfig& cfg, const WorkloadProfile& profile);

struct OptimisedRunResult {
  ScheduleSolution schedule;  // extended horizon; empty if pass 1 failed
  PiecewiseCurve curve;
  SolveStatus pass1_status = SolveStatus::Error;
  SolveStatus pass2_status = SolveStatus::Error;
  double pass1_cost_gbp = 0.0;           // overhead-inclusive cost-only optimum
  double linearization_audit_kwh = 0.0;  // |exact - linearized| IT energy
  std::vector<std::string> warnings;

  bool ok() const { return schedule.n_slots > 0; }
};

// Integrated MILP over the extended horizon. Pass 1 minimises cost; pass 2
// minimises total shift among schedules within the configured slack of the
// pass-1 optimum, making the baseline allocation reproducible.
OptimisedRunResult run_scenario2(const FacilityConfig& cfg, const WorkloadProfile& profile,
                                 SolverBackend& backend);

}  // namespace dcflex
