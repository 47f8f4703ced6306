#pragma once
// IT scheduling block: deferrable-job allocation variables over execution
// windows, completion and capacity coupling, the piecewise-linearized server
// power per slot, and the grid/billing coupling that lets battery discharge
// offset IT draw.

#include <vector>

#include "dcflex/model.hpp"
#include "dcflex/tables.hpp"

namespace dcflex {

// One deferrable job: demand_u CPU-fraction to place within [first, last]
// (local slot indices, inclusive). `origin` is the global arrival slot used
// for shift accounting; `tranche` its class label.
struct JobSpec {
  int first = 0;
  int last = 0;
  double demand_u = 0.0;
  int origin = 0;
  int tranche = 0;
};

struct ITBlock {
  int n_slots = 0;
  std::vector<JobSpec> jobs;
  std::vector<int> job_var_first;  // allocation var of jobs[j] at slot jobs[j].first
  std::vector<int> u_tot;          // total utilisation per local slot
  std::vector<int> p_pw;           // linearized IT power per local slot
};

// One executed allocation in a solved schedule: u CPU-fraction of the job
// arriving at `origin` (class `tranche`) runs at global slot `exec`.
struct AllocPiece {
  int origin = 0;
  int tranche = 0;
  int exec = 0;
  double u = 0.0;
};

// Emits allocation variables (one per job per window slot), job-completion
// equalities, per-slot capacity via the bounded total-utilisation variable,
// and the piecewise power curve per slot. `order_binaries[i]` adds the
// fill-order binaries on slot i (needed only where power is pressed upward).
ITBlock add_it_scheduling(ModelInstance& m, const std::vector<JobSpec>& jobs,
                          const std::vector<double>& u_fixed, const PiecewiseCurve& curve,
                          double u_max, const std::vector<char>& order_binaries);

// Billing coupling per slot: p_grid_it = p_pw - p_base_sub - p_disch, with
// p_grid_it >= 0. `p_base_sub` is the linearized always-on baseline power
// subtracted on extension slots (zero on main slots). Returns the p_grid_it
// variable ids.
std::vector<int> add_it_grid_coupling(ModelInstance& m, const ITBlock& it,
                                      const std::vector<int>& p_disch,
                                      const std::vector<double>& p_base_sub);

// Builds the full-horizon job list of a cost-optimisation run from the
// workload profile (arrival slot x tranche, windows clipped to the horizon).
std::vector<JobSpec> jobs_from_profile(const WorkloadProfile& profile, const TimeGrid& grid);

// CPU-hours executed at each shift distance (slots), from extracted
// allocation values.
std::vector<double> shift_histogram(const std::vector<AllocPiece>& allocations,
                                    double slot_hours, int max_shift);

}  // namespace dcflex
