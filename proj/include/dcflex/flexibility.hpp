#pragma once
// Duration-aware flexibility quantification around an optimised baseline:
// pending-work retranching, the clipped-window feasibility model with pinned
// boundary states, guarded binary search for the longest sustainable
// deviation, and the (t0, delta-P) sweep.

#include <array>
#include <map>
#include <string>
#include <vector>

#include "dcflex/backend.hpp"
#include "dcflex/piecewise.hpp"
#include "dcflex/schedule.hpp"

namespace dcflex {

// One unexecuted-or-future piece of flexible work carried from the baseline:
// `u` CPU-fraction scheduled at global slot `exec`, re-deferrable by up to
// `rem` further slots (original tolerance minus the shift already applied).
struct PendingPiece {
  int exec = 0;
  int rem = 0;
  double u = 0.0;
};

// Pending work as seen from t0: pieces still flexible (rem >= 1) plus the
// amounts folded into the inflexible share because their tolerance is spent.
struct RetranchedProfile {
  int t0 = 0;
  std::vector<PendingPiece> pending;
  std::vector<std::pair<int, double>> folded;  // (global slot, CPU-fraction)
  double pending_cpu_hours = 0.0;              // over `pending` only
};

// Rebuilds the pending-work ledger at t0 from baseline allocations: remaining
// tolerance = (origin + original tolerance) - execution slot, clamped to
// [0, max_rem]. Throws if t0 is outside the main horizon.
RetranchedProfile retranche(const std::vector<AllocPiece>& allocations,
                            const std::array<int, kNumTranches>& d_k, double slot_hours,
                            int t0, int main_slots, int max_rem = 12);

// Immutable per-baseline context shared by every cell of a sweep.
struct FlexBaseline {
  // Per global slot (total horizon).
  std::vector<double> p_grid;  // total draw incl overhead
  std::vector<double> p_grid_it, p_ups_ch, p_ups_disch, p_chil_crac, p_chil_tes;
  std::vector<double> u_inflex;
  std::vector<double> p_base_sub;  // extension-slot billing baseline
  // Per state boundary (total + 1).
  std::vector<double> e_ups, e_tes;
  std::vector<std::array<double, kNumNodes>> temps;
  std::vector<PendingPiece> pieces;  // full ledger, every execution slot
  double daily_peak_kw = 0.0;        // max of p_grid
  PiecewiseCurve curve;
};

FlexBaseline make_flex_baseline(const ScheduleSolution& optimised,
                                const WorkloadProfile& profile, const FacilityConfig& cfg);

struct FlexProbeResult {
  bool feasible = false;
  SolveStatus status = SolveStatus::Error;
  double cost_gbp = 0.0;  // window variable cost at the optimum
  // Deviation schedule (want_solution only), one entry per window slot.
  std::vector<int> slots;
  std::vector<double> d_it, d_ups, d_crac, d_tes, d_total;
};

// Feasibility of holding grid draw at baseline + delta_p for slots
// [t0, t0+tau] with a 12-slot recovery back to the baseline state. `fast`
// probes with the loose feasibility gap; `want_solution` solves tight and
// extracts the per-asset deviation schedule.
FlexProbeResult check_flex_feasible(const FlexBaseline& base, int t0, double delta_p, int tau,
                                    const FacilityConfig& cfg, SolverBackend& backend,
                                    bool fast, bool want_solution);

struct FlexibilityCell {
  int t0 = 0;
  double delta_p_kw = 0.0;
  int tau_slots = 0;
  double tau_hours = 0.0;
  std::string status;  // resolved | zero | horizon-capped | error
  std::vector<std::string> anomalies;
  int probes = 0;
  // Asset deviations at the resolved duration (feasible cells only).
  std::vector<int> slots;
  std::vector<double> d_it, d_ups, d_crac, d_tes, d_total;
};

// Longest feasible tau by doubling + bisection over probed facts, with a
// post-search monotonicity guard (cached feasible probe beyond the result, or
// a feasible result+1) that falls back to an upward linear scan and records
// the anomaly. `seed_tau` >= 0 brackets the search from a previous cell.
FlexibilityCell max_duration(const FlexBaseline& base, int t0, double delta_p,
                             const FacilityConfig& cfg, SolverBackend& backend,
                             int seed_tau = -1);

// Exhaustive scan from tau = 0 upward; the oracle for max_duration.
FlexibilityCell linear_max_duration(const FlexBaseline& base, int t0, double delta_p,
                                    const FacilityConfig& cfg, SolverBackend& backend);

// Resolves every (t0, delta_p) cell; results sorted by t0 then delta_p.
// Columns (fixed delta_p) are chained for search seeding and may run in
// parallel across `jobs` backends; the outcome is identical for any `jobs`.
std::vector<FlexibilityCell> flex_sweep(const FlexBaseline& base,
                                        const std::vector<int>& t0_grid,
                                        const std::vector<double>& dp_grid,
                                        const FacilityConfig& cfg, int jobs);

}  // namespace dcflex
