#pragma once
// Solved-trajectory container shared by every run type, its extraction from a
// solver point, the cost accounting, and the property audits (conservation,
// storage balances, bounds, thermal replay agreement).

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "dcflex/config.hpp"
#include "dcflex/cooling.hpp"
#include "dcflex/storage.hpp"
#include "dcflex/workload.hpp"

namespace dcflex {

struct ScheduleSolution {
  int first_slot = 0;  // global slot of local index 0
  int n_slots = 0;
  double od_kw = 0.0;
  double slot_hours = 0.25;

  // Per local slot.
  std::vector<double> price_gbp_per_mwh;
  std::vector<double> p_grid_it, p_ups_ch, p_ups_disch, p_chil_crac, p_chil_tes;
  std::vector<double> q_tes_crac, q_cool, p_pw, u_tot, u_fixed;
  // Per state boundary (n_slots + 1).
  std::vector<double> e_ups, e_tes;
  std::vector<std::array<double, kNumNodes>> temps;

  std::vector<AllocPiece> allocations;

  double cost_total_gbp = 0.0;  // over the full local window
  double cost_main_gbp = 0.0;   // restricted to global slots < main_slots
  double cost_pass1_gbp = 0.0;  // cost-only optimum before shift tie-breaking
  std::string status;

  // Total grid draw at local slot i, overhead included.
  double grid_kw(int i) const {
    size_t s = static_cast<size_t>(i);
    return p_grid_it[s] + od_kw + p_ups_ch[s] + p_chil_crac[s] + p_chil_tes[s];
  }
  int global_slot(int i) const { return first_slot + i; }
};

// Populates a ScheduleSolution from a solver point over the given blocks.
ScheduleSolution extract_schedule(const std::vector<double>& x, const ITBlock& it,
                                  const UPSBlock& ups, const CoolingBlock& cool,
                                  const std::vector<int>& p_grid_it_vars,
                                  const FacilityConfig& cfg, int first_slot);

// Time-constant overhead draw implied by a base-case schedule: 7% of the mean
// IT-plus-CRAC grid power over the main day.
double compute_overhead_power(const ScheduleSolution& base, const TimeGrid& grid);

struct AuditOptions {
  // Profile demands for work conservation (full-horizon runs only).
  const WorkloadProfile* profile = nullptr;
  double ca_max_override = 0.0;      // widened cold-aisle bound, 0 = configured
  bool expect_cyclic_ups = false;    // e_ups(end) == e_ups(0)
  bool expect_cyclic_tes = false;    // e_tes(end) == e_tes(0)
  int cycle_end_index = -1;          // state index the cyclic checks bind, -1 = last
  double energy_tol_kwh = 1e-4;
  double replay_tol_c = 1e-6;
  double power_tol_kw = 1e-6;
};

// Runs every property audit and returns human-readable failure strings
// (empty = all pass): work conservation, UPS/TES telescoping balances,
// cyclic endpoints, charge/discharge exclusivity, chiller capacity,
// temperature bounds, and thermal-replay agreement.
std::vector<std::string> audit_schedule(const ScheduleSolution& s, const FacilityConfig& cfg,
                                        const AuditOptions& opts);

}  // namespace dcflex
