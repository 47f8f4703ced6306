#pragma once
// Workload inputs: hourly utilisation ratios and deferral-tolerance
// distributions, expanded to the slot grid.

#include <array>
#include <string>
#include <vector>

#include "dcflex/config.hpp"

namespace dcflex {

inline constexpr int kNumTranches = 4;
// Deferral tolerance of each tranche class, hours.
inline constexpr std::array<double, kNumTranches> kTrancheHours{0.5, 1.0, 2.0, 3.0};

// Raw hourly rows as read from the two CSV tables (fractions, not percent).
struct WorkloadTables {
  std::vector<double> inflex_frac;                        // 24 values
  std::vector<double> flex_frac;                          // 24 values
  std::vector<std::array<double, kNumTranches>> deferral; // 24 rows, each sums to 1
  std::string workload_hash;
  std::string tranches_hash;
};

struct WorkloadProfile {
  // Per-slot demands over the extended horizon; flexible arrivals are zero on
  // extension slots.
  std::vector<double> u_inflex;
  std::vector<double> u_flex_base;
  // Per main slot: fraction of that slot's flexible demand in each tranche.
  std::vector<std::array<double, kNumTranches>> alpha;
  // Tranche deferral tolerances in slots (e.g. {2,4,8,12} at 15-minute slots).
  std::array<int, kNumTranches> d_k{};

  // CPU-hours arriving at main slot t.
  double job_cpu_hours(int t, double slot_hours) const {
    return u_flex_base[static_cast<size_t>(t)] * slot_hours;
  }
};

// Reads the hourly workload-ratio table (hour, inflexible_pct, flexible_pct).
// Throws on malformed rows or ratios outside [0, 100].
WorkloadTables load_workload_tables(const std::string& workload_csv,
                                    const std::string& tranches_csv);

// Expands hourly rows across each hour's slots and normalises deferral rows
// to sum exactly to one. Throws if a deferral row's percentages sum outside
// 100 +/- 0.5 or a combined utilisation exceeds u_max.
WorkloadProfile build_workload_profile(const WorkloadTables& tables, const TimeGrid& grid,
                                       const ITParams& it);

// Exact (non-linearized) baseline IT power per extended slot: all demand
// executed at arrival.
std::vector<double> base_it_power(const WorkloadProfile& profile, const ITParams& it);

}  // namespace dcflex
