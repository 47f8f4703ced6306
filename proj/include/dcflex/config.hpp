#pragma once
// Facility parameters: time grid, IT power curve, UPS battery, thermal
// network, chiller/TES cooling, prices, and solver knobs. Loaded from a
// sectioned INI file with unit-suffixed field names; immutable after load.

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace dcflex {

struct TimeGrid {
  double slot_hours = 0.25;  // duration of one slot, hours
  int main_slots = 96;       // slots in the 24-hour day
  int ext_slots = 12;        // extension slots appended after the day
  int total_slots() const { return main_slots + ext_slots; }
};

struct ITParams {
  double p_idle_kw = 166.7;
  double p_max_kw = 1000.0;
  double u_max = 1.0;
  double exponent = 1.32;  // convex power-law exponent

  // Exact server power at utilisation u.
  double power_kw(double u) const {
    return p_idle_kw + (p_max_kw - p_idle_kw) * std::pow(u, exponent);
  }
};

struct UPSParams {
  double e_base_kwh = 600.0;
  double soc_min = 0.5;
  double soc_max = 1.0;
  double p_ch_min_kw = 40.0;
  double p_ch_max_kw = 270.0;
  double p_disch_min_kw = 100.0;
  double p_disch_max_kw = 2700.0;
  double eta_ch = 0.82;
  double eta_disch = 0.92;
  double soc_start_end = 0.5;
};

// Node order used everywhere a 5-vector of temperatures appears.
enum ThermalNode : int { NODE_IT = 0, NODE_R = 1, NODE_CA = 2, NODE_HA = 3, NODE_AIN = 4 };
inline constexpr int kNumNodes = 5;
inline constexpr const char* kNodeNames[kNumNodes] = {"t_it", "t_r", "t_ca", "t_ha", "t_ain"};

struct ThermalParams {
  double m_dot_air_kg_s = 100.0;
  double c_pa_kj_kgk = 1.005;
  double c_it_kj_k = 17880.0;
  double c_r_kj_k = 18020.0;
  double c_ca_kj_k = 2330.0;
  double c_ha_kj_k = 1170.0;
  double g_cv_kw_k = 109.0;
  double g_cd_kw_k = 4.484;
  double kappa = 0.766;
  double t_out_c = 22.0;
  // Bounds indexed by ThermalNode.
  std::array<double, kNumNodes> t_min_c{18.0, 18.0, 18.0, 18.0, 14.0};
  std::array<double, kNumNodes> t_max_c{60.0, 40.0, 22.5, 40.0, 30.0};
  double t_ca_setpoint_c = 22.5;  // base-case cold-aisle pin / steady-state target
  double air_kw_per_k() const { return m_dot_air_kg_s * c_pa_kj_kgk; }
};

struct CoolingParams {
  double cop_chiller = 5.0;
  double p_chiller_max_kw = 400.0;
  double e_tes_max_kwh = 1000.0;
  double q_tes_ch_max_kwth = 300.0;
  double q_tes_dis_max_kwth = 300.0;
  double eta_tes_ch = 0.9;
  double eta_tes_dis = 0.9;
};

struct EconomicParams {
  std::vector<double> hourly_prices_gbp_per_mwh;  // 24 ordered values
  double p_grid_od_kw = 53.095;  // constant overhead/auxiliary draw
  double p_tol_kw = 0.1;         // flexibility delivery tolerance
};

enum class ReboundPolicy { None, ServiceMagnitude, DailyPeak };
enum class CycleEnd { Extended, Main };

struct SolverParams {
  std::string backend = "scipy-highs";
  int piecewise_segments = 16;
  double piecewise_grading_exponent = 1.5;
  int thermal_substeps = 90;
  double mip_rel_gap = 1e-6;
  double probe_mip_rel_gap = 0.5;
  double time_limit_s = 300.0;
  double baseline_shift_slack = 0.01;
  ReboundPolicy rebound_policy = ReboundPolicy::DailyPeak;
  CycleEnd storage_cycle_end = CycleEnd::Extended;
  double flex_ca_max_c = 23.0;
};

struct FacilityConfig {
  TimeGrid grid;
  ITParams it;
  UPSParams ups;
  ThermalParams thermal;
  CoolingParams cooling;
  EconomicParams econ;
  SolverParams solver;
  std::string source_path;
  std::string source_hash;  // FNV-1a 64-bit of the raw file, hex

  // Price of slot s over the extended horizon; extension slots reuse the
  // first hours of the day.
  double slot_price(int s) const;
  std::vector<double> slot_prices() const;  // one value per total slot
};

// Parses and validates; throws std::runtime_error naming the violated
// invariant or the malformed line.
FacilityConfig load_facility_config(const std::string& path);

// Serialises a config back to the same INI dialect (round-trips through
// load_facility_config to field-by-field equality).
void save_facility_config(const FacilityConfig& cfg, const std::string& path);

// FNV-1a 64-bit hash of a byte string, lowercase hex.
std::string fnv1a_hex(const std::string& bytes);

const char* rebound_policy_name(ReboundPolicy p);
const char* cycle_end_name(CycleEnd c);

}  // namespace dcflex
