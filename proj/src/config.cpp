#include "dcflex/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace dcflex {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

using SectionMap = std::map<std::string, std::map<std::string, std::string>>;

SectionMap parse_ini(const std::string& path, std::string* raw_out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  std::string raw = buf.str();
  if (raw_out) *raw_out = raw;

  SectionMap sections;
  std::istringstream lines(raw);
  std::string line, section;
  int lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw std::runtime_error("config: malformed section at line " + std::to_string(lineno));
      section = trim(t.substr(1, t.size() - 2));
      sections[section];
      continue;
    }
    size_t eq = t.find('=');
    if (eq == std::string::npos || section.empty())
      throw std::runtime_error("config: malformed entry at line " + std::to_string(lineno) +
                               ": " + t);
    std::string key = trim(t.substr(0, eq));
    std::string val = trim(t.substr(eq + 1));
    if (key.empty() || val.empty())
      throw std::runtime_error("config: empty key or value at line " + std::to_string(lineno));
    if (!sections[section].emplace(key, val).second)
      throw std::runtime_error("config: duplicate key " + section + "." + key);
  }
  return sections;
}

class Reader {
 public:
  Reader(const SectionMap& m, const std::string& path) : m_(m), path_(path) {}

  double num(const std::string& sec, const std::string& key) {
    const std::string& v = str(sec, key);
    size_t pos = 0;
    double d;
    try {
      d = std::stod(v, &pos);
    } catch (const std::exception&) {
      throw std::runtime_error("config: " + sec + "." + key + " is not a number: " + v);
    }
    if (pos != v.size())
      throw std::runtime_error("config: " + sec + "." + key + " has trailing text: " + v);
    return d;
  }

  int integer(const std::string& sec, const std::string& key) {
    double d = num(sec, key);
    if (d != std::floor(d))
      throw std::runtime_error("config: " + sec + "." + key + " must be an integer");
    return static_cast<int>(d);
  }

  const std::string& str(const std::string& sec, const std::string& key) {
    auto si = m_.find(sec);
    if (si == m_.end())
      throw std::runtime_error("config: missing section [" + sec + "] in " + path_);
    auto ki = si->second.find(key);
    if (ki == si->second.end())
      throw std::runtime_error("config: missing key " + sec + "." + key + " in " + path_);
    used_[sec].insert(ki->first);
    return ki->second;
  }

  std::vector<double> num_list(const std::string& sec, const std::string& key) {
    std::istringstream ss(str(sec, key));
    std::vector<double> out;
    std::string tok;
    while (ss >> tok) {
      try {
        out.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw std::runtime_error("config: " + sec + "." + key + " has non-numeric entry " + tok);
      }
    }
    return out;
  }

  void check_all_used() const {
    for (const auto& [sec, kvs] : m_) {
      auto ui = used_.find(sec);
      for (const auto& [key, _] : kvs) {
        if (ui == used_.end() || !ui->second.count(key))
          throw std::runtime_error("config: unknown key " + sec + "." + key);
      }
    }
  }

 private:
  const SectionMap& m_;
  std::string path_;
  mutable std::map<std::string, std::set<std::string>> used_;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw std::runtime_error("config: invariant violated: " + what);
}

}  // namespace

std::string fnv1a_hex(const std::string& bytes) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char out[17];
  snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
  return out;
}

const char* rebound_policy_name(ReboundPolicy p) {
  switch (p) {
    case ReboundPolicy::None: return "none";
    case ReboundPolicy::ServiceMagnitude: return "service-magnitude";
    case ReboundPolicy::DailyPeak: return "daily-peak";
  }
  return "?";
}

const char* cycle_end_name(CycleEnd c) {
  return c == CycleEnd::Extended ? "extended" : "main";
}

double FacilityConfig::slot_price(int s) const {
  int per_hour = static_cast<int>(std::lround(1.0 / grid.slot_hours));
  int hour = (s < grid.main_slots) ? s / per_hour : (s - grid.main_slots) / per_hour;
  return econ.hourly_prices_gbp_per_mwh.at(static_cast<size_t>(hour));
}

std::vector<double> FacilityConfig::slot_prices() const {
  std::vector<double> out(static_cast<size_t>(grid.total_slots()));
  for (int s = 0; s < grid.total_slots(); ++s) out[static_cast<size_t>(s)] = slot_price(s);
  return out;
}

FacilityConfig load_facility_config(const std::string& path) {
  std::string raw;
  SectionMap m = parse_ini(path, &raw);
  Reader r(m, path);
  FacilityConfig c;
  c.source_path = path;
  c.source_hash = fnv1a_hex(raw);

  c.grid.slot_hours = r.num("time", "slot_duration_hours");
  c.grid.main_slots = r.integer("time", "main_slots");
  c.grid.ext_slots = r.integer("time", "extension_slots");

  c.it.p_idle_kw = r.num("it", "p_idle_kw");
  c.it.p_max_kw = r.num("it", "p_max_kw");
  c.it.u_max = r.num("it", "u_max");
  c.it.exponent = r.num("it", "exponent");

  c.ups.e_base_kwh = r.num("ups", "e_base_kwh");
  c.ups.soc_min = r.num("ups", "soc_min");
  c.ups.soc_max = r.num("ups", "soc_max");
  c.ups.p_ch_min_kw = r.num("ups", "p_ch_min_kw");
  c.ups.p_ch_max_kw = r.num("ups", "p_ch_max_kw");
  c.ups.p_disch_min_kw = r.num("ups", "p_disch_min_kw");
  c.ups.p_disch_max_kw = r.num("ups", "p_disch_max_kw");
  c.ups.eta_ch = r.num("ups", "eta_ch");
  c.ups.eta_disch = r.num("ups", "eta_disch");
  c.ups.soc_start_end = r.num("ups", "soc_start_end");

  auto& tp = c.thermal;
  tp.m_dot_air_kg_s = r.num("thermal", "m_dot_air_kg_s");
  tp.c_pa_kj_kgk = r.num("thermal", "c_pa_kj_kgk");
  tp.c_it_kj_k = r.num("thermal", "c_it_kj_k");
  tp.c_r_kj_k = r.num("thermal", "c_r_kj_k");
  tp.c_ca_kj_k = r.num("thermal", "c_ca_kj_k");
  tp.c_ha_kj_k = r.num("thermal", "c_ha_kj_k");
  tp.g_cv_kw_k = r.num("thermal", "g_cv_kw_k");
  tp.g_cd_kw_k = r.num("thermal", "g_cd_kw_k");
  tp.kappa = r.num("thermal", "kappa");
  tp.t_out_c = r.num("thermal", "t_out_c");
  tp.t_min_c[NODE_AIN] = r.num("thermal", "t_ain_min_c");
  tp.t_max_c[NODE_AIN] = r.num("thermal", "t_ain_max_c");
  tp.t_min_c[NODE_CA] = r.num("thermal", "t_ca_min_c");
  tp.t_max_c[NODE_CA] = r.num("thermal", "t_ca_max_c");
  tp.t_min_c[NODE_HA] = r.num("thermal", "t_ha_min_c");
  tp.t_max_c[NODE_HA] = r.num("thermal", "t_ha_max_c");
  tp.t_min_c[NODE_R] = r.num("thermal", "t_r_min_c");
  tp.t_max_c[NODE_R] = r.num("thermal", "t_r_max_c");
  tp.t_min_c[NODE_IT] = r.num("thermal", "t_it_min_c");
  tp.t_max_c[NODE_IT] = r.num("thermal", "t_it_max_c");
  tp.t_ca_setpoint_c = r.num("thermal", "t_ca_setpoint_c");

  c.cooling.cop_chiller = r.num("cooling", "cop_chiller");
  c.cooling.p_chiller_max_kw = r.num("cooling", "p_chiller_max_kw");
  c.cooling.e_tes_max_kwh = r.num("cooling", "e_tes_max_kwh");
  c.cooling.q_tes_ch_max_kwth = r.num("cooling", "q_tes_ch_max_kwth");
  c.cooling.q_tes_dis_max_kwth = r.num("cooling", "q_tes_dis_max_kwth");
  c.cooling.eta_tes_ch = r.num("cooling", "eta_tes_ch");
  c.cooling.eta_tes_dis = r.num("cooling", "eta_tes_dis");

  c.econ.hourly_prices_gbp_per_mwh = r.num_list("economic", "prices_gbp_per_mwh");
  c.econ.p_grid_od_kw = r.num("economic", "p_grid_od_kw");
  c.econ.p_tol_kw = r.num("economic", "p_tol_kw");

  auto& sv = c.solver;
  sv.backend = r.str("solver", "backend");
  sv.piecewise_segments = r.integer("solver", "piecewise_segments");
  sv.piecewise_grading_exponent = r.num("solver", "piecewise_grading_exponent");
  sv.thermal_substeps = r.integer("solver", "thermal_substeps");
  sv.mip_rel_gap = r.num("solver", "mip_rel_gap");
  sv.probe_mip_rel_gap = r.num("solver", "probe_mip_rel_gap");
  sv.time_limit_s = r.num("solver", "time_limit_s");
  sv.baseline_shift_slack = r.num("solver", "baseline_shift_slack");
  {
    const std::string& p = r.str("solver", "recovery_rebound_policy");
    if (p == "none") sv.rebound_policy = ReboundPolicy::None;
    else if (p == "service-magnitude") sv.rebound_policy = ReboundPolicy::ServiceMagnitude;
    else if (p == "daily-peak") sv.rebound_policy = ReboundPolicy::DailyPeak;
    else throw std::runtime_error("config: unknown recovery_rebound_policy " + p);
  }
  {
    const std::string& e = r.str("solver", "storage_cycle_end");
    if (e == "extended") sv.storage_cycle_end = CycleEnd::Extended;
    else if (e == "main") sv.storage_cycle_end = CycleEnd::Main;
    else throw std::runtime_error("config: unknown storage_cycle_end " + e);
  }
  sv.flex_ca_max_c = r.num("solver", "flex_ca_max_c");

  r.check_all_used();

  // Invariants.
  require(c.grid.slot_hours > 0 && c.grid.main_slots > 0 && c.grid.ext_slots >= 0,
          "time grid positivity");
  require(std::abs(c.grid.slot_hours * c.grid.main_slots - 24.0) < 1e-9,
          "slot_duration_hours x main_slots = 24");
  require(c.it.p_idle_kw > 0 && c.it.p_idle_kw < c.it.p_max_kw, "0 < p_idle_kw < p_max_kw");
  require(c.it.exponent > 1.0, "it.exponent > 1");
  require(c.it.u_max > 0, "it.u_max > 0");
  require(c.ups.soc_min <= c.ups.soc_start_end && c.ups.soc_start_end <= c.ups.soc_max,
          "ups.soc_min <= soc_start_end <= soc_max");
  require(c.ups.p_ch_min_kw <= c.ups.p_ch_max_kw, "ups charge band ordering");
  require(c.ups.p_disch_min_kw <= c.ups.p_disch_max_kw, "ups discharge band ordering");
  require(c.ups.eta_ch > 0 && c.ups.eta_ch <= 1, "ups.eta_ch in (0,1]");
  require(c.ups.eta_disch > 0 && c.ups.eta_disch <= 1, "ups.eta_disch in (0,1]");
  require(c.ups.e_base_kwh > 0, "ups.e_base_kwh > 0");
  for (double v : {tp.c_it_kj_k, tp.c_r_kj_k, tp.c_ca_kj_k, tp.c_ha_kj_k, tp.g_cv_kw_k,
                   tp.g_cd_kw_k, tp.m_dot_air_kg_s, tp.c_pa_kj_kgk})
    require(v > 0, "thermal capacities/conductances strictly positive");
  require(tp.kappa > 0 && tp.kappa <= 1, "thermal.kappa in (0,1]");
  for (int n = 0; n < kNumNodes; ++n)
    require(tp.t_min_c[static_cast<size_t>(n)] < tp.t_max_c[static_cast<size_t>(n)],
            std::string("temperature bounds min < max for ") + kNodeNames[n]);
  require(c.cooling.cop_chiller > 0, "cooling.cop_chiller > 0");
  require(c.cooling.cop_chiller * c.cooling.p_chiller_max_kw >= c.cooling.q_tes_ch_max_kwth,
          "chiller can feed the storage tank at full rate");
  require(c.cooling.eta_tes_ch > 0 && c.cooling.eta_tes_ch <= 1, "cooling.eta_tes_ch in (0,1]");
  require(c.cooling.eta_tes_dis > 0 && c.cooling.eta_tes_dis <= 1,
          "cooling.eta_tes_dis in (0,1]");
  require(c.cooling.e_tes_max_kwh >= 0, "cooling.e_tes_max_kwh >= 0");
  int per_hour = static_cast<int>(std::lround(1.0 / c.grid.slot_hours));
  require(per_hour >= 1 && std::abs(per_hour * c.grid.slot_hours - 1.0) < 1e-9,
          "whole number of slots per hour");
  size_t hours_needed = 24;
  require(c.econ.hourly_prices_gbp_per_mwh.size() == hours_needed,
          "prices_gbp_per_mwh must list exactly 24 hourly values");
  require(c.grid.ext_slots <= c.grid.main_slots,
          "extension horizon covered by repeated early-day prices");
  require(c.econ.p_grid_od_kw >= 0, "economic.p_grid_od_kw >= 0");
  require(c.econ.p_tol_kw > 0, "economic.p_tol_kw > 0");
  require(sv.piecewise_segments >= 1, "solver.piecewise_segments >= 1");
  require(sv.piecewise_grading_exponent > 0, "solver.piecewise_grading_exponent > 0");
  require(sv.thermal_substeps >= 1, "solver.thermal_substeps >= 1");
  require(sv.mip_rel_gap >= 0 && sv.probe_mip_rel_gap >= 0, "solver gaps nonnegative");
  require(sv.time_limit_s > 0, "solver.time_limit_s > 0");
  require(sv.baseline_shift_slack >= 0, "solver.baseline_shift_slack >= 0");
  require(sv.flex_ca_max_c >= tp.t_max_c[NODE_CA],
          "solver.flex_ca_max_c is a relaxation of the cold-aisle bound");
  return c;
}

void save_facility_config(const FacilityConfig& c, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("config: cannot write " + path);
  out.precision(17);
  const auto& tp = c.thermal;
  const auto& sv = c.solver;
  out << "[time]\n"
      << "slot_duration_hours = " << c.grid.slot_hours << "\n"
      << "main_slots = " << c.grid.main_slots << "\n"
      << "extension_slots = " << c.grid.ext_slots << "\n\n"
      << "[it]\n"
      << "p_idle_kw = " << c.it.p_idle_kw << "\n"
      << "p_max_kw = " << c.it.p_max_kw << "\n"
      << "u_max = " << c.it.u_max << "\n"
      << "exponent = " << c.it.exponent << "\n\n"
      << "[ups]\n"
      << "e_base_kwh = " << c.ups.e_base_kwh << "\n"
      << "soc_min = " << c.ups.soc_min << "\n"
      << "soc_max = " << c.ups.soc_max << "\n"
      << "p_ch_min_kw = " << c.ups.p_ch_min_kw << "\n"
      << "p_ch_max_kw = " << c.ups.p_ch_max_kw << "\n"
      << "p_disch_min_kw = " << c.ups.p_disch_min_kw << "\n"
      << "p_disch_max_kw = " << c.ups.p_disch_max_kw << "\n"
      << "eta_ch = " << c.ups.eta_ch << "\n"
      << "eta_disch = " << c.ups.eta_disch << "\n"
      << "soc_start_end = " << c.ups.soc_start_end << "\n\n"
      << "[thermal]\n"
      << "m_dot_air_kg_s = " << tp.m_dot_air_kg_s << "\n"
      << "c_pa_kj_kgk = " << tp.c_pa_kj_kgk << "\n"
      << "c_it_kj_k = " << tp.c_it_kj_k << "\n"
      << "c_r_kj_k = " << tp.c_r_kj_k << "\n"
      << "c_ca_kj_k = " << tp.c_ca_kj_k << "\n"
      << "c_ha_kj_k = " << tp.c_ha_kj_k << "\n"
      << "g_cv_kw_k = " << tp.g_cv_kw_k << "\n"
      << "g_cd_kw_k = " << tp.g_cd_kw_k << "\n"
      << "kappa = " << tp.kappa << "\n"
      << "t_out_c = " << tp.t_out_c << "\n"
      << "t_ain_min_c = " << tp.t_min_c[NODE_AIN] << "\n"
      << "t_ain_max_c = " << tp.t_max_c[NODE_AIN] << "\n"
      << "t_ca_min_c = " << tp.t_min_c[NODE_CA] << "\n"
      << "t_ca_max_c = " << tp.t_max_c[NODE_CA] << "\n"
      << "t_ha_min_c = " << tp.t_min_c[NODE_HA] << "\n"
      << "t_ha_max_c = " << tp.t_max_c[NODE_HA] << "\n"
      << "t_r_min_c = " << tp.t_min_c[NODE_R] << "\n"
      << "t_r_max_c = " << tp.t_max_c[NODE_R] << "\n"
      << "t_it_min_c = " << tp.t_min_c[NODE_IT] << "\n"
      << "t_it_max_c = " << tp.t_max_c[NODE_IT] << "\n"
      << "t_ca_setpoint_c = " << tp.t_ca_setpoint_c << "\n\n"
      << "[cooling]\n"
      << "cop_chiller = " << c.cooling.cop_chiller << "\n"
      << "p_chiller_max_kw = " << c.cooling.p_chiller_max_kw << "\n"
      << "e_tes_max_kwh = " << c.cooling.e_tes_max_kwh << "\n"
      << "q_tes_ch_max_kwth = " << c.cooling.q_tes_ch_max_kwth << "\n"
      << "q_tes_dis_max_kwth = " << c.cooling.q_tes_dis_max_kwth << "\n"
      << "eta_tes_ch = " << c.cooling.eta_tes_ch << "\n"
      << "eta_tes_dis = " << c.cooling.eta_tes_dis << "\n\n"
      << "[economic]\n"
      << "prices_gbp_per_mwh =";
  for (double p : c.econ.hourly_prices_gbp_per_mwh) out << " " << p;
  out << "\n"
      << "p_grid_od_kw = " << c.econ.p_grid_od_kw << "\n"
      << "p_tol_kw = " << c.econ.p_tol_kw << "\n\n"
      << "[solver]\n"
      << "backend = " << sv.backend << "\n"
      << "piecewise_segments = " << sv.piecewise_segments << "\n"
      << "piecewise_grading_exponent = " << sv.piecewise_grading_exponent << "\n"
      << "thermal_substeps = " << sv.thermal_substeps << "\n"
      << "mip_rel_gap = " << sv.mip_rel_gap << "\n"
      << "probe_mip_rel_gap = " << sv.probe_mip_rel_gap << "\n"
      << "time_limit_s = " << sv.time_limit_s << "\n"
      << "baseline_shift_slack = " << sv.baseline_shift_slack << "\n"
      << "recovery_rebound_policy = " << rebound_policy_name(sv.rebound_policy) << "\n"
      << "storage_cycle_end = " << cycle_end_name(sv.storage_cycle_end) << "\n"
      << "flex_ca_max_c = " << sv.flex_ca_max_c << "\n";
}

}  // namespace dcflex
