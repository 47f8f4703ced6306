#include "dcflex/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "dcflex/thermal.hpp"

namespace dcflex {

namespace {

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), pattern, a, b, c);
  return std::string(buf);
}

}  // namespace

ScheduleSolution extract_schedule(const std::vector<double>& x, const ITBlock& it,
                                  const UPSBlock& ups, const CoolingBlock& cool,
                                  const std::vector<int>& p_grid_it_vars,
                                  const FacilityConfig& cfg, int first_slot) {
  ScheduleSolution s;
  const int n = it.n_slots;
  s.first_slot = first_slot;
  s.n_slots = n;
  s.od_kw = cfg.econ.p_grid_od_kw;
  s.slot_hours = cfg.grid.slot_hours;

  auto at = [&x](int var) { return x[static_cast<size_t>(var)]; };

  s.price_gbp_per_mwh.resize(n);
  s.p_grid_it.resize(n);
  s.p_ups_ch.resize(n);
  s.p_ups_disch.resize(n);
  s.p_chil_crac.resize(n);
  s.p_chil_tes.resize(n);
  s.q_tes_crac.resize(n);
  s.q_cool.resize(n);
  s.p_pw.resize(n);
  s.u_tot.resize(n);
  s.u_fixed.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    s.price_gbp_per_mwh[i] = cfg.slot_price(first_slot + i);
    s.p_grid_it[i] = at(p_grid_it_vars[i]);
    s.p_ups_ch[i] = at(ups.p_ch[i]);
    s.p_ups_disch[i] = at(ups.p_disch[i]);
    s.p_chil_crac[i] = at(cool.p_cc[i]);
    s.p_chil_tes[i] = at(cool.p_ct[i]);
    s.q_tes_crac[i] = at(cool.q_tc[i]);
    s.q_cool[i] = at(cool.q_cool[i]);
    s.p_pw[i] = at(it.p_pw[i]);
    s.u_tot[i] = at(it.u_tot[i]);
  }

  s.e_ups.resize(n + 1);
  s.e_tes.resize(n + 1);
  s.temps.resize(n + 1);
  for (int i = 0; i <= n; ++i) {
    s.e_ups[i] = at(ups.e[i]);
    s.e_tes[i] = at(cool.e_tes[i]);
    for (int node = 0; node < kNumNodes; ++node)
      s.temps[i][static_cast<size_t>(node)] = at(cool.temp_var(i, node));
  }

  std::vector<double> flex_at(n, 0.0);
  for (size_t j = 0; j < it.jobs.size(); ++j) {
    const JobSpec& job = it.jobs[j];
    for (int slot = job.first; slot <= job.last; ++slot) {
      double u = at(it.job_var_first[j] + (slot - job.first));
      if (u > 1e-12) {
        s.allocations.push_back(AllocPiece{job.origin, job.tranche, slot, u});
        flex_at[slot] += u;
      }
    }
  }
  for (int i = 0; i < n; ++i) s.u_fixed[i] = s.u_tot[i] - flex_at[i];

  const double dt = cfg.grid.slot_hours;
  for (int i = 0; i < n; ++i) {
    double gbp = s.grid_kw(i) * dt * s.price_gbp_per_mwh[i] / 1000.0;
    s.cost_total_gbp += gbp;
    if (first_slot + i < cfg.grid.main_slots) s.cost_main_gbp += gbp;
  }
  return s;
}

double compute_overhead_power(const ScheduleSolution& base, const TimeGrid& grid) {
  double sum = 0.0;
  int count = 0;
  for (int i = 0; i < base.n_slots; ++i) {
    if (base.global_slot(i) >= grid.main_slots) continue;
    sum += base.p_grid_it[static_cast<size_t>(i)] + base.p_chil_crac[static_cast<size_t>(i)];
    ++count;
  }
  if (count == 0) return 0.0;
  return 0.07 * sum / count;
}

std::vector<std::string> audit_schedule(const ScheduleSolution& s, const FacilityConfig& cfg,
                                        const AuditOptions& opts) {
  std::vector<std::string> fails;
  const int n = s.n_slots;
  const double dt = cfg.grid.slot_hours;
  const UPSParams& up = cfg.ups;
  const CoolingParams& cp = cfg.cooling;
  const double mc = cfg.thermal.air_kw_per_k();
  const double tp_supply_min = cfg.thermal.t_min_c[static_cast<size_t>(NODE_CA)];

  // Work conservation: every flexible job's allocations sum to its demand.
  if (opts.profile != nullptr) {
    std::map<std::pair<int, int>, double> done;
    for (const AllocPiece& a : s.allocations) done[{a.origin, a.tranche}] += a.u;
    for (int t = 0; t < cfg.grid.main_slots; ++t) {
      for (int k = 0; k < kNumTranches; ++k) {
        double demand = opts.profile->u_flex_base[static_cast<size_t>(t)] *
                        opts.profile->alpha[static_cast<size_t>(t)][static_cast<size_t>(k)];
        double got = 0.0;
        auto found = done.find({t, k});
        if (found != done.end()) got = found->second;
        if (std::fabs(got - demand) > 1e-6)
          fails.push_back("work_conservation: job t=" + std::to_string(t) + " k=" +
                          std::to_string(k) + fmt(" allocated %.9f of %.9f", got, demand));
      }
    }
  }

  // Storage recursions and telescoped balances.
  double ups_flow = 0.0, tes_flow = 0.0;
  for (int i = 0; i < n; ++i) {
    size_t ii = static_cast<size_t>(i);
    double ups_step = (up.eta_ch * s.p_ups_ch[ii] - s.p_ups_disch[ii] / up.eta_disch) * dt;
    double tes_step =
        (cp.eta_tes_ch * cp.cop_chiller * s.p_chil_tes[ii] - s.q_tes_crac[ii] / cp.eta_tes_dis) * dt;
    ups_flow += ups_step;
    tes_flow += tes_step;
    if (std::fabs(s.e_ups[ii + 1] - s.e_ups[ii] - ups_step) > opts.energy_tol_kwh)
      fails.push_back(fmt("ups_recursion: slot %.0f residual %.3e", i,
                          s.e_ups[ii + 1] - s.e_ups[ii] - ups_step));
    if (std::fabs(s.e_tes[ii + 1] - s.e_tes[ii] - tes_step) > opts.energy_tol_kwh)
      fails.push_back(fmt("tes_recursion: slot %.0f residual %.3e", i,
                          s.e_tes[ii + 1] - s.e_tes[ii] - tes_step));
  }
  if (std::fabs(s.e_ups[static_cast<size_t>(n)] - s.e_ups[0] - ups_flow) > opts.energy_tol_kwh)
    fails.push_back(fmt("ups_telescoping: endpoint delta %.6f != summed flow %.6f",
                        s.e_ups[static_cast<size_t>(n)] - s.e_ups[0], ups_flow));
  if (std::fabs(s.e_tes[static_cast<size_t>(n)] - s.e_tes[0] - tes_flow) > opts.energy_tol_kwh)
    fails.push_back(fmt("tes_telescoping: endpoint delta %.6f != summed flow %.6f",
                        s.e_tes[static_cast<size_t>(n)] - s.e_tes[0], tes_flow));

  int cyc = opts.cycle_end_index >= 0 ? opts.cycle_end_index : n;
  if (opts.expect_cyclic_ups &&
      std::fabs(s.e_ups[static_cast<size_t>(cyc)] - s.e_ups[0]) > opts.energy_tol_kwh)
    fails.push_back(fmt("ups_cyclic: e(0)=%.6f e(end)=%.6f", s.e_ups[0],
                        s.e_ups[static_cast<size_t>(cyc)]));
  if (opts.expect_cyclic_tes &&
      std::fabs(s.e_tes[static_cast<size_t>(cyc)] - s.e_tes[0]) > opts.energy_tol_kwh)
    fails.push_back(fmt("tes_cyclic: e(0)=%.6f e(end)=%.6f", s.e_tes[0],
                        s.e_tes[static_cast<size_t>(cyc)]));

  // Mutual exclusivity and capacity limits.
  for (int i = 0; i < n; ++i) {
    size_t ii = static_cast<size_t>(i);
    if (std::min(s.p_ups_ch[ii], s.p_ups_disch[ii]) > opts.power_tol_kw)
      fails.push_back(fmt("ups_exclusive: slot %.0f ch=%.4f disch=%.4f", i, s.p_ups_ch[ii],
                          s.p_ups_disch[ii]));
    if (std::min(cp.cop_chiller * s.p_chil_tes[ii], s.q_tes_crac[ii]) > opts.power_tol_kw)
      fails.push_back(fmt("tes_exclusive: slot %.0f ch_th=%.4f disch_th=%.4f", i,
                          cp.cop_chiller * s.p_chil_tes[ii], s.q_tes_crac[ii]));
    if (s.p_chil_crac[ii] + s.p_chil_tes[ii] > cp.p_chiller_max_kw + opts.power_tol_kw)
      fails.push_back(fmt("chiller_cap: slot %.0f draw %.4f exceeds cap", i,
                          s.p_chil_crac[ii] + s.p_chil_tes[ii]));
    double split = s.q_cool[ii] - cp.cop_chiller * s.p_chil_crac[ii] - s.q_tes_crac[ii];
    if (std::fabs(split) > opts.power_tol_kw)
      fails.push_back(fmt("cooling_split: slot %.0f residual %.3e", i, split));
    double supply_floor = mc * (s.temps[ii][static_cast<size_t>(NODE_HA)] -
                                tp_supply_min);
    if (s.q_cool[ii] > supply_floor + opts.power_tol_kw)
      fails.push_back(fmt("supply_floor: slot %.0f q_cool %.4f exceeds %.4f", i, s.q_cool[ii],
                          supply_floor));
  }

  // Temperature bounds at every state, the cold aisle against its active cap.
  const ThermalParams& tp = cfg.thermal;
  double ca_max = opts.ca_max_override > 0.0 ? opts.ca_max_override
                                             : tp.t_max_c[static_cast<size_t>(NODE_CA)];
  for (int i = 0; i <= n; ++i) {
    for (int node = 0; node < kNumNodes; ++node) {
      double v = s.temps[static_cast<size_t>(i)][static_cast<size_t>(node)];
      double hi = node == NODE_CA ? ca_max : tp.t_max_c[static_cast<size_t>(node)];
      if (v < tp.t_min_c[static_cast<size_t>(node)] - 1e-6 || v > hi + 1e-6)
        fails.push_back(std::string("temp_bounds: ") + kNodeNames[static_cast<size_t>(node)] +
                        fmt(" state %.0f value %.4f", i, v));
    }
  }

  // Thermal replay: integrating the dynamics from the initial state under the
  // scheduled inputs must reproduce the solver's temperatures.
  {
    std::vector<double> q_chil_tes(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
      q_chil_tes[static_cast<size_t>(i)] = cp.cop_chiller * s.p_chil_tes[static_cast<size_t>(i)];
    ReplayResult rep = replay_thermal(s.p_pw, s.q_cool, q_chil_tes, s.q_tes_crac, s.temps[0],
                                      s.e_tes[0], tp, cp, cfg.grid, cfg.solver.thermal_substeps);
    double worst = 0.0;
    for (int i = 0; i <= n; ++i)
      for (int node = 0; node < kNumNodes; ++node)
        worst = std::max(worst, std::fabs(rep.temps[static_cast<size_t>(i)][static_cast<size_t>(
                                              node)] -
                                          s.temps[static_cast<size_t>(i)][static_cast<size_t>(
                                              node)]));
    if (worst > opts.replay_tol_c)
      fails.push_back(fmt("thermal_replay: max temperature deviation %.3e C", worst));
  }

  return fails;
}

}  // namespace dcflex
