#include "dcflex/runs.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "dcflex/cooling.hpp"
#include "dcflex/storage.hpp"
#include "dcflex/thermal.hpp"
#include "dcflex/workload.hpp"

namespace dcflex {

BaseRunResult run_scenario1(const FacilityConfig& cfg, const WorkloadProfile& profile) {
  const TimeGrid& grid = cfg.grid;
  const ThermalParams& tp = cfg.thermal;
  const CoolingParams& cp = cfg.cooling;
  const int n = grid.total_slots();
  const double dt = grid.slot_hours;
  const double setpoint = tp.t_ca_setpoint_c;
  const ThermalLinear map = build_slot_map(tp, dt, cfg.solver.thermal_substeps);

  BaseRunResult out;
  ScheduleSolution& s = out.schedule;
  s.first_slot = 0;
  s.n_slots = n;
  s.od_kw = cfg.econ.p_grid_od_kw;
  s.slot_hours = cfg.grid.slot_hours;
  s.status = "simulated";

  std::vector<double> u_tot(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    u_tot[static_cast<size_t>(i)] = profile.u_inflex[static_cast<size_t>(i)] +
                                    profile.u_flex_base[static_cast<size_t>(i)];

  s.price_gbp_per_mwh.resize(static_cast<size_t>(n));
  s.p_grid_it.resize(static_cast<size_t>(n));
  s.p_ups_ch.assign(static_cast<size_t>(n), 0.0);
  s.p_ups_disch.assign(static_cast<size_t>(n), 0.0);
  s.p_chil_crac.resize(static_cast<size_t>(n));
  s.p_chil_tes.assign(static_cast<size_t>(n), 0.0);
  s.q_tes_crac.assign(static_cast<size_t>(n), 0.0);
  s.q_cool.resize(static_cast<size_t>(n));
  s.p_pw.resize(static_cast<size_t>(n));
  s.u_tot = u_tot;
  s.u_fixed = u_tot;
  s.e_ups.assign(static_cast<size_t>(n) + 1, cfg.ups.soc_start_end * cfg.ups.e_base_kwh);
  s.e_tes.assign(static_cast<size_t>(n) + 1, 0.0);
  s.temps.resize(static_cast<size_t>(n) + 1);

  SteadyState ss = steady_state_init(u_tot[0], cfg.it, tp, cp, setpoint);
  s.temps[0] = ss.t_c;
  Eigen::Matrix<double, kNumNodes, 1> x;
  for (int node = 0; node < kNumNodes; ++node) x(node) = ss.t_c[static_cast<size_t>(node)];

  const double mc = tp.air_kw_per_k();
  for (int i = 0; i < n; ++i) {
    size_t ii = static_cast<size_t>(i);
    double p_it = cfg.it.power_kw(u_tot[ii]);
    Eigen::Matrix<double, kNumNodes, 1> drift = map.A * x + map.bp * p_it + map.c;
    double q = (setpoint - drift(NODE_CA)) / map.bq(NODE_CA);
    if (q < -1e-9)
      throw std::runtime_error("base run: holding the cold-aisle setpoint needs negative "
                               "cooling at slot " + std::to_string(i));
    if (q / cp.cop_chiller > cp.p_chiller_max_kw + 1e-9)
      throw std::runtime_error("base run: chiller capacity exceeded at slot " +
                               std::to_string(i));
    if (q > mc * (x(NODE_HA) - tp.t_min_c[static_cast<size_t>(NODE_CA)]) + 1e-9)
      throw std::runtime_error("base run: supply-air floor exceeded at slot " +
                               std::to_string(i));
    x = drift + map.bq * q;
    for (int node = 0; node < kNumNodes; ++node) {
      double v = x(node);
      if (v < tp.t_min_c[static_cast<size_t>(node)] - 1e-6 ||
          v > tp.t_max_c[static_cast<size_t>(node)] + 1e-6)
        throw std::runtime_error(std::string("base run: ") + kNodeNames[node] +
                                 " out of bounds at slot " + std::to_string(i + 1));
      s.temps[ii + 1][static_cast<size_t>(node)] = v;
    }
    s.price_gbp_per_mwh[ii] = cfg.slot_price(i);
    s.p_grid_it[ii] = p_it;
    s.p_pw[ii] = p_it;
    s.q_cool[ii] = q;
    s.p_chil_crac[ii] = q / cp.cop_chiller;
    double gbp = s.grid_kw(i) * dt * s.price_gbp_per_mwh[ii] / 1000.0;
    s.cost_total_gbp += gbp;
    if (i < grid.main_slots) s.cost_main_gbp += gbp;
  }
  s.cost_pass1_gbp = s.cost_total_gbp;

  out.overhead_estimate_kw = compute_overhead_power(s, grid);
  double gap = std::fabs(out.overhead_estimate_kw - cfg.econ.p_grid_od_kw);
  if (gap > 0.5) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "configured overhead draw %.3f kW differs from the 7%% rule estimate "
                  "%.3f kW by %.3f kW",
                  cfg.econ.p_grid_od_kw, out.overhead_estimate_kw, gap);
    out.warnings.push_back(buf);
  }
  return out;
}

OptimisedRunResult run_scenario2(const FacilityConfig& cfg, const WorkloadProfile& profile,
                                 SolverBackend& backend) {
  const TimeGrid& grid = cfg.grid;
  const int n = grid.total_slots();
  const double dt = grid.slot_hours;

  OptimisedRunResult out;
  out.curve = linearize_power_curve(cfg.it, cfg.solver.piecewise_segments,
                                    cfg.solver.piecewise_grading_exponent);
  const ThermalLinear map = build_slot_map(cfg.thermal, dt, cfg.solver.thermal_substeps);

  ModelInstance m;
  std::vector<JobSpec> jobs = jobs_from_profile(profile, grid);
  std::vector<char> order_binaries(static_cast<size_t>(n), 0);
  ITBlock it = add_it_scheduling(m, jobs, profile.u_inflex, out.curve, cfg.it.u_max,
                                 order_binaries);

  UPSBlock ups = add_ups(m, cfg.ups, n, dt);
  const double e0 = cfg.ups.soc_start_end * cfg.ups.e_base_kwh;
  const int cyc = cfg.solver.storage_cycle_end == CycleEnd::Extended ? n : grid.main_slots;
  m.fix_var(ups.e[0], e0);
  m.fix_var(ups.e[static_cast<size_t>(cyc)], e0);

  CoolingBlock cool = add_cooling(m, cfg.thermal, cfg.cooling, map, it.p_pw, dt, 0.0);
  m.add_row({{cool.e_tes[static_cast<size_t>(cyc)], 1.0}, {cool.e_tes[0], -1.0}}, 0.0, 0.0,
            "tes_cycle");

  double u0 = profile.u_inflex[0] + profile.u_flex_base[0];
  SteadyState ss =
      steady_state_init(u0, cfg.it, cfg.thermal, cfg.cooling, cfg.thermal.t_ca_setpoint_c);
  for (int node = 0; node < kNumNodes; ++node)
    m.fix_var(cool.temp_var(0, node), ss.t_c[static_cast<size_t>(node)]);

  // Extension slots are billed only for draw above the always-on baseline.
  std::vector<double> p_base_sub(static_cast<size_t>(n), 0.0);
  for (int s = grid.main_slots; s < n; ++s)
    p_base_sub[static_cast<size_t>(s)] = out.curve.value(
        profile.u_inflex[static_cast<size_t>(s)] + profile.u_flex_base[static_cast<size_t>(s)]);
  std::vector<int> pgit = add_it_grid_coupling(m, it, ups.p_disch, p_base_sub);

  std::vector<std::pair<int, double>> cost_terms;
  double const_cost = 0.0;
  for (int s = 0; s < n; ++s) {
    double w = dt * cfg.slot_price(s) / 1000.0;
    cost_terms.push_back({pgit[static_cast<size_t>(s)], w});
    cost_terms.push_back({ups.p_ch[static_cast<size_t>(s)], w});
    cost_terms.push_back({cool.p_cc[static_cast<size_t>(s)], w});
    cost_terms.push_back({cool.p_ct[static_cast<size_t>(s)], w});
    const_cost += cfg.econ.p_grid_od_kw * w;
  }
  for (const auto& [var, w] : cost_terms) m.set_objective(var, w);

  SolveOptions opts;
  opts.mip_rel_gap = cfg.solver.mip_rel_gap;
  opts.time_limit_s = cfg.solver.time_limit_s;
  SolveResult r1 = backend.solve(m, opts);
  out.pass1_status = r1.status;
  if (!r1.has_solution()) {
    out.warnings.push_back(std::string("cost pass returned ") + solve_status_name(r1.status) +
                           (r1.message.empty() ? "" : ": " + r1.message));
    return out;
  }
  const double varcost1 = r1.objective;
  out.pass1_cost_gbp = varcost1 + const_cost;

  // Pass 2: among schedules within the configured slack of the optimum cost,
  // execute work as early as possible (minimal total shift). The small cost
  // term keeps the cheapest such schedule.
  m.add_row(cost_terms, -kInf,
            varcost1 + cfg.solver.baseline_shift_slack * out.pass1_cost_gbp, "cost_slack");
  std::fill(m.obj.begin(), m.obj.end(), 0.0);
  for (size_t j = 0; j < it.jobs.size(); ++j) {
    const JobSpec& job = it.jobs[j];
    for (int slot = job.first; slot <= job.last; ++slot)
      m.obj[static_cast<size_t>(it.job_var_first[j] + (slot - job.first))] =
          static_cast<double>(slot - job.origin);
  }
  for (const auto& [var, w] : cost_terms) m.obj[static_cast<size_t>(var)] += 1e-4 * w;

  SolveResult r2 = backend.solve(m, opts);
  out.pass2_status = r2.status;
  const bool use2 = r2.has_solution();
  if (!use2)
    out.warnings.push_back(std::string("shift pass returned ") + solve_status_name(r2.status) +
                           "; keeping the cost-only schedule");
  out.schedule = extract_schedule(use2 ? r2.x : r1.x, it, ups, cool, pgit, cfg, 0);
  out.schedule.cost_pass1_gbp = out.pass1_cost_gbp;
  out.schedule.status = solve_status_name(use2 ? r2.status : r1.status);

  for (int s = 0; s < n; ++s)
    out.linearization_audit_kwh +=
        std::fabs(out.schedule.p_pw[static_cast<size_t>(s)] -
                  cfg.it.power_kw(out.schedule.u_tot[static_cast<size_t>(s)])) *
        dt;
  return out;
}

}  // namespace dcflex
