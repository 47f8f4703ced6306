#include "dcflex/flexibility.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <thread>

#include "dcflex/cooling.hpp"
#include "dcflex/storage.hpp"
#include "dcflex/thermal.hpp"
#include "dcflex/workload.hpp"

namespace dcflex {

RetranchedProfile retranche(const std::vector<AllocPiece>& allocations,
                            const std::array<int, kNumTranches>& d_k, double slot_hours,
                            int t0, int main_slots, int max_rem) {
  if (t0 < 0 || t0 >= main_slots)
    throw std::runtime_error("retranche: start slot " + std::to_string(t0) +
                             " outside the main horizon");
  RetranchedProfile out;
  out.t0 = t0;
  for (const AllocPiece& a : allocations) {
    if (a.exec < t0 || a.u <= 1e-9) continue;
    int rem = a.origin + d_k[static_cast<size_t>(a.tranche)] - a.exec;
    rem = std::clamp(rem, 0, max_rem);
    if (rem == 0) {
      out.folded.push_back({a.exec, a.u});
    } else {
      out.pending.push_back(PendingPiece{a.exec, rem, a.u});
      out.pending_cpu_hours += a.u * slot_hours;
    }
  }
  return out;
}

FlexBaseline make_flex_baseline(const ScheduleSolution& optimised,
                                const WorkloadProfile& profile, const FacilityConfig& cfg) {
  const int n = cfg.grid.total_slots();
  if (optimised.n_slots != n || optimised.first_slot != 0)
    throw std::runtime_error("flexibility: baseline must cover the full horizon");
  FlexBaseline b;
  b.curve = linearize_power_curve(cfg.it, cfg.solver.piecewise_segments,
                                  cfg.solver.piecewise_grading_exponent);
  b.p_grid.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) b.p_grid[static_cast<size_t>(i)] = optimised.grid_kw(i);
  b.p_grid_it = optimised.p_grid_it;
  b.p_ups_ch = optimised.p_ups_ch;
  b.p_ups_disch = optimised.p_ups_disch;
  b.p_chil_crac = optimised.p_chil_crac;
  b.p_chil_tes = optimised.p_chil_tes;
  b.e_ups = optimised.e_ups;
  b.e_tes = optimised.e_tes;
  b.temps = optimised.temps;
  b.u_inflex = profile.u_inflex;
  b.p_base_sub.assign(static_cast<size_t>(n), 0.0);
  for (int s = cfg.grid.main_slots; s < n; ++s)
    b.p_base_sub[static_cast<size_t>(s)] = b.curve.value(
        profile.u_inflex[static_cast<size_t>(s)] + profile.u_flex_base[static_cast<size_t>(s)]);
  b.daily_peak_kw = *std::max_element(b.p_grid.begin(), b.p_grid.end());

  // Full ledger: remaining deferral tolerance of every executed piece.
  int max_rem = *std::max_element(profile.d_k.begin(), profile.d_k.end());
  RetranchedProfile all = retranche(optimised.allocations, profile.d_k, cfg.grid.slot_hours, 0,
                                    cfg.grid.main_slots, max_rem);
  b.pieces = std::move(all.pending);
  for (const auto& [slot, u] : all.folded) b.pieces.push_back(PendingPiece{slot, 0, u});
  std::sort(b.pieces.begin(), b.pieces.end(), [](const PendingPiece& x, const PendingPiece& y) {
    return x.exec != y.exec ? x.exec < y.exec : x.rem < y.rem;
  });
  return b;
}

FlexProbeResult check_flex_feasible(const FlexBaseline& base, int t0, double delta_p, int tau,
                                    const FacilityConfig& cfg, SolverBackend& backend,
                                    bool fast, bool want_solution) {
  const TimeGrid& grid = cfg.grid;
  const double dt = grid.slot_hours;
  const int recovery = static_cast<int>(std::lround(3.0 / dt));  // 12 slots at 15 min
  const int wend = t0 + tau + recovery;
  if (wend > grid.total_slots() - 1)
    throw std::runtime_error("flexibility: window past the horizon (tau too large)");
  const int prov_end = t0 + tau;
  const int n_w = wend - t0 + 1;

  // Split the pending ledger: pieces at their deadline or scheduled into the
  // recovery window run exactly as the baseline (inflexible); the rest stay
  // movable within [exec, exec + rem] clipped to the window.
  std::vector<double> u_fixed(static_cast<size_t>(n_w));
  for (int i = 0; i < n_w; ++i)
    u_fixed[static_cast<size_t>(i)] = base.u_inflex[static_cast<size_t>(t0 + i)];
  std::vector<JobSpec> jobs;
  for (const PendingPiece& p : base.pieces) {
    if (p.exec < t0 || p.exec > wend) continue;
    if (p.rem == 0 || p.exec > prov_end) {
      u_fixed[static_cast<size_t>(p.exec - t0)] += p.u;
    } else {
      JobSpec j;
      j.first = p.exec - t0;
      j.last = std::min(p.exec + p.rem, wend) - t0;
      j.demand_u = p.u;
      j.origin = p.exec;
      j.tranche = p.rem;
      jobs.push_back(j);
    }
  }

  ModelInstance m;
  std::vector<char> order_binaries(static_cast<size_t>(n_w), 0);
  if (delta_p > 0)
    for (int i = 0; i <= prov_end - t0; ++i) order_binaries[static_cast<size_t>(i)] = 1;
  ITBlock it = add_it_scheduling(m, jobs, u_fixed, base.curve, cfg.it.u_max, order_binaries);

  UPSBlock ups = add_ups(m, cfg.ups, n_w, dt);
  const ThermalLinear map = build_slot_map(cfg.thermal, dt, cfg.solver.thermal_substeps);
  CoolingBlock cool =
      add_cooling(m, cfg.thermal, cfg.cooling, map, it.p_pw, dt, cfg.solver.flex_ca_max_c);

  // Boundary pins: start from the baseline state at t0, return to the
  // baseline state one boundary past the recovery window.
  m.fix_var(ups.e[0], base.e_ups[static_cast<size_t>(t0)]);
  m.fix_var(ups.e[static_cast<size_t>(n_w)], base.e_ups[static_cast<size_t>(wend + 1)]);
  m.fix_var(cool.e_tes[0], base.e_tes[static_cast<size_t>(t0)]);
  m.fix_var(cool.e_tes[static_cast<size_t>(n_w)], base.e_tes[static_cast<size_t>(wend + 1)]);
  for (int node = 0; node < kNumNodes; ++node) {
    m.fix_var(cool.temp_var(0, node),
              base.temps[static_cast<size_t>(t0)][static_cast<size_t>(node)]);
    m.fix_var(cool.temp_var(n_w, node),
              base.temps[static_cast<size_t>(wend + 1)][static_cast<size_t>(node)]);
  }

  std::vector<double> p_base_sub(static_cast<size_t>(n_w));
  for (int i = 0; i < n_w; ++i)
    p_base_sub[static_cast<size_t>(i)] = base.p_base_sub[static_cast<size_t>(t0 + i)];
  std::vector<int> pgit = add_it_grid_coupling(m, it, ups.p_disch, p_base_sub);

  // Delivery rows over the provision slots (one-sided around baseline +
  // delta), then the recovery-rebound cap.
  const double od = cfg.econ.p_grid_od_kw;
  const double ptol = cfg.econ.p_tol_kw;
  for (int s = t0; s <= prov_end; ++s) {
    int i = s - t0;
    std::vector<std::pair<int, double>> draw = {{pgit[static_cast<size_t>(i)], 1.0},
                                                {ups.p_ch[static_cast<size_t>(i)], 1.0},
                                                {cool.p_cc[static_cast<size_t>(i)], 1.0},
                                                {cool.p_ct[static_cast<size_t>(i)], 1.0}};
    double target = base.p_grid[static_cast<size_t>(s)] + delta_p - od;
    if (delta_p < 0)
      m.add_row(draw, -kInf, target + ptol, "deliver" + std::to_string(s));
    else
      m.add_row(draw, target - ptol, kInf, "deliver" + std::to_string(s));
  }
  if (cfg.solver.rebound_policy != ReboundPolicy::None) {
    for (int s = prov_end + 1; s <= wend; ++s) {
      int i = s - t0;
      double cap = cfg.solver.rebound_policy == ReboundPolicy::DailyPeak
                       ? base.daily_peak_kw + ptol - od
                       : base.p_grid[static_cast<size_t>(s)] + std::fabs(delta_p) + ptol - od;
      m.add_row({{pgit[static_cast<size_t>(i)], 1.0},
                 {ups.p_ch[static_cast<size_t>(i)], 1.0},
                 {cool.p_cc[static_cast<size_t>(i)], 1.0},
                 {cool.p_ct[static_cast<size_t>(i)], 1.0}},
                -kInf, cap, "rebound" + std::to_string(s));
    }
  }

  for (int i = 0; i < n_w; ++i) {
    double w = dt * cfg.slot_price(t0 + i) / 1000.0;
    m.set_objective(pgit[static_cast<size_t>(i)], w);
    m.set_objective(ups.p_ch[static_cast<size_t>(i)], w);
    m.set_objective(cool.p_cc[static_cast<size_t>(i)], w);
    m.set_objective(cool.p_ct[static_cast<size_t>(i)], w);
  }

  SolveOptions opts;
  opts.mip_rel_gap = (fast && !want_solution) ? cfg.solver.probe_mip_rel_gap
                                              : cfg.solver.mip_rel_gap;
  opts.time_limit_s = cfg.solver.time_limit_s;
  SolveResult res = backend.solve(m, opts);

  FlexProbeResult out;
  out.status = res.status;
  out.feasible = res.has_solution();
  if (!out.feasible) return out;
  out.cost_gbp = res.objective;
  if (!want_solution) return out;

  out.slots.resize(static_cast<size_t>(n_w));
  out.d_it.resize(static_cast<size_t>(n_w));
  out.d_ups.resize(static_cast<size_t>(n_w));
  out.d_crac.resize(static_cast<size_t>(n_w));
  out.d_tes.resize(static_cast<size_t>(n_w));
  out.d_total.resize(static_cast<size_t>(n_w));
  for (int i = 0; i < n_w; ++i) {
    size_t ii = static_cast<size_t>(i);
    size_t s = static_cast<size_t>(t0 + i);
    double v_pgit = res.x[static_cast<size_t>(pgit[ii])];
    double v_pch = res.x[static_cast<size_t>(ups.p_ch[ii])];
    double v_pdis = res.x[static_cast<size_t>(ups.p_disch[ii])];
    double v_pcc = res.x[static_cast<size_t>(cool.p_cc[ii])];
    double v_pct = res.x[static_cast<size_t>(cool.p_ct[ii])];
    out.slots[ii] = t0 + i;
    out.d_it[ii] = (v_pgit + v_pdis) - (base.p_grid_it[s] + base.p_ups_disch[s]);
    out.d_ups[ii] = (v_pch - v_pdis) - (base.p_ups_ch[s] - base.p_ups_disch[s]);
    out.d_crac[ii] = v_pcc - base.p_chil_crac[s];
    out.d_tes[ii] = v_pct - base.p_chil_tes[s];
    out.d_total[ii] = out.d_it[ii] + out.d_ups[ii] + out.d_crac[ii] + out.d_tes[ii];
  }
  return out;
}

namespace {

int horizon_cap(const FacilityConfig& cfg, int t0) {
  int recovery = static_cast<int>(std::lround(3.0 / cfg.grid.slot_hours));
  return cfg.grid.total_slots() - 1 - recovery - t0;
}

// Tight final solve at the resolved duration: fills the cell's deviation
// schedule, stepping the duration down if the tight gap exposes a probe-level
// artifact (recorded as an anomaly).
void finalise_cell(FlexibilityCell& cell, const FlexBaseline& base, const FacilityConfig& cfg,
                   SolverBackend& backend) {
  while (true) {
    FlexProbeResult fin = check_flex_feasible(base, cell.t0, cell.delta_p_kw, cell.tau_slots,
                                              cfg, backend, false, true);
    ++cell.probes;
    if (fin.feasible) {
      cell.slots = std::move(fin.slots);
      cell.d_it = std::move(fin.d_it);
      cell.d_ups = std::move(fin.d_ups);
      cell.d_crac = std::move(fin.d_crac);
      cell.d_tes = std::move(fin.d_tes);
      cell.d_total = std::move(fin.d_total);
      return;
    }
    cell.anomalies.push_back("tight solve infeasible at tau=" +
                             std::to_string(cell.tau_slots) + " (" +
                             solve_status_name(fin.status) + ")");
    if (cell.tau_slots == 0) {
      cell.status = "zero";
      return;
    }
    --cell.tau_slots;
    cell.status = "resolved";
  }
}

}  // namespace

FlexibilityCell max_duration(const FlexBaseline& base, int t0, double delta_p,
                             const FacilityConfig& cfg, SolverBackend& backend, int seed_tau) {
  FlexibilityCell cell;
  cell.t0 = t0;
  cell.delta_p_kw = delta_p;
  const int cap = horizon_cap(cfg, t0);
  if (cap < 0) throw std::runtime_error("flexibility: start slot leaves no room for recovery");

  std::map<int, bool> cache;
  auto probe = [&](int tau) {
    auto found = cache.find(tau);
    if (found != cache.end()) return found->second;
    FlexProbeResult r = check_flex_feasible(base, t0, delta_p, tau, cfg, backend, true, false);
    ++cell.probes;
    if (r.status == SolveStatus::Timeout)
      cell.anomalies.push_back("probe timeout at tau=" + std::to_string(tau) +
                               " treated as infeasible");
    if (r.status == SolveStatus::Error)
      throw std::runtime_error("flexibility: solver error probing tau=" + std::to_string(tau));
    cache[tau] = r.feasible;
    return r.feasible;
  };

  if (!probe(0)) {
    cell.status = "zero";
    cell.tau_slots = 0;
    cell.tau_hours = 0.0;
    return cell;
  }

  int lo = 0;       // probed feasible
  int hi = cap + 1; // first duration known/assumed infeasible; cap+1 = beyond horizon
  bool have_hi = false;
  if (seed_tau > 0 && seed_tau <= cap) {
    if (probe(seed_tau)) {
      lo = seed_tau;
    } else {
      hi = seed_tau;
      have_hi = true;
    }
  }
  if (!have_hi) {
    int step = 1;
    while (true) {
      int next = lo + step;
      if (next > cap) {
        if (probe(cap)) {
          cell.tau_slots = cap;
          cell.status = "horizon-capped";
          cell.tau_hours = cap * cfg.grid.slot_hours;
          finalise_cell(cell, base, cfg, backend);
          return cell;
        }
        hi = cap;
        break;
      }
      if (!probe(next)) {
        hi = next;
        break;
      }
      lo = next;
      if (lo == cap) {
        cell.tau_slots = cap;
        cell.status = "horizon-capped";
        cell.tau_hours = cap * cfg.grid.slot_hours;
        finalise_cell(cell, base, cfg, backend);
        return cell;
      }
      step *= 2;
    }
  }
  while (hi - lo > 1) {
    int mid = lo + (hi - lo) / 2;
    if (probe(mid))
      lo = mid;
    else
      hi = mid;
  }

  // Monotonicity guard over the probe facts: the bracket is trusted only if
  // nothing probed feasible lies beyond it.
  bool anomaly = false;
  for (const auto& [tau, feas] : cache)
    if (feas && tau > lo) anomaly = true;
  if (lo + 1 <= cap && probe(lo + 1)) anomaly = true;
  if (anomaly) {
    cell.anomalies.push_back("non-monotone feasibility around tau=" + std::to_string(lo) +
                             "; escalating to linear scan");
    int best = lo;
    for (const auto& [tau, feas] : cache)
      if (feas && tau > best) best = tau;
    while (best < cap && probe(best + 1)) ++best;
    lo = best;
  }

  cell.tau_slots = lo;
  cell.tau_hours = lo * cfg.grid.slot_hours;
  cell.status = lo == cap ? "horizon-capped" : "resolved";
  finalise_cell(cell, base, cfg, backend);
  return cell;
}

FlexibilityCell linear_max_duration(const FlexBaseline& base, int t0, double delta_p,
                                    const FacilityConfig& cfg, SolverBackend& backend) {
  FlexibilityCell cell;
  cell.t0 = t0;
  cell.delta_p_kw = delta_p;
  const int cap = horizon_cap(cfg, t0);
  if (cap < 0) throw std::runtime_error("flexibility: start slot leaves no room for recovery");

  auto probe = [&](int tau) {
    FlexProbeResult r = check_flex_feasible(base, t0, delta_p, tau, cfg, backend, true, false);
    ++cell.probes;
    if (r.status == SolveStatus::Error)
      throw std::runtime_error("flexibility: solver error probing tau=" + std::to_string(tau));
    return r.feasible;
  };

  if (!probe(0)) {
    cell.status = "zero";
    return cell;
  }
  int tau = 0;
  while (tau < cap && probe(tau + 1)) ++tau;
  cell.tau_slots = tau;
  cell.tau_hours = tau * cfg.grid.slot_hours;
  cell.status = tau == cap ? "horizon-capped" : "resolved";
  finalise_cell(cell, base, cfg, backend);
  return cell;
}

std::vector<FlexibilityCell> flex_sweep(const FlexBaseline& base,
                                        const std::vector<int>& t0_grid,
                                        const std::vector<double>& dp_grid,
                                        const FacilityConfig& cfg, int jobs) {
  if (t0_grid.empty() || dp_grid.empty())
    throw std::runtime_error("flexibility: empty sweep grid");
  std::vector<int> t0s = t0_grid;
  std::vector<double> dps = dp_grid;
  std::sort(t0s.begin(), t0s.end());
  t0s.erase(std::unique(t0s.begin(), t0s.end()), t0s.end());
  std::sort(dps.begin(), dps.end());
  dps.erase(std::unique(dps.begin(), dps.end()), dps.end());

  const size_t n_rows = t0s.size();
  const size_t n_cols = dps.size();
  std::vector<FlexibilityCell> cells(n_rows * n_cols);

  // One column (fixed delta_p) per task: cells within a column run in start
  // order so each search is seeded by the previous resolved duration, which
  // keeps results independent of how columns are spread over backends.
  auto run_column = [&](size_t col, SolverBackend& backend) {
    int seed = -1;
    for (size_t row = 0; row < n_rows; ++row) {
      FlexibilityCell& cell = cells[row * n_cols + col];
      try {
        cell = max_duration(base, t0s[row], dps[col], cfg, backend, seed);
        seed = cell.tau_slots;
      } catch (const std::exception& e) {
        cell.t0 = t0s[row];
        cell.delta_p_kw = dps[col];
        cell.status = "error";
        cell.anomalies.push_back(e.what());
        seed = -1;
      }
    }
  };

  int workers = std::max(1, std::min<int>(jobs, static_cast<int>(n_cols)));
  if (workers == 1) {
    std::unique_ptr<SolverBackend> backend = SolverBackend::create(cfg.solver.backend);
    for (size_t col = 0; col < n_cols; ++col) run_column(col, *backend);
  } else {
    std::vector<std::thread> pool;
    std::atomic<size_t> next{0};
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&]() {
        std::unique_ptr<SolverBackend> backend = SolverBackend::create(cfg.solver.backend);
        while (true) {
          size_t col = next.fetch_add(1);
          if (col >= n_cols) break;
          run_column(col, *backend);
        }
      });
    for (std::thread& th : pool) th.join();
  }
  return cells;
}

}  // namespace dcflex
