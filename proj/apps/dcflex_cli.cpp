// Command-line front end: `base` simulates the fixed-setpoint reference day,
// `optimise` computes the integrated cost-optimal schedule, and `flex` sweeps
// the duration-aware flexibility envelope around a saved optimised baseline.
//
// Exit codes: 0 success, 2 input/configuration error, 3 solver failure,
// 4 verification mismatch.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dcflex/backend.hpp"
#include "dcflex/csvio.hpp"
#include "dcflex/flexibility.hpp"
#include "dcflex/manifest.hpp"
#include "dcflex/runs.hpp"
#include "dcflex/svgplot.hpp"
#include "dcflex/tables.hpp"
#include "dcflex/workload.hpp"

namespace fs = std::filesystem;
using namespace dcflex;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitSolver = 3;
constexpr int kExitVerify = 4;

struct CommonArgs {
  std::string config_path;
  std::string workload_path;
  std::string tranches_path;
  std::string out_dir;
  std::string backend_name;
};

void add_common(CLI::App* sub, CommonArgs& a, bool with_backend) {
  sub->add_option("-c,--config", a.config_path, "Facility configuration (INI)")
      ->required();
  sub->add_option("--workload", a.workload_path,
                  "Hourly workload shares CSV (default: workload.csv beside the config)");
  sub->add_option("--tranches", a.tranches_path,
                  "Deferral-tolerance split CSV (default: tranches.csv beside the config)");
  sub->add_option("-o,--out", a.out_dir, "Output directory (created if missing)")
      ->required();
  if (with_backend) {
    sub->add_option("--backend", a.backend_name,
                    "Solver backend (default: DCFLEX_BACKEND env var, then built-in)");
  }
}

struct LoadedInputs {
  FacilityConfig cfg;
  WorkloadTables tables;
  WorkloadProfile profile;
};

LoadedInputs load_inputs(CommonArgs& a) {
  fs::path cfg_dir = fs::path(a.config_path).parent_path();
  if (a.workload_path.empty()) a.workload_path = (cfg_dir / "workload.csv").string();
  if (a.tranches_path.empty()) a.tranches_path = (cfg_dir / "tranches.csv").string();
  LoadedInputs in;
  in.cfg = load_facility_config(a.config_path);
  in.tables = load_workload_tables(a.workload_path, a.tranches_path);
  in.profile = build_workload_profile(in.tables, in.cfg.grid, in.cfg.it);
  fs::create_directories(a.out_dir);
  return in;
}

RunManifest make_manifest(const std::string& kind, const CommonArgs& a,
                          const LoadedInputs& in) {
  RunManifest m;
  m.run_kind = kind;
  m.config_path = a.config_path;
  m.config_hash = in.cfg.source_hash;
  m.workload_hash = in.tables.workload_hash;
  m.tranches_hash = in.tables.tranches_hash;
  m.mip_rel_gap = in.cfg.solver.mip_rel_gap;
  m.probe_mip_rel_gap = in.cfg.solver.probe_mip_rel_gap;
  m.time_limit_s = in.cfg.solver.time_limit_s;
  m.p_tol_kw = in.cfg.econ.p_tol_kw;
  m.piecewise_segments = in.cfg.solver.piecewise_segments;
  m.created_utc = current_utc_iso8601();
  return m;
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void print_kv(const char* key, double v) {
  std::printf("%s %.10g\n", key, v);
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stoi(tok));
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stod(tok));
  }
  return out;
}

std::string cell_file_stem(const FlexibilityCell& c) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "breakdown_t%03d_%s%g", c.t0,
                c.delta_p_kw < 0 ? "m" : "p", std::abs(c.delta_p_kw));
  return buf;
}

int run_base(CommonArgs& a) {
  LoadedInputs in = load_inputs(a);
  BaseRunResult res = run_scenario1(in.cfg, in.profile);

  write_schedule_csv(join_path(a.out_dir, "schedule.csv"), res.schedule);
  write_states_csv(join_path(a.out_dir, "states.csv"), res.schedule);

  RunManifest m = make_manifest("base", a, in);
  m.solver_identity = "closed-form simulation (no solver)";
  m.objectives = {{"cost_total_gbp", res.schedule.cost_total_gbp},
                  {"cost_main_gbp", res.schedule.cost_main_gbp},
                  {"overhead_estimate_kw", res.overhead_estimate_kw}};
  m.statuses = {{"run", res.schedule.status}};
  m.anomalies = res.warnings;
  m.result_files = {"schedule.csv", "states.csv"};
  write_manifest(join_path(a.out_dir, "manifest.json"), m);

  for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";
  print_kv("total_base_cost_gbp", res.schedule.cost_total_gbp);
  print_kv("main_day_cost_gbp", res.schedule.cost_main_gbp);
  print_kv("overhead_estimate_kw", res.overhead_estimate_kw);
  return 0;
}

int run_optimise(CommonArgs& a, int segments, double time_limit) {
  LoadedInputs in = load_inputs(a);
  if (segments > 0) in.cfg.solver.piecewise_segments = segments;
  if (time_limit > 0) in.cfg.solver.time_limit_s = time_limit;

  auto backend = SolverBackend::create(a.backend_name);
  OptimisedRunResult res = run_scenario2(in.cfg, in.profile, *backend);
  for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";
  if (!res.ok()) {
    std::cerr << "error: optimisation failed (pass 1 "
              << solve_status_name(res.pass1_status) << ")\n";
    return kExitSolver;
  }

  // Reference day for the saving figure.
  BaseRunResult base = run_scenario1(in.cfg, in.profile);
  double saving_pct = 0.0;
  if (base.schedule.cost_main_gbp > 0.0) {
    saving_pct = (base.schedule.cost_main_gbp - res.schedule.cost_main_gbp) /
                 base.schedule.cost_main_gbp * 100.0;
  }

  write_schedule_csv(join_path(a.out_dir, "schedule.csv"), res.schedule);
  write_states_csv(join_path(a.out_dir, "states.csv"), res.schedule);
  write_allocations_csv(join_path(a.out_dir, "allocations.csv"),
                        res.schedule.allocations);
  std::vector<double> hist = shift_histogram(res.schedule.allocations,
                                             in.cfg.grid.slot_hours,
                                             in.cfg.grid.ext_slots);
  write_histogram_csv(join_path(a.out_dir, "histogram.csv"), hist,
                      in.cfg.grid.slot_hours);
  write_svg(join_path(a.out_dir, "decomposition.svg"),
            svg_schedule_decomposition(res.schedule));
  write_svg(join_path(a.out_dir, "cost_comparison.svg"),
            svg_cost_comparison(base.schedule.cost_main_gbp,
                                res.schedule.cost_main_gbp));

  RunManifest m = make_manifest("optimise", a, in);
  m.solver_identity = backend->identity();
  m.piecewise_max_abs_error_kw = res.curve.max_abs_error_kw;
  m.solve_count = backend->solve_count();
  m.objectives = {{"cost_total_gbp", res.schedule.cost_total_gbp},
                  {"cost_main_gbp", res.schedule.cost_main_gbp},
                  {"cost_pass1_gbp", res.pass1_cost_gbp},
                  {"base_cost_main_gbp", base.schedule.cost_main_gbp},
                  {"saving_percent", saving_pct},
                  {"linearization_audit_kwh", res.linearization_audit_kwh}};
  m.statuses = {{"pass1", solve_status_name(res.pass1_status)},
                {"pass2", solve_status_name(res.pass2_status)}};
  m.anomalies = res.warnings;
  m.result_files = {"schedule.csv",      "states.csv",
                    "allocations.csv",   "histogram.csv",
                    "decomposition.svg", "cost_comparison.svg"};
  write_manifest(join_path(a.out_dir, "manifest.json"), m);

  print_kv("base_cost_main_gbp", base.schedule.cost_main_gbp);
  print_kv("optimised_cost_main_gbp", res.schedule.cost_main_gbp);
  print_kv("saving_percent", saving_pct);
  print_kv("cost_total_gbp", res.schedule.cost_total_gbp);
  print_kv("cost_pass1_gbp", res.pass1_cost_gbp);
  print_kv("linearization_audit_kwh", res.linearization_audit_kwh);
  return 0;
}

int run_flex(CommonArgs& a, const std::string& baseline_dir,
             const std::string& t0_list, const std::string& dp_list, int jobs,
             bool verify_linear) {
  LoadedInputs in = load_inputs(a);

  ScheduleSolution sched = read_schedule_csv(join_path(baseline_dir, "schedule.csv"),
                                             join_path(baseline_dir, "states.csv"));
  sched.allocations = read_allocations_csv(join_path(baseline_dir, "allocations.csv"));
  sched.slot_hours = in.cfg.grid.slot_hours;
  FlexBaseline base = make_flex_baseline(sched, in.profile, in.cfg);

  std::vector<int> t0s = parse_int_list(t0_list);
  std::vector<double> dps = parse_double_list(dp_list);
  if (t0s.empty() || dps.empty())
    throw std::runtime_error("empty --t0-grid or --dp-grid");

  auto backend = SolverBackend::create(a.backend_name);  // identity only
  std::vector<FlexibilityCell> cells = flex_sweep(base, t0s, dps, in.cfg, jobs);

  write_heatmap_csv(join_path(a.out_dir, "heatmap.csv"), cells);
  write_svg(join_path(a.out_dir, "heatmap.svg"), svg_heatmap(cells));
  RunManifest m = make_manifest("flex", a, in);
  m.solver_identity = backend->identity();
  m.result_files = {"heatmap.csv", "heatmap.svg"};

  fs::create_directories(join_path(a.out_dir, "breakdown"));
  double tau_max_h = 0.0;
  int n_err = 0;
  for (const auto& c : cells) {
    tau_max_h = std::max(tau_max_h, c.tau_hours);
    if (c.status == "error") ++n_err;
    for (const auto& an : c.anomalies) {
      std::ostringstream tag;
      tag << "t0=" << c.t0 << " dp=" << c.delta_p_kw << ": " << an;
      m.anomalies.push_back(tag.str());
    }
    if (!c.slots.empty()) {
      std::string stem = join_path(a.out_dir, "breakdown/" + cell_file_stem(c));
      write_breakdown_csv(stem + ".csv", c);
      write_svg(stem + ".svg", svg_breakdown(c));
      m.result_files.push_back("breakdown/" + cell_file_stem(c) + ".csv");
      m.result_files.push_back("breakdown/" + cell_file_stem(c) + ".svg");
    }
  }
  int probes = 0;
  for (const auto& c : cells) probes += c.probes;
  m.objectives = {{"cells", static_cast<double>(cells.size())},
                  {"probes", static_cast<double>(probes)},
                  {"tau_max_hours", tau_max_h}};
  m.statuses = {{"sweep", n_err == 0 ? "done" : "errors"}};
  write_manifest(join_path(a.out_dir, "manifest.json"), m);

  for (const auto& c : cells) {
    int hh = static_cast<int>(c.t0 * in.cfg.grid.slot_hours);
    int mm = static_cast<int>(std::lround((c.t0 * in.cfg.grid.slot_hours - hh) * 60));
    std::printf("t0=%d clock=%02d:%02d dp=%+g tau_slots=%d tau_hours=%.2f status=%s\n",
                c.t0, hh, mm, c.delta_p_kw, c.tau_slots, c.tau_hours,
                c.status.c_str());
  }

  if (verify_linear) {
    auto vb = SolverBackend::create(a.backend_name);
    int mismatches = 0;
    for (const auto& c : cells) {
      if (c.status == "error") continue;
      FlexibilityCell lin = linear_max_duration(base, c.t0, c.delta_p_kw, in.cfg, *vb);
      bool same = lin.tau_slots == c.tau_slots && lin.status == c.status;
      std::printf("verify t0=%d dp=%+g: search=%d(%s) scan=%d(%s) %s\n", c.t0,
                  c.delta_p_kw, c.tau_slots, c.status.c_str(), lin.tau_slots,
                  lin.status.c_str(), same ? "match" : "MISMATCH");
      if (!same) ++mismatches;
    }
    if (mismatches > 0) {
      std::cerr << "error: " << mismatches << " cell(s) diverge from the linear scan\n";
      return kExitVerify;
    }
  }
  return n_err == 0 ? 0 : kExitSolver;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Data-centre flexibility toolkit: baseline simulation, integrated "
      "cost-optimal scheduling, and duration-aware flexibility envelopes"};
  app.require_subcommand(1);

  CommonArgs base_args, opt_args, flex_args;

  CLI::App* base_cmd =
      app.add_subcommand("base", "Simulate the fixed-setpoint reference day");
  add_common(base_cmd, base_args, false);

  CLI::App* opt_cmd = app.add_subcommand(
      "optimise", "Compute the integrated cost-optimal day-ahead schedule");
  add_common(opt_cmd, opt_args, true);
  int segments = 0;
  double time_limit = 0.0;
  opt_cmd->add_option("--segments", segments,
                      "Piecewise segments for the IT power curve (override)");
  opt_cmd->add_option("--time-limit", time_limit, "Solver time limit override, seconds");

  CLI::App* flex_cmd = app.add_subcommand(
      "flex", "Sweep the flexibility envelope around a saved optimised baseline");
  add_common(flex_cmd, flex_args, true);
  std::string baseline_dir;
  std::string t0_list =
      "0,4,8,12,16,20,24,28,32,36,40,44,48,52,56,60,64,68,72,76,80,84,88,92";
  std::string dp_list = "-200,-100,-50,50,100,200";
  int jobs = 1;
  bool verify_linear = false;
  flex_cmd->add_option("--baseline", baseline_dir,
                       "Directory holding an optimise run (schedule/states/allocations)")
      ->required();
  flex_cmd->add_option("--t0-grid", t0_list, "Comma-separated start slots");
  flex_cmd->add_option("--dp-grid", dp_list, "Comma-separated power offsets, kW");
  flex_cmd->add_option("-j,--jobs", jobs, "Parallel solver workers");
  flex_cmd->add_flag("--verify-linear-scan", verify_linear,
                     "Re-resolve every cell with an exhaustive scan and compare");

  CLI11_PARSE(app, argc, argv);

  try {
    if (base_cmd->parsed()) return run_base(base_args);
    if (opt_cmd->parsed()) return run_optimise(opt_args, segments, time_limit);
    return run_flex(flex_args, baseline_dir, t0_list, dp_list, jobs, verify_linear);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
}
