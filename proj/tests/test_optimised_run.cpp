// Integrated cost optimisation: two-pass solve, frozen optimal costs, audit
// cleanliness, allocation sanity, and CSV round-trips of the solved schedule.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <memory>
#include <string>

#include "dcflex/backend.hpp"
#include "dcflex/config.hpp"
#include "dcflex/csvio.hpp"
#include "dcflex/runs.hpp"
#include "dcflex/schedule.hpp"
#include "dcflex/tables.hpp"
#include "dcflex/workload.hpp"

using namespace dcflex;

static const std::string kData = DCFLEX_DATA_DIR;

TEST_CASE("cost optimisation lands on the frozen two-pass optimum") {
  FacilityConfig cfg = load_facility_config(kData + "/facility.ini");
  WorkloadTables t = load_workload_tables(kData + "/workload.csv", kData + "/tranches.csv");
  WorkloadProfile profile = build_workload_profile(t, cfg.grid, cfg.it);
  std::unique_ptr<SolverBackend> backend = SolverBackend::create("");

  OptimisedRunResult r = run_scenario2(cfg, profile, *backend);
  REQUIRE(r.ok());
  CHECK((r.pass1_status == SolveStatus::Optimal || r.pass1_status == SolveStatus::Feasible));
  CHECK((r.pass2_status == SolveStatus::Optimal || r.pass2_status == SolveStatus::Feasible));
  const ScheduleSolution& s = r.schedule;
  REQUIRE(s.n_slots == 108);

  // Frozen from an independent construction of the same MILP solved to the
  // same 1e-6 relative gap.
  CHECK(r.pass1_cost_gbp == doctest::Approx(1551.0341672475556).epsilon(3e-5));

  // The shift-minimising pass trades cost for fewer shifted slots until its
  // cost cap binds, so the final cost sits on pass1 * (1 + slack).
  double cap = r.pass1_cost_gbp * (1.0 + cfg.solver.baseline_shift_slack);
  CHECK(s.cost_total_gbp <= cap + 1e-3);
  CHECK(s.cost_total_gbp == doctest::Approx(1566.5445089200316).epsilon(3e-5));
  CHECK(s.cost_main_gbp == doctest::Approx(1517.288772047898).epsilon(1e-3));
  CHECK(s.cost_pass1_gbp == doctest::Approx(r.pass1_cost_gbp).epsilon(1e-12));

  // Saving vs the fixed-setpoint base case (main day).
  BaseRunResult base = run_scenario1(cfg, profile);
  double saving_pct =
      100.0 * (base.schedule.cost_main_gbp - s.cost_main_gbp) / base.schedule.cost_main_gbp;
  CHECK(saving_pct > 8.02);
  CHECK(saving_pct < 12.02);

  // Linearization error over the whole horizon is bounded by the certified
  // per-evaluation worst case times slot count times slot length.
  CHECK(r.linearization_audit_kwh <=
        r.curve.max_abs_error_kw * 108 * cfg.grid.slot_hours + 1e-9);
  CHECK(r.curve.max_abs_error_kw < 2.0);

  // Every conservation, balance, bound, and replay property holds, including
  // the cyclic storage endpoints over the extended horizon.
  AuditOptions opts;
  opts.profile = &profile;
  opts.expect_cyclic_ups = true;
  opts.expect_cyclic_tes = true;
  std::vector<std::string> failures = audit_schedule(s, cfg, opts);
  for (const std::string& f : failures) MESSAGE(f);
  CHECK(failures.empty());

  // Allocation ledger: every piece executes inside its deferral window.
  REQUIRE_FALSE(s.allocations.empty());
  double alloc_u = 0.0;
  for (const AllocPiece& a : s.allocations) {
    CHECK(a.exec >= a.origin);
    CHECK(a.exec - a.origin <= profile.d_k[static_cast<size_t>(a.tranche)]);
    CHECK(a.u > 0.0);
    alloc_u += a.u;
  }
  double demand_u = 0.0;
  for (double v : profile.u_flex_base) demand_u += v;
  CHECK(alloc_u == doctest::Approx(demand_u).epsilon(1e-9));

  // Histogram over shift distances accounts for all flexible CPU-hours.
  std::vector<double> hist = shift_histogram(s.allocations, cfg.grid.slot_hours, 12);
  REQUIRE(hist.size() == 13);
  double hist_total = 0.0;
  for (double h : hist) hist_total += h;
  CHECK(hist_total == doctest::Approx(demand_u * cfg.grid.slot_hours).epsilon(1e-9));

  // CSV round-trip: %.17g serialisation reproduces the solution exactly.
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "dcflex_roundtrip_test";
  fs::create_directories(dir);
  write_schedule_csv((dir / "schedule.csv").string(), s);
  write_states_csv((dir / "states.csv").string(), s);
  write_allocations_csv((dir / "allocations.csv").string(), s.allocations);

  // The reader restores what a later flexibility run needs: the grid-facing
  // power columns plus the full state trajectories.
  ScheduleSolution back =
      read_schedule_csv((dir / "schedule.csv").string(), (dir / "states.csv").string());
  REQUIRE(back.n_slots == s.n_slots);
  CHECK(back.first_slot == s.first_slot);
  CHECK(back.od_kw == s.od_kw);
  for (int i = 0; i < s.n_slots; ++i) {
    size_t k = static_cast<size_t>(i);
    CHECK(back.p_grid_it[k] == s.p_grid_it[k]);
    CHECK(back.p_ups_ch[k] == s.p_ups_ch[k]);
    CHECK(back.p_ups_disch[k] == s.p_ups_disch[k]);
    CHECK(back.p_chil_crac[k] == s.p_chil_crac[k]);
    CHECK(back.p_chil_tes[k] == s.p_chil_tes[k]);
    CHECK(back.price_gbp_per_mwh[k] == s.price_gbp_per_mwh[k]);
    CHECK(back.grid_kw(i) == doctest::Approx(s.grid_kw(i)).epsilon(1e-15));
  }
  for (int i = 0; i <= s.n_slots; ++i) {
    size_t k = static_cast<size_t>(i);
    CHECK(back.e_ups[k] == s.e_ups[k]);
    CHECK(back.e_tes[k] == s.e_tes[k]);
    for (int n = 0; n < kNumNodes; ++n) CHECK(back.temps[k][static_cast<size_t>(n)] == s.temps[k][static_cast<size_t>(n)]);
  }
  std::vector<AllocPiece> alloc_back = read_allocations_csv((dir / "allocations.csv").string());
  REQUIRE(alloc_back.size() == s.allocations.size());
  for (size_t i = 0; i < alloc_back.size(); ++i) {
    CHECK(alloc_back[i].origin == s.allocations[i].origin);
    CHECK(alloc_back[i].tranche == s.allocations[i].tranche);
    CHECK(alloc_back[i].exec == s.allocations[i].exec);
    CHECK(alloc_back[i].u == s.allocations[i].u);
  }
  fs::remove_all(dir);
}
