// Fixed-setpoint base case: closed-form simulation, exact cost accounting,
// overhead estimate, and audit cleanliness.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>

#include "dcflex/config.hpp"
#include "dcflex/runs.hpp"
#include "dcflex/schedule.hpp"
#include "dcflex/tables.hpp"
#include "dcflex/thermal.hpp"

using namespace dcflex;

static const std::string kData = DCFLEX_DATA_DIR;

namespace {
struct Loaded {
  FacilityConfig cfg;
  WorkloadProfile profile;
};

Loaded load_all() {
  Loaded l;
  l.cfg = load_facility_config(kData + "/facility.ini");
  WorkloadTables t = load_workload_tables(kData + "/workload.csv", kData + "/tranches.csv");
  l.profile = build_workload_profile(t, l.cfg.grid, l.cfg.it);
  return l;
}
}  // namespace

TEST_CASE("base run reproduces the hand-simulated cost") {
  Loaded l = load_all();
  BaseRunResult r = run_scenario1(l.cfg, l.profile);
  const ScheduleSolution& s = r.schedule;

  CHECK(s.status == "simulated");
  CHECK(s.first_slot == 0);
  REQUIRE(s.n_slots == 108);
  REQUIRE(s.e_ups.size() == 109);
  REQUIRE(s.temps.size() == 109);

  // Main-day cost, frozen from an independent slot-by-slot simulation of the
  // same physics (exact power curve, per-slot chiller balance, tariff).
  CHECK(s.cost_main_gbp == doctest::Approx(1666.3621949108356).epsilon(1e-10));
  CHECK(s.cost_total_gbp > s.cost_main_gbp);  // extension slots add idle cost

  // Storage is idle throughout a base run.
  for (int i = 0; i <= s.n_slots; ++i) {
    CHECK(s.e_ups[static_cast<size_t>(i)] == doctest::Approx(300.0).epsilon(1e-12));
    CHECK(s.e_tes[static_cast<size_t>(i)] == doctest::Approx(0.0));
  }
  for (int i = 0; i < s.n_slots; ++i) {
    CHECK(s.p_ups_ch[static_cast<size_t>(i)] == 0.0);
    CHECK(s.p_ups_disch[static_cast<size_t>(i)] == 0.0);
    CHECK(s.p_chil_tes[static_cast<size_t>(i)] == 0.0);
    CHECK(s.q_tes_crac[static_cast<size_t>(i)] == 0.0);
  }

  // Cold aisle pinned to the setpoint at every state boundary.
  for (int i = 0; i <= s.n_slots; ++i)
    CHECK(s.temps[static_cast<size_t>(i)][NODE_CA] == doctest::Approx(22.5).epsilon(1e-9));

  // Slot 0: both shares of hour 0 execute at arrival (0.28 + 0.40).
  CHECK(s.u_tot[0] == doctest::Approx(0.68).epsilon(1e-12));
  CHECK(s.u_fixed[0] == doctest::Approx(0.68).epsilon(1e-12));
  CHECK(s.p_grid_it[0] == doctest::Approx(667.55630657189886).epsilon(1e-12));
  // Steady start + constant utilisation across hour 0 => steady chiller power.
  CHECK(s.p_chil_crac[0] == doctest::Approx(173.71130719892921).epsilon(1e-9));

  // Extension slots carry only idle IT power.
  CHECK(s.u_tot[100] == doctest::Approx(0.0));
  CHECK(s.p_grid_it[100] == doctest::Approx(166.7).epsilon(1e-12));

  // Overhead rule estimate sits near (but not exactly at) the configured
  // constant, which triggers the advisory warning.
  CHECK(r.overhead_estimate_kw == doctest::Approx(50.046).epsilon(1e-3));
  REQUIRE_FALSE(r.warnings.empty());
  CHECK(r.warnings.front().find("overhead draw") != std::string::npos);

  // grid_kw composes the published columns.
  CHECK(s.grid_kw(0) ==
        doctest::Approx(s.p_grid_it[0] + l.cfg.econ.p_grid_od_kw + s.p_chil_crac[0])
            .epsilon(1e-12));
}

TEST_CASE("base-run cost is linear in the tariff") {
  Loaded l = load_all();
  BaseRunResult r1 = run_scenario1(l.cfg, l.profile);

  FacilityConfig doubled = l.cfg;
  for (double& p : doubled.econ.hourly_prices_gbp_per_mwh) p *= 2.0;
  BaseRunResult r2 = run_scenario1(doubled, l.profile);
  CHECK(r2.schedule.cost_main_gbp ==
        doctest::Approx(2.0 * r1.schedule.cost_main_gbp).epsilon(1e-12));
  CHECK(r2.schedule.cost_total_gbp ==
        doctest::Approx(2.0 * r1.schedule.cost_total_gbp).epsilon(1e-12));

  FacilityConfig zeroed = l.cfg;
  for (double& p : zeroed.econ.hourly_prices_gbp_per_mwh) p = 0.0;
  BaseRunResult r0 = run_scenario1(zeroed, l.profile);
  CHECK(r0.schedule.cost_total_gbp == doctest::Approx(0.0));
}

TEST_CASE("base-run trajectory passes every property audit") {
  Loaded l = load_all();
  BaseRunResult r = run_scenario1(l.cfg, l.profile);

  AuditOptions opts;  // no job ledger in a base run: skip work conservation
  std::vector<std::string> failures = audit_schedule(r.schedule, l.cfg, opts);
  for (const std::string& f : failures) MESSAGE(f);
  CHECK(failures.empty());
}
