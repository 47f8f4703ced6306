// Deferrable-job construction from the profile and shift accounting.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <string>
#include <vector>

#include "dcflex/config.hpp"
#include "dcflex/tables.hpp"
#include "dcflex/workload.hpp"

using namespace dcflex;

static const std::string kData = DCFLEX_DATA_DIR;

TEST_CASE("jobs cover every arrival slot and tranche with clipped windows") {
  FacilityConfig cfg = load_facility_config(kData + "/facility.ini");
  WorkloadTables t = load_workload_tables(kData + "/workload.csv", kData + "/tranches.csv");
  WorkloadProfile p = build_workload_profile(t, cfg.grid, cfg.it);

  std::vector<JobSpec> jobs = jobs_from_profile(p, cfg.grid);
  // Every main slot has flexible demand and all four class shares are
  // positive in the published tables.
  CHECK(jobs.size() == 96u * 4u);

  const JobSpec& first = jobs.front();
  CHECK(first.origin == 0);
  CHECK(first.tranche == 0);
  CHECK(first.first == 0);
  CHECK(first.last == 2);  // 30-minute tolerance = 2 slots beyond arrival
  CHECK(first.demand_u == doctest::Approx(0.40 * 0.25).epsilon(1e-12));

  // Latest arrival, most patient class: window clipped at the horizon end.
  const JobSpec& last = jobs.back();
  CHECK(last.origin == 95);
  CHECK(last.tranche == 3);
  CHECK(last.first == 95);
  CHECK(last.last == 107);

  // Job demand conserves the flexible share exactly.
  double total = 0.0;
  for (const auto& j : jobs) total += j.demand_u;
  double expect = 0.0;
  for (int s = 0; s < 96; ++s) expect += p.u_flex_base[static_cast<size_t>(s)];
  CHECK(total == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("zero-demand arrivals and zero shares produce no jobs") {
  WorkloadProfile p;
  TimeGrid grid{0.25, 3, 2};
  p.u_inflex = {0.1, 0.1, 0.1, 0.0, 0.0};
  p.u_flex_base = {0.2, 0.0, 0.3, 0.0, 0.0};
  p.alpha.resize(3);
  p.alpha[0] = {1.0, 0.0, 0.0, 0.0};
  p.alpha[1] = {0.25, 0.25, 0.25, 0.25};
  p.alpha[2] = {0.5, 0.0, 0.5, 0.0};
  p.d_k = {1, 2, 3, 4};

  std::vector<JobSpec> jobs = jobs_from_profile(p, grid);
  REQUIRE(jobs.size() == 3u);  // slot 0 one class, slot 1 no demand, slot 2 two
  CHECK(jobs[0].demand_u == doctest::Approx(0.2));
  CHECK(jobs[0].last == 1);
  CHECK(jobs[1].origin == 2);
  CHECK(jobs[1].tranche == 0);
  CHECK(jobs[1].last == 3);
  CHECK(jobs[2].tranche == 2);
  CHECK(jobs[2].last == 4);  // clipped: 2 + 3 slots tolerance = 5 > last slot 4
  CHECK(jobs[2].demand_u == doctest::Approx(0.15));
}

TEST_CASE("histogram accumulates CPU-hours by shift distance") {
  std::vector<AllocPiece> alloc = {
      {0, 0, 0, 0.4},   // executed on arrival
      {0, 1, 2, 0.2},   // shifted 2 slots
      {5, 3, 9, 0.1},   // shifted 4 slots
      {10, 3, 12, 0.3}, // shifted 2 slots
  };
  std::vector<double> hist = shift_histogram(alloc, 0.25, 12);
  REQUIRE(hist.size() == 13u);
  CHECK(hist[0] == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(hist[2] == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(hist[4] == doctest::Approx(0.025).epsilon(1e-12));
  CHECK(hist[1] == 0.0);
  double total = 0.0;
  for (double v : hist) total += v;
  CHECK(total == doctest::Approx(0.25).epsilon(1e-12));

  // Backward or over-long shifts violate the ledger contract.
  CHECK_THROWS(shift_histogram({{5, 0, 3, 0.1}}, 0.25, 12));
  CHECK_THROWS(shift_histogram({{0, 3, 13, 0.1}}, 0.25, 12));
}
