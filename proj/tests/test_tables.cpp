// Workload tables: CSV ingestion, hourly-to-slot expansion, tranche
// normalisation, and the exact baseline IT power.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "dcflex/config.hpp"
#include "dcflex/tables.hpp"

using namespace dcflex;

static const std::string kData = DCFLEX_DATA_DIR;
static const std::string kIni = kData + "/facility.ini";
static const std::string kWorkload = kData + "/workload.csv";
static const std::string kTranches = kData + "/tranches.csv";

TEST_CASE("hourly tables load with the published ratios") {
  WorkloadTables t = load_workload_tables(kWorkload, kTranches);
  REQUIRE(t.inflex_frac.size() == 24);
  REQUIRE(t.flex_frac.size() == 24);
  REQUIRE(t.deferral.size() == 24);

  CHECK(t.inflex_frac[0] == doctest::Approx(0.28).epsilon(1e-12));
  CHECK(t.flex_frac[0] == doctest::Approx(0.40).epsilon(1e-12));
  CHECK(t.inflex_frac[11] == doctest::Approx(0.42).epsilon(1e-12));
  CHECK(t.flex_frac[17] == doctest::Approx(0.40).epsilon(1e-12));
  CHECK(t.flex_frac[20] == doctest::Approx(0.47).epsilon(1e-12));

  // Hour-0 deferral split: 25/25/20/30 percent across the four classes.
  CHECK(t.deferral[0][0] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(t.deferral[0][1] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(t.deferral[0][2] == doctest::Approx(0.20).epsilon(1e-12));
  CHECK(t.deferral[0][3] == doctest::Approx(0.30).epsilon(1e-12));
  for (const auto& row : t.deferral) {
    double sum = row[0] + row[1] + row[2] + row[3];
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(!t.workload_hash.empty());
  CHECK(!t.tranches_hash.empty());
  CHECK(t.workload_hash != t.tranches_hash);
}

TEST_CASE("profile expansion covers the grid and zeroes the extension") {
  FacilityConfig cfg = load_facility_config(kIni);
  WorkloadTables t = load_workload_tables(kWorkload, kTranches);
  WorkloadProfile p = build_workload_profile(t, cfg.grid, cfg.it);

  REQUIRE(p.u_inflex.size() == 108);
  REQUIRE(p.u_flex_base.size() == 108);
  REQUIRE(p.alpha.size() == 96);
  CHECK(p.d_k[0] == 2);
  CHECK(p.d_k[1] == 4);
  CHECK(p.d_k[2] == 8);
  CHECK(p.d_k[3] == 12);

  // Hour rows repeat across their four slots.
  for (int s = 0; s < 4; ++s) {
    CHECK(p.u_inflex[static_cast<size_t>(s)] == doctest::Approx(0.28).epsilon(1e-12));
    CHECK(p.u_flex_base[static_cast<size_t>(s)] == doctest::Approx(0.40).epsilon(1e-12));
  }
  CHECK(p.u_inflex[4] == doctest::Approx(0.25).epsilon(1e-12));   // hour 1
  CHECK(p.u_flex_base[68] == doctest::Approx(0.40).epsilon(1e-12));  // hour 17
  CHECK(p.u_inflex[68] == doctest::Approx(0.27).epsilon(1e-12));

  // Extension slots carry no demand of their own.
  for (int s = 96; s < 108; ++s) {
    CHECK(p.u_inflex[static_cast<size_t>(s)] == 0.0);
    CHECK(p.u_flex_base[static_cast<size_t>(s)] == 0.0);
  }

  CHECK(p.job_cpu_hours(0, cfg.grid.slot_hours) == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("baseline IT power is the exact power law at combined utilisation") {
  FacilityConfig cfg = load_facility_config(kIni);
  WorkloadTables t = load_workload_tables(kWorkload, kTranches);
  WorkloadProfile p = build_workload_profile(t, cfg.grid, cfg.it);
  std::vector<double> base = base_it_power(p, cfg.it);
  REQUIRE(base.size() == 108);
  // [DERIVED] power(0.68) for hour 0; idle on the demand-free extension.
  CHECK(base[0] == doctest::Approx(667.55630657189886).epsilon(1e-13));
  CHECK(base[100] == doctest::Approx(166.7).epsilon(1e-13));
}

static std::string write_temp_csv(const std::string& name, const std::string& body) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream f(path);
  f << body;
  return path.string();
}

TEST_CASE("malformed tables are rejected") {
  CHECK_THROWS(load_workload_tables("/nonexistent.csv", kTranches));
  CHECK_THROWS(load_workload_tables(kWorkload, "/nonexistent.csv"));

  SUBCASE("ratio outside [0,100]") {
    std::string head = "hour,inflexible_pct,flexible_pct\n";
    std::string body = head;
    for (int h = 0; h < 24; ++h)
      body += std::to_string(h) + (h == 5 ? ",120,10\n" : ",30,30\n");
    CHECK_THROWS(load_workload_tables(write_temp_csv("dcflex_bad_ratio.csv", body), kTranches));
  }
  SUBCASE("tranche percentages must sum to 100") {
    std::string body = "hour,pct_le_30min,pct_le_1h,pct_le_2h,pct_le_3h\n";
    for (int h = 0; h < 24; ++h)
      body += std::to_string(h) + (h == 3 ? ",10,10,10,10\n" : ",25,25,25,25\n");
    CHECK_THROWS(load_workload_tables(kWorkload, write_temp_csv("dcflex_bad_sum.csv", body)));
  }
  SUBCASE("missing hour row") {
    std::string body = "hour,inflexible_pct,flexible_pct\n";
    for (int h = 0; h < 23; ++h) body += std::to_string(h) + ",30,30\n";
    CHECK_THROWS(load_workload_tables(write_temp_csv("dcflex_short.csv", body), kTranches));
  }
}
