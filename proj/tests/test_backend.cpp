// Solver backend: worker lifecycle, status mapping, integrality, infinite
// bounds, and crash recovery.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <memory>
#include <string>

#include "dcflex/backend.hpp"
#include "dcflex/model.hpp"

using namespace dcflex;

TEST_CASE("backend solves, reports identity, and counts solves") {
  auto backend = SolverBackend::create("scipy-highs");
  REQUIRE(backend != nullptr);
  CHECK(backend->identity().find("highs") != std::string::npos);
  CHECK(backend->solve_count() == 0);

  SUBCASE("empty model is trivially optimal") {
    ModelInstance m;
    SolveResult r = backend->solve(m, {});
    CHECK(r.status == SolveStatus::Optimal);
    CHECK(r.objective == doctest::Approx(0.0));
    CHECK(backend->solve_count() == 1);
  }

  SUBCASE("bounded LP lands on the active bound") {
    ModelInstance m;
    int x = m.add_var(2.0, 5.0, 1.0, false, "x");
    SolveResult r = backend->solve(m, {});
    REQUIRE(r.status == SolveStatus::Optimal);
    CHECK(r.objective == doctest::Approx(2.0).epsilon(1e-9));
    REQUIRE(r.x.size() == 1u);
    CHECK(r.x[static_cast<size_t>(x)] == doctest::Approx(2.0).epsilon(1e-9));
  }

  SUBCASE("binary knapsack prefers the heavier item") {
    ModelInstance m;
    int x1 = m.add_var(0.0, 1.0, -1.0, true, "x1");
    int x2 = m.add_var(0.0, 1.0, -2.0, true, "x2");
    m.add_row({{x1, 1.0}, {x2, 1.0}}, -kInf, 1.0, "cap");
    SolveResult r = backend->solve(m, {});
    REQUIRE(r.status == SolveStatus::Optimal);
    CHECK(r.objective == doctest::Approx(-2.0).epsilon(1e-9));
    CHECK(r.x[static_cast<size_t>(x1)] == doctest::Approx(0.0).epsilon(1e-7));
    CHECK(r.x[static_cast<size_t>(x2)] == doctest::Approx(1.0).epsilon(1e-7));
  }

  SUBCASE("contradictory rows are infeasible") {
    ModelInstance m;
    int x = m.add_var(0.0, 1.0, 0.0, false, "x");
    m.add_row({{x, 1.0}}, 3.0, 4.0, "unreachable");
    SolveResult r = backend->solve(m, {});
    CHECK(r.status == SolveStatus::Infeasible);
    CHECK(!r.has_solution());
  }

  SUBCASE("open descent direction is unbounded") {
    ModelInstance m;
    m.add_var(0.0, kInf, -1.0, false, "x");
    SolveResult r = backend->solve(m, {});
    CHECK(r.status == SolveStatus::Unbounded);
  }

  SUBCASE("infinite bounds pass through the wire format") {
    ModelInstance m;
    int x = m.add_var(-kInf, kInf, 1.0, false, "x");
    m.add_row({{x, 1.0}}, -7.0, kInf, "floor");
    SolveResult r = backend->solve(m, {});
    REQUIRE(r.status == SolveStatus::Optimal);
    CHECK(r.x[static_cast<size_t>(x)] == doctest::Approx(-7.0).epsilon(1e-9));
  }

  SUBCASE("repeated coefficients are summed") {
    ModelInstance m;
    int x = m.add_var(0.0, 10.0, 1.0, false, "x");
    m.add_row({{x, 1.0}, {x, 1.0}}, 6.0, kInf, "double");
    SolveResult r = backend->solve(m, {});
    REQUIRE(r.status == SolveStatus::Optimal);
    CHECK(r.x[static_cast<size_t>(x)] == doctest::Approx(3.0).epsilon(1e-9));
  }
}

TEST_CASE("worker crash is survived by a respawn") {
  auto backend = SolverBackend::create("scipy-highs");
  ModelInstance m;
  int x = m.add_var(1.0, 2.0, 1.0, false, "x");
  SolveResult first = backend->solve(m, {});
  REQUIRE(first.status == SolveStatus::Optimal);

  // Kill the persistent worker out from under the backend.
  REQUIRE(std::system("pkill -f milp_worker.py >/dev/null 2>&1") != -1);

  SolveResult again = backend->solve(m, {});
  REQUIRE(again.status == SolveStatus::Optimal);
  CHECK(again.x[static_cast<size_t>(x)] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("unknown backends are rejected by name") {
  CHECK_THROWS_AS(SolverBackend::create("simplex-on-a-napkin"), std::exception);
  try {
    SolverBackend::create("simplex-on-a-napkin");
  } catch (const std::exception& e) {
    CHECK(std::string(e.what()).find("scipy-highs") != std::string::npos);
  }
}

TEST_CASE("fix_var pins both bounds") {
  ModelInstance m;
  int x = m.add_var(0.0, 10.0, 1.0, false, "x");
  m.fix_var(x, 4.5);
  auto backend = SolverBackend::create("scipy-highs");
  SolveResult r = backend->solve(m, {});
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.objective == doctest::Approx(4.5).epsilon(1e-9));
}
