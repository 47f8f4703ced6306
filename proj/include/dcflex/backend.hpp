#pragma once
// Solver-backend contract and the bundled implementation: a persistent
// subprocess speaking JSON-lines to a HiGHS-based MILP worker. The contract
// is engine-agnostic — any solver able to handle binaries and bounded rows
// can sit behind it.

#include <memory>
#include <string>
#include <vector>

#include "dcflex/model.hpp"

namespace dcflex {

enum class SolveStatus { Optimal, Feasible, Infeasible, Unbounded, Timeout, Error };

const char* solve_status_name(SolveStatus s);

struct SolveOptions {
  double mip_rel_gap = 1e-6;
  double time_limit_s = 300.0;
};

struct SolveResult {
  SolveStatus status = SolveStatus::Error;
  double objective = 0.0;
  std::vector<double> x;
  std::string message;

  // True when a usable incumbent exists (proven optimal or feasible-within-gap).
  bool has_solution() const {
    return status == SolveStatus::Optimal || status == SolveStatus::Feasible;
  }
};

class SolverBackend {
 public:
  virtual ~SolverBackend() = default;
  virtual SolveResult solve(const ModelInstance& model, const SolveOptions& opts) = 0;
  virtual std::string identity() const = 0;
  virtual int solve_count() const = 0;

  // Resolves the backend by name ("" uses the DCFLEX_BACKEND environment
  // variable, then the built-in default). Throws on unknown names, listing
  // the supported set.
  static std::unique_ptr<SolverBackend> create(const std::string& name = "");
};

// Locates the MILP worker script: DCFLEX_WORKER env var, then the built-in
// path compiled into the binary.
std::string default_worker_path();

}  // namespace dcflex
