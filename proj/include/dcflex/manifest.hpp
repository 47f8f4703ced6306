#pragma once
// Run metadata: every result directory carries one manifest tying its files
// to the exact inputs, solver, and tolerances that produced them.

#include <string>
#include <vector>

#include "dcflex/config.hpp"

namespace dcflex {

struct RunManifest {
  std::string run_kind;  // base | optimise | flex
  std::string config_path, config_hash;
  std::string workload_hash, tranches_hash;
  std::string solver_identity;
  double mip_rel_gap = 0.0;
  double probe_mip_rel_gap = 0.0;
  double time_limit_s = 0.0;
  double p_tol_kw = 0.0;
  int piecewise_segments = 0;
  double piecewise_max_abs_error_kw = 0.0;
  std::string created_utc;  // ISO-8601, the only run-to-run varying field
  int solve_count = 0;
  // name -> value pairs kept ordered for deterministic output.
  std::vector<std::pair<std::string, double>> objectives;
  std::vector<std::pair<std::string, std::string>> statuses;
  std::vector<std::string> anomalies;
  std::vector<std::string> result_files;
};

std::string current_utc_iso8601();

// Serialises deterministically (keys ordered); `created_utc` is the only
// field that differs between identical runs.
void write_manifest(const std::string& path, const RunManifest& m);

}  // namespace dcflex
