#include "dcflex/manifest.hpp"

#include <ctime>
#include <fstream>
#include <nlohmann/json.hpp>
#include <stdexcept>

namespace dcflex {

std::string current_utc_iso8601() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_manifest(const std::string& path, const RunManifest& m) {
  nlohmann::ordered_json j;
  j["run_kind"] = m.run_kind;
  j["created_utc"] = m.created_utc;
  j["config"] = {{"path", m.config_path}, {"hash", m.config_hash}};
  j["tables"] = {{"workload_hash", m.workload_hash}, {"tranches_hash", m.tranches_hash}};
  j["solver"] = {{"identity", m.solver_identity},
                 {"mip_rel_gap", m.mip_rel_gap},
                 {"probe_mip_rel_gap", m.probe_mip_rel_gap},
                 {"time_limit_s", m.time_limit_s},
                 {"solve_count", m.solve_count}};
  j["tolerances"] = {{"p_tol_kw", m.p_tol_kw}};
  j["linearization"] = {{"segments", m.piecewise_segments},
                        {"max_abs_error_kw", m.piecewise_max_abs_error_kw}};
  nlohmann::ordered_json obj = nlohmann::ordered_json::object();
  for (const auto& [name, value] : m.objectives) obj[name] = value;
  j["objectives"] = obj;
  nlohmann::ordered_json st = nlohmann::ordered_json::object();
  for (const auto& [name, value] : m.statuses) st[name] = value;
  j["statuses"] = st;
  j["anomalies"] = m.anomalies;
  j["result_files"] = m.result_files;

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace dcflex
