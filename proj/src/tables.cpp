#include "dcflex/tables.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dcflex {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::vector<double>> read_table(const std::string& path,
                                            const std::vector<std::string>& header,
                                            std::string* raw_out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("tables: cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  if (raw_out) *raw_out = buf.str();
  std::istringstream lines(buf.str());
  std::string line;
  if (!std::getline(lines, line)) throw std::runtime_error("tables: empty file " + path);
  auto cols = split_csv(line);
  if (cols.size() != header.size())
    throw std::runtime_error("tables: wrong column count in " + path);
  for (size_t i = 0; i < header.size(); ++i)
    if (cols[i] != header[i])
      throw std::runtime_error("tables: expected column '" + header[i] + "', got '" + cols[i] +
                               "' in " + path);
  std::vector<std::vector<double>> rows;
  int lineno = 1;
  while (std::getline(lines, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    auto cells = split_csv(line);
    if (cells.size() != header.size())
      throw std::runtime_error("tables: wrong cell count at line " + std::to_string(lineno) +
                               " of " + path);
    std::vector<double> row;
    for (const auto& cell : cells) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw std::runtime_error("tables: non-numeric cell '" + cell + "' at line " +
                                 std::to_string(lineno) + " of " + path);
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

WorkloadTables load_workload_tables(const std::string& workload_csv,
                                    const std::string& tranches_csv) {
  WorkloadTables t;
  std::string raw;
  auto wrows = read_table(workload_csv, {"hour", "inflexible_pct", "flexible_pct"}, &raw);
  t.workload_hash = fnv1a_hex(raw);
  if (wrows.size() != 24)
    throw std::runtime_error("tables: workload table must have 24 hourly rows");
  t.inflex_frac.resize(24);
  t.flex_frac.resize(24);
  for (const auto& row : wrows) {
    int hour = static_cast<int>(row[0]);
    if (hour < 0 || hour > 23 || row[0] != hour)
      throw std::runtime_error("tables: bad hour in workload table");
    for (double pct : {row[1], row[2]})
      if (pct < 0 || pct > 100)
        throw std::runtime_error("tables: utilisation ratio outside [0,100] at hour " +
                                 std::to_string(hour));
    t.inflex_frac[static_cast<size_t>(hour)] = row[1] / 100.0;
    t.flex_frac[static_cast<size_t>(hour)] = row[2] / 100.0;
  }

  auto drows = read_table(tranches_csv,
                          {"hour", "pct_le_30min", "pct_le_1h", "pct_le_2h", "pct_le_3h"}, &raw);
  t.tranches_hash = fnv1a_hex(raw);
  if (drows.size() != 24)
    throw std::runtime_error("tables: deferral table must have 24 hourly rows");
  t.deferral.resize(24);
  for (const auto& row : drows) {
    int hour = static_cast<int>(row[0]);
    if (hour < 0 || hour > 23 || row[0] != hour)
      throw std::runtime_error("tables: bad hour in deferral table");
    double sum = row[1] + row[2] + row[3] + row[4];
    if (std::abs(sum - 100.0) > 0.5)
      throw std::runtime_error("tables: deferral percentages at hour " + std::to_string(hour) +
                               " sum to " + std::to_string(sum) + ", outside 100 +/- 0.5");
    for (int k = 0; k < kNumTranches; ++k)
      t.deferral[static_cast<size_t>(hour)][static_cast<size_t>(k)] = row[static_cast<size_t>(k + 1)] / sum;
  }
  return t;
}

WorkloadProfile build_workload_profile(const WorkloadTables& tables, const TimeGrid& grid,
                                       const ITParams& it) {
  WorkloadProfile p;
  int per_hour = static_cast<int>(std::lround(1.0 / grid.slot_hours));
  int total = grid.total_slots();
  p.u_inflex.assign(static_cast<size_t>(total), 0.0);
  p.u_flex_base.assign(static_cast<size_t>(total), 0.0);
  p.alpha.assign(static_cast<size_t>(grid.main_slots), {});
  for (int s = 0; s < total; ++s) {
    // Extension slots carry no demand of their own (both shares zero); they
    // exist so late-day deferrals have somewhere to land.
    if (s < grid.main_slots) {
      int hour = s / per_hour;
      p.u_inflex[static_cast<size_t>(s)] = tables.inflex_frac[static_cast<size_t>(hour)];
      p.u_flex_base[static_cast<size_t>(s)] = tables.flex_frac[static_cast<size_t>(hour)];
      p.alpha[static_cast<size_t>(s)] = tables.deferral[static_cast<size_t>(hour)];
    }
    double u_tot = p.u_inflex[static_cast<size_t>(s)] + p.u_flex_base[static_cast<size_t>(s)];
    if (u_tot < 0 || u_tot > it.u_max + 1e-12)
      throw std::runtime_error("tables: combined utilisation " + std::to_string(u_tot) +
                               " exceeds capacity at slot " + std::to_string(s));
  }
  for (int k = 0; k < kNumTranches; ++k) {
    double slots = kTrancheHours[static_cast<size_t>(k)] / grid.slot_hours;
    if (std::abs(slots - std::round(slots)) > 1e-9)
      throw std::runtime_error("tables: tranche tolerance not a whole number of slots");
    p.d_k[static_cast<size_t>(k)] = static_cast<int>(std::round(slots));
  }
  return p;
}

std::vector<double> base_it_power(const WorkloadProfile& profile, const ITParams& it) {
  std::vector<double> out(profile.u_inflex.size());
  for (size_t s = 0; s < out.size(); ++s)
    out[s] = it.power_kw(profile.u_inflex[s] + profile.u_flex_base[s]);
  return out;
}

}  // namespace dcflex
