#include "dcflex/csvio.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dcflex {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  return in;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

void expect_header(const std::string& got, const std::string& want, const std::string& path) {
  std::string trimmed = got;
  while (!trimmed.empty() && (trimmed.back() == '\r' || trimmed.back() == '\n'))
    trimmed.pop_back();
  if (trimmed != want)
    throw std::runtime_error(path + ": header mismatch, expected \"" + want + "\" got \"" +
                             trimmed + "\"");
}

double to_double(const std::string& field, const std::string& path) {
  try {
    size_t used = 0;
    double v = std::stod(field, &used);
    if (used != field.size()) throw std::invalid_argument(field);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error(path + ": malformed number \"" + field + "\"");
  }
}

constexpr const char* kScheduleHeader =
    "slot,price_gbp_per_mwh,p_grid_it_kw,p_grid_od_kw,p_ups_ch_kw,p_ups_disch_kw,"
    "p_chil_crac_kw,p_chil_tes_kw,e_ups_kwh,e_tes_kwh,t_it_c,t_r_c,t_ca_c,t_ha_c,t_ain_c";
constexpr const char* kStatesHeader =
    "boundary,e_ups_kwh,e_tes_kwh,t_it_c,t_r_c,t_ca_c,t_ha_c,t_ain_c";
constexpr const char* kAllocHeader = "origin_slot,tranche,exec_slot,u_fraction";

}  // namespace

void write_schedule_csv(const std::string& path, const ScheduleSolution& s) {
  std::ofstream out = open_out(path);
  out << kScheduleHeader << "\n";
  for (int i = 0; i < s.n_slots; ++i) {
    size_t ii = static_cast<size_t>(i);
    out << s.global_slot(i) << ',' << num(s.price_gbp_per_mwh[ii]) << ','
        << num(s.p_grid_it[ii]) << ',' << num(s.od_kw) << ',' << num(s.p_ups_ch[ii]) << ','
        << num(s.p_ups_disch[ii]) << ',' << num(s.p_chil_crac[ii]) << ','
        << num(s.p_chil_tes[ii]) << ',' << num(s.e_ups[ii]) << ',' << num(s.e_tes[ii]);
    for (int node = 0; node < kNumNodes; ++node)
      out << ',' << num(s.temps[ii][static_cast<size_t>(node)]);
    out << "\n";
  }
}

void write_states_csv(const std::string& path, const ScheduleSolution& s) {
  std::ofstream out = open_out(path);
  out << kStatesHeader << "\n";
  for (int i = 0; i <= s.n_slots; ++i) {
    size_t ii = static_cast<size_t>(i);
    out << s.first_slot + i << ',' << num(s.e_ups[ii]) << ',' << num(s.e_tes[ii]);
    for (int node = 0; node < kNumNodes; ++node)
      out << ',' << num(s.temps[ii][static_cast<size_t>(node)]);
    out << "\n";
  }
}

void write_allocations_csv(const std::string& path,
                           const std::vector<AllocPiece>& allocations) {
  std::ofstream out = open_out(path);
  out << kAllocHeader << "\n";
  for (const AllocPiece& a : allocations)
    out << a.origin << ',' << a.tranche << ',' << a.exec << ',' << num(a.u) << "\n";
}

void write_histogram_csv(const std::string& path, const std::vector<double>& cpu_hours_by_shift,
                         double slot_hours) {
  std::ofstream out = open_out(path);
  out << "shift_slots,shift_hours,cpu_hours\n";
  for (size_t d = 0; d < cpu_hours_by_shift.size(); ++d)
    out << d << ',' << num(static_cast<double>(d) * slot_hours) << ','
        << num(cpu_hours_by_shift[d]) << "\n";
}

void write_heatmap_csv(const std::string& path, const std::vector<FlexibilityCell>& cells) {
  std::ofstream out = open_out(path);
  out << "t0_slot,delta_p_kw,tau_hours,status\n";
  for (const FlexibilityCell& c : cells)
    out << c.t0 << ',' << num(c.delta_p_kw) << ',' << num(c.tau_hours) << ',' << c.status
        << "\n";
}

void write_breakdown_csv(const std::string& path, const FlexibilityCell& cell) {
  std::ofstream out = open_out(path);
  out << "slot,d_it_kw,d_ups_kw,d_crac_kw,d_tes_kw,d_total_kw\n";
  for (size_t i = 0; i < cell.slots.size(); ++i)
    out << cell.slots[i] << ',' << num(cell.d_it[i]) << ',' << num(cell.d_ups[i]) << ','
        << num(cell.d_crac[i]) << ',' << num(cell.d_tes[i]) << ',' << num(cell.d_total[i])
        << "\n";
}

ScheduleSolution read_schedule_csv(const std::string& schedule_path,
                                   const std::string& states_path) {
  ScheduleSolution s;
  {
    std::ifstream in = open_in(schedule_path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(schedule_path + ": empty file");
    expect_header(line, kScheduleHeader, schedule_path);
    bool first = true;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::vector<std::string> f = split_csv(line);
      if (f.size() != 15)
        throw std::runtime_error(schedule_path + ": expected 15 fields, got " +
                                 std::to_string(f.size()));
      int slot = static_cast<int>(to_double(f[0], schedule_path));
      if (first) {
        s.first_slot = slot;
        first = false;
      } else if (slot != s.first_slot + s.n_slots) {
        throw std::runtime_error(schedule_path + ": non-contiguous slot " + f[0]);
      }
      s.price_gbp_per_mwh.push_back(to_double(f[1], schedule_path));
      s.p_grid_it.push_back(to_double(f[2], schedule_path));
      s.od_kw = to_double(f[3], schedule_path);
      s.p_ups_ch.push_back(to_double(f[4], schedule_path));
      s.p_ups_disch.push_back(to_double(f[5], schedule_path));
      s.p_chil_crac.push_back(to_double(f[6], schedule_path));
      s.p_chil_tes.push_back(to_double(f[7], schedule_path));
      ++s.n_slots;
    }
    if (s.n_slots == 0) throw std::runtime_error(schedule_path + ": no data rows");
  }
  {
    std::ifstream in = open_in(states_path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(states_path + ": empty file");
    expect_header(line, kStatesHeader, states_path);
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::vector<std::string> f = split_csv(line);
      if (f.size() != 8)
        throw std::runtime_error(states_path + ": expected 8 fields, got " +
                                 std::to_string(f.size()));
      s.e_ups.push_back(to_double(f[1], states_path));
      s.e_tes.push_back(to_double(f[2], states_path));
      std::array<double, kNumNodes> t{};
      for (int node = 0; node < kNumNodes; ++node)
        t[static_cast<size_t>(node)] = to_double(f[static_cast<size_t>(3 + node)], states_path);
      s.temps.push_back(t);
    }
    if (static_cast<int>(s.e_ups.size()) != s.n_slots + 1)
      throw std::runtime_error(states_path + ": expected " + std::to_string(s.n_slots + 1) +
                               " boundary rows, got " + std::to_string(s.e_ups.size()));
  }
  return s;
}

std::vector<AllocPiece> read_allocations_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
  expect_header(line, kAllocHeader, path);
  std::vector<AllocPiece> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f = split_csv(line);
    if (f.size() != 4)
      throw std::runtime_error(path + ": expected 4 fields, got " + std::to_string(f.size()));
    AllocPiece a;
    a.origin = static_cast<int>(to_double(f[0], path));
    a.tranche = static_cast<int>(to_double(f[1], path));
    a.exec = static_cast<int>(to_double(f[2], path));
    a.u = to_double(f[3], path);
    out.push_back(a);
  }
  return out;
}

}  // namespace dcflex
