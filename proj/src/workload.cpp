#include "dcflex/workload.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace dcflex {

ITBlock add_it_scheduling(ModelInstance& m, const std::vector<JobSpec>& jobs,
                          const std::vector<double>& u_fixed, const PiecewiseCurve& curve,
                          double u_max, const std::vector<char>& order_binaries) {
  const int n = static_cast<int>(u_fixed.size());
  if (static_cast<int>(order_binaries.size()) != n)
    throw std::runtime_error("workload: order_binaries must cover every slot");
  ITBlock b;
  b.n_slots = n;
  b.jobs = jobs;

  // Allocation variables, window-contiguous per job; each bounded by its
  // job's total demand.
  b.job_var_first.reserve(jobs.size());
  for (size_t j = 0; j < jobs.size(); ++j) {
    const JobSpec& job = jobs[j];
    if (job.first < 0 || job.last >= n || job.first > job.last)
      throw std::runtime_error("workload: job window outside the model horizon");
    if (job.demand_u < 0) throw std::runtime_error("workload: negative job demand");
    b.job_var_first.push_back(m.num_vars());
    for (int s = job.first; s <= job.last; ++s)
      m.add_var(0.0, job.demand_u, 0.0, false,
                "u_j" + std::to_string(j) + "_s" + std::to_string(s));
  }
  // Job completion: allocations over the window sum to the demand.
  for (size_t j = 0; j < jobs.size(); ++j) {
    std::vector<std::pair<int, double>> row;
    for (int s = jobs[j].first; s <= jobs[j].last; ++s)
      row.emplace_back(b.job_var_first[j] + (s - jobs[j].first), 1.0);
    m.add_eq(row, jobs[j].demand_u, "job_done" + std::to_string(j));
  }
  // Per-slot executing-job lists.
  std::vector<std::vector<int>> exec_vars(static_cast<size_t>(n));
  for (size_t j = 0; j < jobs.size(); ++j)
    for (int s = jobs[j].first; s <= jobs[j].last; ++s)
      exec_vars[static_cast<size_t>(s)].push_back(b.job_var_first[j] + (s - jobs[j].first));

  for (int s = 0; s < n; ++s) {
    double fixed = u_fixed[static_cast<size_t>(s)];
    if (fixed < 0 || fixed > u_max + 1e-9)
      throw std::runtime_error("workload: fixed utilisation outside capacity at slot " +
                               std::to_string(s));
    // Total utilisation, capacity via the variable's upper bound.
    int u_tot = m.add_var(0.0, u_max, 0.0, false, "u_tot" + std::to_string(s));
    b.u_tot.push_back(u_tot);
    std::vector<std::pair<int, double>> row{{u_tot, 1.0}};
    for (int v : exec_vars[static_cast<size_t>(s)]) row.emplace_back(v, -1.0);
    m.add_eq(row, fixed, "u_tot_def" + std::to_string(s));
    PiecewiseHandles h = add_piecewise(m, u_tot, curve,
                                       order_binaries[static_cast<size_t>(s)] != 0,
                                       "s" + std::to_string(s));
    b.p_pw.push_back(h.output);
  }
  return b;
}

std::vector<int> add_it_grid_coupling(ModelInstance& m, const ITBlock& it,
                                      const std::vector<int>& p_disch,
                                      const std::vector<double>& p_base_sub) {
  const int n = it.n_slots;
  if (static_cast<int>(p_disch.size()) != n || static_cast<int>(p_base_sub.size()) != n)
    throw std::runtime_error("workload: grid coupling inputs must cover every slot");
  std::vector<int> p_grid_it;
  p_grid_it.reserve(static_cast<size_t>(n));
  for (int s = 0; s < n; ++s) {
    int v = m.add_var(0.0, kInf, 0.0, false, "p_grid_it" + std::to_string(s));
    p_grid_it.push_back(v);
    // p_pw - p_base_sub = p_grid_it + p_disch
    m.add_eq({{it.p_pw[static_cast<size_t>(s)], 1.0},
              {v, -1.0},
              {p_disch[static_cast<size_t>(s)], -1.0}},
             p_base_sub[static_cast<size_t>(s)], "grid_it" + std::to_string(s));
  }
  return p_grid_it;
}

std::vector<JobSpec> jobs_from_profile(const WorkloadProfile& profile, const TimeGrid& grid) {
  std::vector<JobSpec> jobs;
  const int last_slot = grid.total_slots() - 1;
  for (int t = 0; t < grid.main_slots; ++t) {
    double demand = profile.u_flex_base[static_cast<size_t>(t)];
    if (demand <= 0) continue;
    for (int k = 0; k < kNumTranches; ++k) {
      double share = profile.alpha[static_cast<size_t>(t)][static_cast<size_t>(k)];
      if (share <= 0) continue;
      JobSpec j;
      j.first = t;
      j.last = std::min(t + profile.d_k[static_cast<size_t>(k)], last_slot);
      j.demand_u = demand * share;
      j.origin = t;
      j.tranche = k;
      jobs.push_back(j);
    }
  }
  return jobs;
}

std::vector<double> shift_histogram(const std::vector<AllocPiece>& allocations,
                                    double slot_hours, int max_shift) {
  std::vector<double> hist(static_cast<size_t>(max_shift) + 1, 0.0);
  for (const AllocPiece& a : allocations) {
    int d = a.exec - a.origin;
    if (d < 0 || d > max_shift)
      throw std::runtime_error("workload: shift distance outside [0, max_shift]");
    hist[static_cast<size_t>(d)] += a.u * slot_hours;
  }
  return hist;
}

}  // namespace dcflex
