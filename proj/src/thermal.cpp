#include "dcflex/thermal.hpp"

#include <Eigen/Eigenvalues>
#include <stdexcept>

namespace dcflex {

ThermalLinear build_substep(const ThermalParams& tp, double h) {
  ThermalLinear m;
  m.substeps = 1;
  m.slot_seconds = h;
  const double mk = tp.m_dot_air_kg_s * tp.kappa * tp.c_pa_kj_kgk;  // effective air kW/K
  const double mc = tp.air_kw_per_k();                              // full-flow kW/K
  Mat5& A = m.A;
  // IT mass: heated by p_it, convects to return air.
  A(NODE_IT, NODE_IT) = 1.0 - h * tp.g_cv_kw_k / tp.c_it_kj_k;
  A(NODE_IT, NODE_R) = h * tp.g_cv_kw_k / tp.c_it_kj_k;
  m.bp(NODE_IT) = h / tp.c_it_kj_k;
  // Return air: convection from IT, effective airflow from cold aisle.
  A(NODE_R, NODE_IT) = h * tp.g_cv_kw_k / tp.c_r_kj_k;
  A(NODE_R, NODE_R) = 1.0 - h * (mk + tp.g_cv_kw_k) / tp.c_r_kj_k;
  A(NODE_R, NODE_CA) = h * mk / tp.c_r_kj_k;
  // Cold aisle: fed by CRAC supply air, loses heat to ambient through the
  // envelope.
  A(NODE_CA, NODE_CA) = 1.0 - h * (mk + tp.g_cd_kw_k) / tp.c_ca_kj_k;
  A(NODE_CA, NODE_AIN) = h * mk / tp.c_ca_kj_k;
  m.c(NODE_CA) = h * tp.g_cd_kw_k * tp.t_out_c / tp.c_ca_kj_k;
  // Hot aisle: contained, collects return air.
  A(NODE_HA, NODE_R) = h * mk / tp.c_ha_kj_k;
  A(NODE_HA, NODE_HA) = 1.0 - h * mk / tp.c_ha_kj_k;
  // CRAC supply: algebraic — hot-aisle air cooled by the delivered q_cool.
  A(NODE_AIN, NODE_HA) = 1.0;
  m.bq(NODE_AIN) = -1.0 / mc;
  return m;
}

ThermalLinear build_slot_map(const ThermalParams& tp, double slot_hours, int substeps) {
  if (substeps < 1) throw std::runtime_error("thermal: substeps must be >= 1");
  const double slot_seconds = 3600.0 * slot_hours;
  ThermalLinear sub = build_substep(tp, slot_seconds / substeps);
  ThermalLinear out;
  out.substeps = substeps;
  out.slot_seconds = slot_seconds;
  // x_{j+1} = M x_j + (bq q + bp p + c); after N steps A = M^N and the input
  // maps accumulate through S = sum_{j<N} M^j.
  Mat5 A = Mat5::Identity();
  Mat5 S = Mat5::Zero();
  for (int j = 0; j < substeps; ++j) {
    S += A;
    A = sub.A * A;
  }
  out.A = A;
  out.bq = S * sub.bq;
  out.bp = S * sub.bp;
  out.c = S * sub.c;
  return out;
}

double spectral_radius(const Mat5& a) {
  Eigen::EigenSolver<Mat5> es(a, /*computeEigenvectors=*/false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

SteadyState steady_state_init(double u_total, const ITParams& it, const ThermalParams& tp,
                              const CoolingParams& cp, double t_ca_target) {
  if (u_total < 0 || u_total > it.u_max)
    throw std::runtime_error("thermal: utilisation outside [0, u_max]");
  const double p_it = it.power_kw(u_total);
  const double mk = tp.m_dot_air_kg_s * tp.kappa * tp.c_pa_kj_kgk;
  const double envelope_loss = tp.g_cd_kw_k * (t_ca_target - tp.t_out_c);
  SteadyState ss;
  ss.t_c[NODE_CA] = t_ca_target;
  ss.t_c[NODE_R] = t_ca_target + p_it / mk;
  ss.t_c[NODE_IT] = ss.t_c[NODE_R] + p_it / tp.g_cv_kw_k;
  ss.t_c[NODE_HA] = ss.t_c[NODE_R];
  ss.t_c[NODE_AIN] = t_ca_target + envelope_loss / mk;
  ss.q_cool_kw = (p_it - envelope_loss) / tp.kappa;
  ss.p_chiller_kw = ss.q_cool_kw / cp.cop_chiller;
  for (int n = 0; n < kNumNodes; ++n) {
    double v = ss.t_c[static_cast<size_t>(n)];
    if (v < tp.t_min_c[static_cast<size_t>(n)] - 1e-9 ||
        v > tp.t_max_c[static_cast<size_t>(n)] + 1e-9)
      throw std::runtime_error(std::string("thermal: steady state violates bound for ") +
                               kNodeNames[n]);
  }
  return ss;
}

ReplayResult replay_thermal(const std::vector<double>& p_it_kw,
                            const std::vector<double>& q_cool_kw,
                            const std::vector<double>& q_chil_tes_kwth,
                            const std::vector<double>& q_tes_crac_kwth,
                            const std::array<double, kNumNodes>& t0_c, double e_tes0_kwh,
                            const ThermalParams& tp, const CoolingParams& cp,
                            const TimeGrid& grid, int substeps) {
  const size_t n = p_it_kw.size();
  if (q_cool_kw.size() != n || q_chil_tes_kwth.size() != n || q_tes_crac_kwth.size() != n)
    throw std::runtime_error("thermal: replay inputs must share one slot range");
  ThermalLinear map = build_slot_map(tp, grid.slot_hours, substeps);
  ReplayResult r;
  r.temps.resize(n + 1);
  r.e_tes_kwh.resize(n + 1);
  Vec5 x;
  for (int k = 0; k < kNumNodes; ++k) x(k) = t0_c[static_cast<size_t>(k)];
  r.temps[0] = t0_c;
  r.e_tes_kwh[0] = e_tes0_kwh;
  auto audit = [&](size_t i) {
    for (int k = 0; k < kNumNodes; ++k) {
      double v = r.temps[i][static_cast<size_t>(k)];
      double lo = tp.t_min_c[static_cast<size_t>(k)];
      double hi = tp.t_max_c[static_cast<size_t>(k)];
      if (v < lo)
        r.violations.push_back({static_cast<int>(i), std::string(kNodeNames[k]) + "_min", lo - v});
      if (v > hi)
        r.violations.push_back({static_cast<int>(i), std::string(kNodeNames[k]) + "_max", v - hi});
    }
    double e = r.e_tes_kwh[i];
    if (e < 0) r.violations.push_back({static_cast<int>(i), "e_tes_min", -e});
    if (e > cp.e_tes_max_kwh)
      r.violations.push_back({static_cast<int>(i), "e_tes_max", e - cp.e_tes_max_kwh});
  };
  audit(0);
  for (size_t i = 0; i < n; ++i) {
    x = map.A * x + map.bq * q_cool_kw[i] + map.bp * p_it_kw[i] + map.c;
    for (int k = 0; k < kNumNodes; ++k) r.temps[i + 1][static_cast<size_t>(k)] = x(k);
    r.e_tes_kwh[i + 1] =
        r.e_tes_kwh[i] + (cp.eta_tes_ch * q_chil_tes_kwth[i] - q_tes_crac_kwth[i] / cp.eta_tes_dis) *
                             grid.slot_hours;
    audit(i + 1);
  }
  return r;
}

}  // namespace dcflex
