#include "dcflex/cooling.hpp"

#include <string>

namespace dcflex {

CoolingBlock add_cooling(ModelInstance& m, const ThermalParams& tp, const CoolingParams& cp,
                         const ThermalLinear& map, const std::vector<int>& p_it_vars,
                         double slot_hours, double ca_max_override) {
  const int n = static_cast<int>(p_it_vars.size());
  CoolingBlock b;
  b.n_slots = n;
  const double q_cool_cap = cp.cop_chiller * cp.p_chiller_max_kw + cp.q_tes_dis_max_kwth;

  for (int i = 0; i <= n; ++i) {
    for (int nd = 0; nd < kNumNodes; ++nd) {
      double hi = tp.t_max_c[static_cast<size_t>(nd)];
      if (nd == NODE_CA && ca_max_override > 0) hi = ca_max_override;
      b.temp.push_back(m.add_var(tp.t_min_c[static_cast<size_t>(nd)], hi, 0.0, false,
                                 std::string(kNodeNames[nd]) + "_" + std::to_string(i)));
    }
  }
  for (int s = 0; s < n; ++s) {
    b.q_cool.push_back(m.add_var(0.0, q_cool_cap, 0.0, false, "q_cool" + std::to_string(s)));
    b.p_cc.push_back(
        m.add_var(0.0, cp.p_chiller_max_kw, 0.0, false, "p_cc" + std::to_string(s)));
    b.p_ct.push_back(m.add_var(0.0, cp.q_tes_ch_max_kwth / cp.cop_chiller, 0.0, false,
                               "p_ct" + std::to_string(s)));
    b.q_tc.push_back(
        m.add_var(0.0, cp.q_tes_dis_max_kwth, 0.0, false, "q_tc" + std::to_string(s)));
    b.z_tes_ch.push_back(m.add_var(0.0, 1.0, 0.0, true, "z_tc" + std::to_string(s)));
    b.z_tes_dis.push_back(m.add_var(0.0, 1.0, 0.0, true, "z_td" + std::to_string(s)));
  }
  for (int i = 0; i <= n; ++i)
    b.e_tes.push_back(
        m.add_var(0.0, cp.e_tes_max_kwh, 0.0, false, "e_tes" + std::to_string(i)));

  for (int s = 0; s < n; ++s) {
    // Cooling split: q_cool = COP*p_cc + q_tc.
    m.add_eq({{b.q_cool[static_cast<size_t>(s)], 1.0},
              {b.p_cc[static_cast<size_t>(s)], -cp.cop_chiller},
              {b.q_tc[static_cast<size_t>(s)], -1.0}},
             0.0, "q_split" + std::to_string(s));
    // Chiller electric capacity across both duties.
    m.add_row({{b.p_cc[static_cast<size_t>(s)], 1.0}, {b.p_ct[static_cast<size_t>(s)], 1.0}},
              -kInf, cp.p_chiller_max_kw, "chil_cap" + std::to_string(s));
    // Tank energy: e(s+1) = e(s) + (eta_ch*COP*p_ct - q_tc/eta_dis)*dt.
    m.add_eq({{b.e_tes[static_cast<size_t>(s) + 1], 1.0},
              {b.e_tes[static_cast<size_t>(s)], -1.0},
              {b.p_ct[static_cast<size_t>(s)], -cp.eta_tes_ch * cp.cop_chiller * slot_hours},
              {b.q_tc[static_cast<size_t>(s)], slot_hours / cp.eta_tes_dis}},
             0.0, "tes_soc" + std::to_string(s));
    // Rate caps gated by binaries, one direction at a time.
    m.add_row({{b.p_ct[static_cast<size_t>(s)], cp.cop_chiller},
               {b.z_tes_ch[static_cast<size_t>(s)], -cp.q_tes_ch_max_kwth}},
              -kInf, 0.0, "tes_ch" + std::to_string(s));
    m.add_row({{b.q_tc[static_cast<size_t>(s)], 1.0},
               {b.z_tes_dis[static_cast<size_t>(s)], -cp.q_tes_dis_max_kwth}},
              -kInf, 0.0, "tes_dis" + std::to_string(s));
    m.add_row({{b.z_tes_ch[static_cast<size_t>(s)], 1.0},
               {b.z_tes_dis[static_cast<size_t>(s)], 1.0}},
              -kInf, 1.0, "tes_excl" + std::to_string(s));
    // Temperature recursion x(s+1) = A x(s) + bq q_cool + bp p_it + c.
    for (int nd = 0; nd < kNumNodes; ++nd) {
      std::vector<std::pair<int, double>> row{{b.temp_var(s + 1, nd), 1.0}};
      for (int md = 0; md < kNumNodes; ++md) {
        double a = map.A(nd, md);
        if (a != 0.0) row.emplace_back(b.temp_var(s, md), -a);
      }
      if (map.bq(nd) != 0.0) row.emplace_back(b.q_cool[static_cast<size_t>(s)], -map.bq(nd));
      if (map.bp(nd) != 0.0) row.emplace_back(p_it_vars[static_cast<size_t>(s)], -map.bp(nd));
      m.add_eq(row, map.c(nd),
               std::string("dyn_") + kNodeNames[nd] + "_" + std::to_string(s));
    }
    // Overcooling cap against the slot-start hot-aisle temperature:
    // q_cool <= (T_HA - T_CA_min) * m_dot * c_pa.
    const double mc = tp.air_kw_per_k();
    m.add_row({{b.q_cool[static_cast<size_t>(s)], 1.0}, {b.temp_var(s, NODE_HA), -mc}}, -kInf,
              -tp.t_min_c[NODE_CA] * mc, "overcool" + std::to_string(s));
  }
  return b;
}

}  // namespace dcflex
