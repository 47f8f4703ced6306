#include "dcflex/storage.hpp"

#include <string>

namespace dcflex {

UPSBlock add_ups(ModelInstance& m, const UPSParams& p, int n_slots, double slot_hours) {
  UPSBlock b;
  const double e_lo = p.soc_min * p.e_base_kwh;
  const double e_hi = p.soc_max * p.e_base_kwh;
  for (int i = 0; i <= n_slots; ++i)
    b.e.push_back(m.add_var(e_lo, e_hi, 0.0, false, "e_ups" + std::to_string(i)));
  for (int s = 0; s < n_slots; ++s) {
    b.p_ch.push_back(m.add_var(0.0, p.p_ch_max_kw, 0.0, false, "p_ch" + std::to_string(s)));
    b.p_disch.push_back(
        m.add_var(0.0, p.p_disch_max_kw, 0.0, false, "p_dis" + std::to_string(s)));
    b.z_ch.push_back(m.add_var(0.0, 1.0, 0.0, true, "z_ch" + std::to_string(s)));
    b.z_disch.push_back(m.add_var(0.0, 1.0, 0.0, true, "z_dis" + std::to_string(s)));
  }
  for (int s = 0; s < n_slots; ++s) {
    // e(s+1) = e(s) + eta_ch*p_ch*dt - (p_disch/eta_disch)*dt
    m.add_eq({{b.e[static_cast<size_t>(s) + 1], 1.0},
              {b.e[static_cast<size_t>(s)], -1.0},
              {b.p_ch[static_cast<size_t>(s)], -p.eta_ch * slot_hours},
              {b.p_disch[static_cast<size_t>(s)], slot_hours / p.eta_disch}},
             0.0, "ups_soc" + std::to_string(s));
    // Semi-continuous bands: zero or within [min, max].
    m.add_row({{b.p_ch[static_cast<size_t>(s)], 1.0},
               {b.z_ch[static_cast<size_t>(s)], -p.p_ch_max_kw}},
              -kInf, 0.0, "ups_ch_hi" + std::to_string(s));
    m.add_row({{b.p_ch[static_cast<size_t>(s)], 1.0},
               {b.z_ch[static_cast<size_t>(s)], -p.p_ch_min_kw}},
              0.0, kInf, "ups_ch_lo" + std::to_string(s));
    m.add_row({{b.p_disch[static_cast<size_t>(s)], 1.0},
               {b.z_disch[static_cast<size_t>(s)], -p.p_disch_max_kw}},
              -kInf, 0.0, "ups_dis_hi" + std::to_string(s));
    m.add_row({{b.p_disch[static_cast<size_t>(s)], 1.0},
               {b.z_disch[static_cast<size_t>(s)], -p.p_disch_min_kw}},
              0.0, kInf, "ups_dis_lo" + std::to_string(s));
    m.add_row({{b.z_ch[static_cast<size_t>(s)], 1.0},
               {b.z_disch[static_cast<size_t>(s)], 1.0}},
              -kInf, 1.0, "ups_excl" + std::to_string(s));
  }
  return b;
}

}  // namespace dcflex
