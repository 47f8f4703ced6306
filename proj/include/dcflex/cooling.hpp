#pragma once
// Cooling block: chiller split between direct CRAC duty and tank charging,
// thermal-storage recursion with efficiencies and rate binaries, the shared
// slot-map temperature recursion driven by IT power, the overcooling cap,
// and per-node temperature bounds.

#include <vector>

#include "dcflex/model.hpp"
#include "dcflex/thermal.hpp"

namespace dcflex {

struct CoolingBlock {
  int n_slots = 0;
  std::vector<int> temp;     // (n_slots+1) x kNumNodes, state-major: temp_var(i, node)
  std::vector<int> q_cool;   // delivered cooling, kW thermal per slot
  std::vector<int> p_cc;     // chiller electric to CRAC duty, kW per slot
  std::vector<int> p_ct;     // chiller electric to tank charging, kW per slot
  std::vector<int> q_tc;     // tank discharge to CRAC, kW thermal per slot
  std::vector<int> z_tes_ch; // binary per slot
  std::vector<int> z_tes_dis;// binary per slot
  std::vector<int> e_tes;    // n_slots + 1 tank states, kWh

  int temp_var(int state, int node) const {
    return temp[static_cast<size_t>(state) * kNumNodes + static_cast<size_t>(node)];
  }
};

// `ca_max_override` > 0 replaces the cold-aisle upper bound (the widened
// flexibility buffer); pass 0 to keep the configured bound.
CoolingBlock add_cooling(ModelInstance& m, const ThermalParams& tp, const CoolingParams& cp,
                         const ThermalLinear& map, const std::vector<int>& p_it_vars,
                         double slot_hours, double ca_max_override);

}  // namespace dcflex
