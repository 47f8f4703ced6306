#pragma once
// UPS battery block: stored-energy recursion with charge/discharge
// efficiencies, semi-continuous power bands gated by binaries, and mutual
// exclusion. Endpoint conditions are pinned by the caller on the returned
// energy variables.

#include <vector>

#include "dcflex/model.hpp"

namespace dcflex {

struct UPSBlock {
  std::vector<int> e;        // n_slots + 1 energy states, kWh
  std::vector<int> p_ch;     // kW per slot
  std::vector<int> p_disch;  // kW per slot
  std::vector<int> z_ch;     // binary per slot
  std::vector<int> z_disch;  // binary per slot
};

UPSBlock add_ups(ModelInstance& m, const UPSParams& params, int n_slots, double slot_hours);

}  // namespace dcflex
