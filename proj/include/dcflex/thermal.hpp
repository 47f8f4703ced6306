#pragma once
// Five-node thermal network: cold/hot aisles, rack air return, IT mass, and
// CRAC supply. The continuous dynamics are discretised per slot by composing
// short explicit-Euler substeps under zero-order-hold controls, yielding one
// affine map per slot that both the MILP rows and the replay oracle share.

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

#include "dcflex/config.hpp"

namespace dcflex {

using Mat5 = Eigen::Matrix<double, kNumNodes, kNumNodes>;
using Vec5 = Eigen::Matrix<double, kNumNodes, 1>;

// x(i+1) = A x(i) + bq * q_cool(i) + bp * p_it(i) + c, states ordered by
// ThermalNode. q_cool is delivered cooling (kW thermal), p_it the IT
// electrical power converted to heat (kW).
struct ThermalLinear {
  Mat5 A = Mat5::Zero();
  Vec5 bq = Vec5::Zero();
  Vec5 bp = Vec5::Zero();
  Vec5 c = Vec5::Zero();
  int substeps = 1;
  double slot_seconds = 900.0;
};

// Single Euler substep of h seconds (h = 3600 * slot_hours / substeps).
ThermalLinear build_substep(const ThermalParams& tp, double h_seconds);

// Composition of `substeps` substeps spanning one slot.
ThermalLinear build_slot_map(const ThermalParams& tp, double slot_hours, int substeps);

double spectral_radius(const Mat5& a);

struct SteadyState {
  std::array<double, kNumNodes> t_c{};
  double q_cool_kw = 0.0;     // delivered cooling at the fixed point
  double p_chiller_kw = 0.0;  // q_cool / COP
};

// Algebraic fixed point of the node dynamics with the cold aisle pinned at
// t_ca_target and IT power at utilisation u_total. Throws if the fixed point
// violates a temperature bound.
SteadyState steady_state_init(double u_total, const ITParams& it, const ThermalParams& tp,
                              const CoolingParams& cp, double t_ca_target);

struct ReplayViolation {
  int slot;           // state index where the violation occurs
  std::string what;   // bound name
  double magnitude;   // amount beyond the bound (positive)
};

struct ReplayResult {
  // temps[i] is the state at slot boundary i; size = n_slots + 1.
  std::vector<std::array<double, kNumNodes>> temps;
  std::vector<double> e_tes_kwh;  // same indexing
  std::vector<ReplayViolation> violations;
};

// Integrates the slot map over a contiguous schedule and audits temperature
// and tank-energy bounds. Violations are data, not errors. `q_chil_tes` and
// `q_tes_crac` are thermal kW (tank charge input before efficiency, and tank
// discharge delivered to the CRAC).
ReplayResult replay_thermal(const std::vector<double>& p_it_kw,
                            const std::vector<double>& q_cool_kw,
                            const std::vector<double>& q_chil_tes_kwth,
                            const std::vector<double>& q_tes_crac_kwth,
                            const std::array<double, kNumNodes>& t0_c, double e_tes0_kwh,
                            const ThermalParams& tp, const CoolingParams& cp,
                            const TimeGrid& grid, int substeps);

}  // namespace dcflex
