#pragma once
// Abstract MILP: a variable/constraint registry with a linear objective,
// stored row-wise (CSR) in emission order so models serialise and solve
// deterministically. Includes the incremental (delta) encoding of piecewise
// curves, with optional ordering binaries for inputs pushed against the
// curve from above.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dcflex/piecewise.hpp"

namespace dcflex {

// Sentinel treated as +/- infinity by every backend.
inline constexpr double kInf = 1e300;

struct ModelInstance {
  std::vector<double> lb, ub, obj;
  std::vector<std::uint8_t> integrality;  // 0 continuous, 1 integer
  std::vector<std::string> var_names;

  std::vector<std::int64_t> astart{0};  // CSR row starts, size rows + 1
  std::vector<int> acol;
  std::vector<double> aval;
  std::vector<double> rlo, rhi;
  std::vector<std::string> row_names;

  int num_vars() const { return static_cast<int>(lb.size()); }
  int num_rows() const { return static_cast<int>(rlo.size()); }

  int add_var(double lo, double hi, double cost = 0.0, bool integer = false,
              const std::string& name = "");
  // Coefficients may repeat a column; they are summed.
  int add_row(const std::vector<std::pair<int, double>>& coeffs, double lo, double hi,
              const std::string& name = "");
  int add_eq(const std::vector<std::pair<int, double>>& coeffs, double rhs,
             const std::string& name = "");
  void set_objective(int var, double coeff) { obj[static_cast<size_t>(var)] = coeff; }
  void fix_var(int var, double value);

  // Writes an LP-format text dump for external inspection.
  void dump_lp(const std::string& path) const;
};

struct PiecewiseHandles {
  int output = -1;       // ordinate variable
  int first_delta = -1;  // segments consecutive fill variables
  int first_binary = -1; // segments-1 ordering binaries, or -1 when omitted
  int segments = 0;
};

// Encodes output = curve(input) with input = sum of per-segment fills.
// Without ordering binaries the encoding is exact only when the output is
// pressed downward (convex curve, e.g. by cost); with `force_order` the fill
// order is enforced by binaries and the encoding is exact in both directions.
PiecewiseHandles add_piecewise(ModelInstance& m, int input_var, const PiecewiseCurve& curve,
                               bool force_order, const std::string& tag);

}  // namespace dcflex
