#pragma once
// Piecewise-linear approximation of the convex server power curve. The
// breakpoints lie on the exact curve, so chords over-estimate power between
// them; the certified max_abs_error bounds that gap over [0, u_max].

#include <vector>

#include "dcflex/config.hpp"

namespace dcflex {

struct PiecewiseCurve {
  std::vector<double> u;  // strictly increasing abscissae, size segments + 1
  std::vector<double> p;  // exact power at each abscissa, kW
  double max_abs_error_kw = 0.0;

  int segments() const { return static_cast<int>(u.size()) - 1; }
  // Piecewise-linear evaluation (the MILP's view of the curve).
  double value(double x) const;
};

// Breakpoints at u_i = (i/n)^grading_exponent * u_max. Grading > 1 packs
// points near u = 0 where the power law curves hardest; 1.0 gives equal
// spacing. The error bound is certified by dense sampling.
PiecewiseCurve linearize_power_curve(const ITParams& it, int segments,
                                     double grading_exponent = 1.0);

}  // namespace dcflex
