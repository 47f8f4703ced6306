#include "dcflex/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dcflex {

double PiecewiseCurve::value(double x) const {
  if (u.empty()) throw std::runtime_error("piecewise: empty curve");
  if (x <= u.front()) return p.front();
  if (x >= u.back()) return p.back();
  auto it = std::upper_bound(u.begin(), u.end(), x);
  size_t j = static_cast<size_t>(it - u.begin());  // u[j-1] < x <= u[j]
  double w = (x - u[j - 1]) / (u[j] - u[j - 1]);
  return p[j - 1] + w * (p[j] - p[j - 1]);
}

PiecewiseCurve linearize_power_curve(const ITParams& it, int segments,
                                     double grading_exponent) {
  if (segments < 1) throw std::runtime_error("piecewise: segments must be >= 1");
  PiecewiseCurve c;
  c.u.resize(static_cast<size_t>(segments) + 1);
  c.p.resize(static_cast<size_t>(segments) + 1);
  for (int i = 0; i <= segments; ++i) {
    double frac = static_cast<double>(i) / segments;
    double u = std::pow(frac, grading_exponent) * it.u_max;
    c.u[static_cast<size_t>(i)] = u;
    c.p[static_cast<size_t>(i)] = it.power_kw(u);
  }
  // Endpoints are exact by construction; pin them bit-for-bit.
  c.u.front() = 0.0;
  c.p.front() = it.p_idle_kw;
  c.u.back() = it.u_max;
  c.p.back() = it.power_kw(it.u_max);
  for (size_t i = 1; i < c.u.size(); ++i)
    if (!(c.u[i] > c.u[i - 1]))
      throw std::runtime_error("piecewise: breakpoints not strictly increasing");
  // Certify the error bound by dense sampling against the exact curve.
  const int samples = 20000;
  double worst = 0.0;
  for (int i = 0; i <= samples; ++i) {
    double x = it.u_max * static_cast<double>(i) / samples;
    worst = std::max(worst, std::abs(c.value(x) - it.power_kw(x)));
  }
  c.max_abs_error_kw = worst;
  return c;
}

}  // namespace dcflex
