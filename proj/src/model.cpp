#include "dcflex/model.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <stdexcept>

namespace dcflex {

int ModelInstance::add_var(double lo, double hi, double cost, bool integer,
                           const std::string& name) {
  lb.push_back(lo);
  ub.push_back(hi);
  obj.push_back(cost);
  integrality.push_back(integer ? 1 : 0);
  var_names.push_back(name);
  return num_vars() - 1;
}

int ModelInstance::add_row(const std::vector<std::pair<int, double>>& coeffs, double lo,
                           double hi, const std::string& name) {
  std::map<int, double> merged;
  for (const auto& [col, v] : coeffs) {
    if (col < 0 || col >= num_vars())
      throw std::runtime_error("model: row references unregistered variable");
    merged[col] += v;
  }
  for (const auto& [col, v] : merged) {
    if (v == 0.0) continue;
    acol.push_back(col);
    aval.push_back(v);
  }
  astart.push_back(static_cast<std::int64_t>(acol.size()));
  rlo.push_back(lo);
  rhi.push_back(hi);
  row_names.push_back(name);
  return num_rows() - 1;
}

int ModelInstance::add_eq(const std::vector<std::pair<int, double>>& coeffs, double rhs,
                          const std::string& name) {
  return add_row(coeffs, rhs, rhs, name);
}

void ModelInstance::fix_var(int var, double value) {
  lb[static_cast<size_t>(var)] = value;
  ub[static_cast<size_t>(var)] = value;
}

void ModelInstance::dump_lp(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("model: cannot write " + path);
  out.precision(17);
  auto vname = [&](int j) {
    const std::string& n = var_names[static_cast<size_t>(j)];
    return n.empty() ? "x" + std::to_string(j) : n;
  };
  out << "Minimize\n obj:";
  for (int j = 0; j < num_vars(); ++j)
    if (obj[static_cast<size_t>(j)] != 0.0)
      out << " + " << obj[static_cast<size_t>(j)] << " " << vname(j);
  out << "\nSubject To\n";
  for (int r = 0; r < num_rows(); ++r) {
    auto row_terms = [&] {
      std::string s;
      for (std::int64_t k = astart[static_cast<size_t>(r)];
           k < astart[static_cast<size_t>(r) + 1]; ++k)
        s += " + " + std::to_string(aval[static_cast<size_t>(k)]) + " " +
             vname(acol[static_cast<size_t>(k)]);
      return s;
    };
    std::string base = row_names[static_cast<size_t>(r)].empty()
                           ? "c" + std::to_string(r)
                           : row_names[static_cast<size_t>(r)];
    double lo = rlo[static_cast<size_t>(r)], hi = rhi[static_cast<size_t>(r)];
    if (lo == hi) {
      out << " " << base << ":" << row_terms() << " = " << lo << "\n";
    } else {
      if (hi < kInf) out << " " << base << "_u:" << row_terms() << " <= " << hi << "\n";
      if (lo > -kInf) out << " " << base << "_l:" << row_terms() << " >= " << lo << "\n";
    }
  }
  out << "Bounds\n";
  for (int j = 0; j < num_vars(); ++j) {
    out << " ";
    if (lb[static_cast<size_t>(j)] <= -kInf) out << "-inf";
    else out << lb[static_cast<size_t>(j)];
    out << " <= " << vname(j) << " <= ";
    if (ub[static_cast<size_t>(j)] >= kInf) out << "+inf";
    else out << ub[static_cast<size_t>(j)];
    out << "\n";
  }
  out << "General\n";
  for (int j = 0; j < num_vars(); ++j)
    if (integrality[static_cast<size_t>(j)]) out << " " << vname(j) << "\n";
  out << "End\n";
}

PiecewiseHandles add_piecewise(ModelInstance& m, int input_var, const PiecewiseCurve& curve,
                               bool force_order, const std::string& tag) {
  const int n = curve.segments();
  if (n < 1) throw std::runtime_error("model: piecewise curve needs >= 1 segment");
  if (m.lb[static_cast<size_t>(input_var)] < curve.u.front() - 1e-12 ||
      m.ub[static_cast<size_t>(input_var)] > curve.u.back() + 1e-12)
    throw std::runtime_error("model: piecewise input not bounded within breakpoints");
  PiecewiseHandles h;
  h.segments = n;
  h.output = m.add_var(curve.p.front(),
                       *std::max_element(curve.p.begin(), curve.p.end()), 0.0, false,
                       tag + "_pw");
  h.first_delta = m.num_vars();
  for (int j = 0; j < n; ++j) {
    double w = curve.u[static_cast<size_t>(j) + 1] - curve.u[static_cast<size_t>(j)];
    m.add_var(0.0, w, 0.0, false, tag + "_d" + std::to_string(j));
  }
  // input = u0 + sum(deltas)
  std::vector<std::pair<int, double>> row{{input_var, 1.0}};
  for (int j = 0; j < n; ++j) row.emplace_back(h.first_delta + j, -1.0);
  m.add_eq(row, curve.u.front(), tag + "_pw_in");
  // output = p0 + sum(slope_j * delta_j)
  row.clear();
  row.emplace_back(h.output, 1.0);
  for (int j = 0; j < n; ++j) {
    double slope = (curve.p[static_cast<size_t>(j) + 1] - curve.p[static_cast<size_t>(j)]) /
                   (curve.u[static_cast<size_t>(j) + 1] - curve.u[static_cast<size_t>(j)]);
    row.emplace_back(h.first_delta + j, -slope);
  }
  m.add_eq(row, curve.p.front(), tag + "_pw_out");
  if (force_order && n > 1) {
    h.first_binary = m.num_vars();
    for (int j = 0; j < n - 1; ++j)
      m.add_var(0.0, 1.0, 0.0, true, tag + "_z" + std::to_string(j));
    for (int j = 0; j < n - 1; ++j) {
      double wj = curve.u[static_cast<size_t>(j) + 1] - curve.u[static_cast<size_t>(j)];
      double wn = curve.u[static_cast<size_t>(j) + 2] - curve.u[static_cast<size_t>(j) + 1];
      // delta_j >= w_j * z_j  (segment j full before j+1 opens)
      m.add_row({{h.first_delta + j, 1.0}, {h.first_binary + j, -wj}}, 0.0, kInf,
                tag + "_ord_lo" + std::to_string(j));
      // delta_{j+1} <= w_{j+1} * z_j
      m.add_row({{h.first_delta + j + 1, 1.0}, {h.first_binary + j, -wn}}, -kInf, 0.0,
                tag + "_ord_hi" + std::to_string(j));
    }
  }
  return h;
}

}  // namespace dcflex
