#include "dcflex/svgplot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace dcflex {
namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}


std::string num2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string clock_label(int slot, double slot_hours) {
  double h = slot * slot_hours;
  int hh = static_cast<int>(std::floor(h + 1e-9));
  int mm = static_cast<int>(std::lround((h - hh) * 60.0));
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%02d:%02d", hh, mm);
  return buf;
}

void rect(std::ostringstream& o, double x, double y, double w, double h,
          const std::string& fill, const std::string& extra = "") {
  o << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(w)
    << "\" height=\"" << num(h) << "\" fill=\"" << fill << "\"" << extra
    << "/>\n";
}

void text(std::ostringstream& o, double x, double y, const std::string& s,
          const std::string& extra = "") {
  o << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\"" << extra << ">"
    << s << "</text>\n";
}

void hline(std::ostringstream& o, double x0, double x1, double y,
           const std::string& stroke, const std::string& extra = "") {
  o << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y) << "\" x2=\""
    << num(x1) << "\" y2=\"" << num(y) << "\" stroke=\"" << stroke << "\""
    << extra << "/>\n";
}

std::string svg_open(double w, double h) {
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(w)
    << "\" height=\"" << num(h) << "\" viewBox=\"0 0 " << num(w) << " "
    << num(h) << "\">\n"
    << "<style>text{font-family:Helvetica,Arial,sans-serif;font-size:12px;"
       "fill:#333}.title{font-size:15px;font-weight:bold}.axis{stroke:#888;"
       "stroke-width:1}.tick{font-size:10px;fill:#666}</style>\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  return o.str();
}

// Round a value up to a pleasant axis maximum.
double nice_ceil(double v) {
  if (v <= 0.0) return 1.0;
  double mag = std::pow(10.0, std::floor(std::log10(v)));
  for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
    if (m * mag >= v) return m * mag;
  }
  return 10.0 * mag;
}

struct Component {
  const char* label;
  const char* color;
};

constexpr Component kGridComponents[] = {
    {"IT from grid", "#4e79a7"}, {"Overhead", "#bab0ac"},
    {"UPS charge", "#59a14f"},   {"Chiller (CRAC)", "#e15759"},
    {"Chiller (TES)", "#f28e2b"},
};

constexpr Component kAssetComponents[] = {
    {"IT", "#4e79a7"},
    {"UPS", "#59a14f"},
    {"CRAC cooling", "#e15759"},
    {"TES cooling", "#f28e2b"},
};

// Two-stop lerp used by the heatmap fill.
std::string heat_color(double frac) {
  frac = std::clamp(frac, 0.0, 1.0);
  auto mix = [&](double a, double b) {
    return static_cast<int>(std::lround(a + (b - a) * frac));
  };
  char buf[16];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", mix(247, 8), mix(251, 81),
                mix(255, 156));
  return buf;
}

}  // namespace

std::string svg_cost_comparison(double base_gbp, double optimised_gbp) {
  const double width = 460, height = 340;
  const double ml = 70, mr = 30, mt = 50, mb = 50;
  const double plot_w = width - ml - mr, plot_h = height - mt - mb;
  double ymax = nice_ceil(std::max(base_gbp, optimised_gbp) * 1.1);

  std::ostringstream o;
  o << svg_open(width, height);
  text(o, width / 2, 26, "Main-day electricity cost",
       " class=\"title\" text-anchor=\"middle\"");

  for (int i = 0; i <= 4; ++i) {
    double v = ymax * i / 4.0;
    double y = mt + plot_h * (1.0 - v / ymax);
    hline(o, ml, width - mr, y, "#e0e0e0");
    text(o, ml - 6, y + 4, num(v), " class=\"tick\" text-anchor=\"end\"");
  }
  text(o, 16, mt + plot_h / 2, "GBP",
       " class=\"tick\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
           num(mt + plot_h / 2) + ")\"");

  struct Bar {
    const char* label;
    double value;
    const char* color;
  } bars[] = {{"Baseline", base_gbp, "#9aa5b1"},
              {"Optimised", optimised_gbp, "#4e79a7"}};
  const double bw = plot_w / 5.0;
  for (int i = 0; i < 2; ++i) {
    double cx = ml + plot_w * (0.3 + 0.4 * i);
    double h = plot_h * bars[i].value / ymax;
    rect(o, cx - bw / 2, mt + plot_h - h, bw, h, bars[i].color);
    text(o, cx, mt + plot_h - h - 6, num2(bars[i].value),
         " text-anchor=\"middle\"");
    text(o, cx, mt + plot_h + 18, bars[i].label, " text-anchor=\"middle\"");
  }
  if (base_gbp > 0.0) {
    double sav = (base_gbp - optimised_gbp) / base_gbp * 100.0;
    text(o, width / 2, height - 10, "Saving: " + num2(sav) + "%",
         " text-anchor=\"middle\"");
  }
  o << "</svg>\n";
  return o.str();
}

std::string svg_schedule_decomposition(const ScheduleSolution& s) {
  const double width = 1120, height = 460;
  const double ml = 64, mr = 64, mt = 44, mb = 70;
  const double plot_w = width - ml - mr, plot_h = height - mt - mb;
  const int n = s.n_slots;
  if (n == 0) throw std::runtime_error("decomposition plot: empty schedule");

  double pmax = 0.0, prmax = 0.0;
  for (int i = 0; i < n; ++i) {
    pmax = std::max(pmax, s.grid_kw(i));
    prmax = std::max(prmax, s.price_gbp_per_mwh[i]);
  }
  double ymax = nice_ceil(pmax * 1.05);
  double rmax = nice_ceil(prmax * 1.05);
  const double bw = plot_w / n;

  std::ostringstream o;
  o << svg_open(width, height);
  text(o, width / 2, 24, "Grid draw by component",
       " class=\"title\" text-anchor=\"middle\"");

  for (int i = 0; i <= 4; ++i) {
    double v = ymax * i / 4.0;
    double y = mt + plot_h * (1.0 - v / ymax);
    hline(o, ml, width - mr, y, "#e8e8e8");
    text(o, ml - 6, y + 4, num(v), " class=\"tick\" text-anchor=\"end\"");
    text(o, width - mr + 6, y + 4, num(rmax * i / 4.0), " class=\"tick\"");
  }
  text(o, 14, mt + plot_h / 2, "kW",
       " class=\"tick\" text-anchor=\"middle\" transform=\"rotate(-90 14 " +
           num(mt + plot_h / 2) + ")\"");
  text(o, width - 14, mt + plot_h / 2, "GBP/MWh",
       " class=\"tick\" text-anchor=\"middle\" transform=\"rotate(90 " +
           num(width - 14) + " " + num(mt + plot_h / 2) + ")\"");

  for (int i = 0; i < n; ++i) {
    double parts[5] = {s.p_grid_it[i], s.od_kw, s.p_ups_ch[i],
                       s.p_chil_crac[i], s.p_chil_tes[i]};
    double x = ml + bw * i;
    double y = mt + plot_h;
    for (int c = 0; c < 5; ++c) {
      if (parts[c] <= 0.0) continue;
      double h = plot_h * parts[c] / ymax;
      y -= h;
      rect(o, x, y, bw, h, kGridComponents[c].color);
    }
  }

  std::ostringstream pts;
  for (int i = 0; i < n; ++i) {
    double x0 = ml + bw * i;
    double y = mt + plot_h * (1.0 - s.price_gbp_per_mwh[i] / rmax);
    pts << num(x0) << "," << num(y) << " " << num(x0 + bw) << "," << num(y)
        << " ";
  }
  o << "<polyline points=\"" << pts.str()
    << "\" fill=\"none\" stroke=\"#222\" stroke-width=\"1.5\"/>\n";

  // Hour ticks along the x axis.
  int per_hour = static_cast<int>(std::lround(1.0 / s.slot_hours));
  for (int i = 0; i <= n; i += 4 * per_hour) {
    double x = ml + bw * i;
    text(o, x, mt + plot_h + 16, clock_label(s.first_slot + i, s.slot_hours),
         " class=\"tick\" text-anchor=\"middle\"");
  }
  hline(o, ml, width - mr, mt + plot_h, "#888", " class=\"axis\"");

  double lx = ml;
  const double ly = height - 22;
  for (const auto& c : kGridComponents) {
    rect(o, lx, ly - 10, 12, 12, c.color);
    text(o, lx + 16, ly, c.label);
    lx += 16 + 7.0 * std::string(c.label).size() + 24;
  }
  hline(o, lx, lx + 24, ly - 4, "#222", " stroke-width=\"1.5\"");
  text(o, lx + 30, ly, "Price");
  o << "</svg>\n";
  return o.str();
}

std::string svg_heatmap(const std::vector<FlexibilityCell>& cells) {
  if (cells.empty()) throw std::runtime_error("heatmap: no cells");
  std::vector<int> t0s;
  std::vector<double> dps;
  double slot_hours = 0.25;
  for (const auto& c : cells) {
    t0s.push_back(c.t0);
    dps.push_back(c.delta_p_kw);
    if (c.tau_slots > 0) slot_hours = c.tau_hours / c.tau_slots;
  }
  std::sort(t0s.begin(), t0s.end());
  t0s.erase(std::unique(t0s.begin(), t0s.end()), t0s.end());
  std::sort(dps.begin(), dps.end(), std::greater<double>());
  dps.erase(std::unique(dps.begin(), dps.end()), dps.end());

  std::map<std::pair<int, double>, const FlexibilityCell*> lut;
  double taumax = 0.0;
  for (const auto& c : cells) {
    lut[{c.t0, c.delta_p_kw}] = &c;
    taumax = std::max(taumax, c.tau_hours);
  }
  if (taumax <= 0.0) taumax = 1.0;

  const double cw = std::max(46.0, 920.0 / t0s.size());
  const double ch = 34;
  const double ml = 86, mt = 54, mr = 30, mb = 46;
  const double width = ml + cw * t0s.size() + mr;
  const double height = mt + ch * dps.size() + mb;

  std::ostringstream o;
  o << svg_open(width, height);
  text(o, width / 2, 26, "Sustainable duration by start time and power offset",
       " class=\"title\" text-anchor=\"middle\"");

  for (size_t r = 0; r < dps.size(); ++r) {
    text(o, ml - 8, mt + ch * r + ch / 2 + 4, num(dps[r]) + " kW",
         " text-anchor=\"end\"");
    for (size_t col = 0; col < t0s.size(); ++col) {
      double x = ml + cw * col, y = mt + ch * r;
      auto it = lut.find({t0s[col], dps[r]});
      if (it == lut.end()) {
        rect(o, x, y, cw - 1, ch - 1, "#ffffff", " stroke=\"#ddd\"");
        continue;
      }
      const FlexibilityCell& c = *it->second;
      if (c.status == "error") {
        rect(o, x, y, cw - 1, ch - 1, "#f3d6d6", " stroke=\"#ddd\"");
        text(o, x + cw / 2, y + ch / 2 + 4, "err",
             " class=\"tick\" text-anchor=\"middle\"");
        continue;
      }
      rect(o, x, y, cw - 1, ch - 1, heat_color(c.tau_hours / taumax),
           " stroke=\"#ddd\"");
      std::string label = num2(c.tau_hours);
      if (c.status == "horizon-capped") label = "≥" + label;
      std::string style = c.tau_hours / taumax > 0.55 ? ";fill:#fff" : "";
      text(o, x + cw / 2, y + ch / 2 + 4, label,
           " text-anchor=\"middle\" style=\"font-size:10px" + style + "\"");
    }
  }
  for (size_t col = 0; col < t0s.size(); ++col) {
    text(o, ml + cw * col + cw / 2, mt + ch * dps.size() + 16,
         clock_label(t0s[col], slot_hours),
         " class=\"tick\" text-anchor=\"middle\"");
  }
  text(o, ml, height - 10, "Cell value: hours sustainable (≥ = horizon-limited)",
       " class=\"tick\"");
  o << "</svg>\n";
  return o.str();
}

std::string svg_breakdown(const FlexibilityCell& cell) {
  const double width = 1120, height = 420;
  const double ml = 64, mr = 30, mt = 44, mb = 66;
  const double plot_w = width - ml - mr, plot_h = height - mt - mb;
  const int n = static_cast<int>(cell.slots.size());
  if (n == 0) throw std::runtime_error("breakdown plot: empty cell");

  double amax = 0.0;
  for (int i = 0; i < n; ++i) {
    double pos = 0.0, neg = 0.0;
    double parts[4] = {cell.d_it[i], cell.d_ups[i], cell.d_crac[i],
                       cell.d_tes[i]};
    for (double p : parts) (p >= 0.0 ? pos : neg) += std::abs(p);
    amax = std::max({amax, pos, neg});
  }
  double ymax = nice_ceil(std::max(amax, 1.0) * 1.05);
  const double bw = plot_w / n;
  const double y0 = mt + plot_h / 2;
  auto yscale = [&](double v) { return y0 - (plot_h / 2) * v / ymax; };

  std::ostringstream o;
  o << svg_open(width, height);
  text(o, width / 2, 24,
       "Asset contributions to the grid deviation (start " +
           clock_label(cell.t0, 0.25) + ", " + num(cell.delta_p_kw) + " kW)",
       " class=\"title\" text-anchor=\"middle\"");

  for (int i = -2; i <= 2; ++i) {
    double v = ymax * i / 2.0;
    hline(o, ml, width - mr, yscale(v), i == 0 ? "#888" : "#e8e8e8");
    text(o, ml - 6, yscale(v) + 4, num(v), " class=\"tick\" text-anchor=\"end\"");
  }
  text(o, 14, y0, "kW",
       " class=\"tick\" text-anchor=\"middle\" transform=\"rotate(-90 14 " +
           num(y0) + ")\"");

  for (int i = 0; i < n; ++i) {
    double x = ml + bw * i;
    double parts[4] = {cell.d_it[i], cell.d_ups[i], cell.d_crac[i],
                       cell.d_tes[i]};
    double up = 0.0, down = 0.0;
    for (int c = 0; c < 4; ++c) {
      if (std::abs(parts[c]) < 1e-9) continue;
      double h = (plot_h / 2) * std::abs(parts[c]) / ymax;
      if (parts[c] > 0.0) {
        up += h;
        rect(o, x, y0 - up, std::max(bw - 0.5, 0.5), h,
             kAssetComponents[c].color);
      } else {
        rect(o, x, y0 + down, std::max(bw - 0.5, 0.5), h,
             kAssetComponents[c].color, " opacity=\"0.82\"");
        down += h;
      }
    }
  }

  std::ostringstream pts;
  for (int i = 0; i < n; ++i) {
    double x0 = ml + bw * i;
    double y = yscale(cell.d_total[i]);
    pts << num(x0) << "," << num(y) << " " << num(x0 + bw) << "," << num(y)
        << " ";
  }
  o << "<polyline points=\"" << pts.str()
    << "\" fill=\"none\" stroke=\"#222\" stroke-width=\"1.2\" "
       "stroke-dasharray=\"4 2\"/>\n";

  int per_hour = 4;
  for (int i = 0; i < n; i += per_hour) {
    double x = ml + bw * i;
    text(o, x, mt + plot_h + 16, clock_label(cell.slots[i], 0.25),
         " class=\"tick\" text-anchor=\"middle\"");
  }

  double lx = ml;
  const double ly = height - 20;
  for (const auto& c : kAssetComponents) {
    rect(o, lx, ly - 10, 12, 12, c.color);
    text(o, lx + 16, ly, c.label);
    lx += 16 + 7.0 * std::string(c.label).size() + 24;
  }
  hline(o, lx, lx + 24, ly - 4, "#222",
        " stroke-width=\"1.2\" stroke-dasharray=\"4 2\"");
  text(o, lx + 30, ly, "Net deviation");
  o << "</svg>\n";
  return o.str();
}

void write_svg(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << content;
  if (!f.good()) throw std::runtime_error("write failed: " + path);
}

}  // namespace dcflex
