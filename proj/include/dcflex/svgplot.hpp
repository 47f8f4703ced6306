#pragma once
// Static SVG emission for the run artifacts. Every function is a pure
// function of its inputs (no timestamps, no randomness), so re-running on the
// same data yields byte-identical files.

#include <string>
#include <vector>

#include "dcflex/flexibility.hpp"
#include "dcflex/schedule.hpp"

namespace dcflex {

// Two-bar comparison of the main-day costs.
std::string svg_cost_comparison(double base_gbp, double optimised_gbp);

// Per-slot stacked decomposition of grid draw with the price curve overlaid.
std::string svg_schedule_decomposition(const ScheduleSolution& s);

// (t0, delta-P) grid coloured by sustainable duration.
std::string svg_heatmap(const std::vector<FlexibilityCell>& cells);

// Per-slot stacked asset deviations of one cell, signed around zero.
std::string svg_breakdown(const FlexibilityCell& cell);

void write_svg(const std::string& path, const std::string& content);

}  // namespace dcflex
