#pragma once
// CSV emission and ingestion for run artifacts. Writers print full-precision
// doubles so files round-trip exactly; readers validate headers against the
// documented schemas.

#include <string>
#include <vector>

#include "dcflex/flexibility.hpp"
#include "dcflex/schedule.hpp"

namespace dcflex {

// Per-slot schedule (columns per the documented schema); state columns give
// the value at the start of the slot.
void write_schedule_csv(const std::string& path, const ScheduleSolution& s);

// Every slot-boundary state including the terminal one (n_slots + 1 rows).
void write_states_csv(const std::string& path, const ScheduleSolution& s);

// Flexible-work placements of an optimised schedule.
void write_allocations_csv(const std::string& path, const std::vector<AllocPiece>& allocations);

// CPU-hours executed at each deferral distance.
void write_histogram_csv(const std::string& path, const std::vector<double>& cpu_hours_by_shift,
                         double slot_hours);

void write_heatmap_csv(const std::string& path, const std::vector<FlexibilityCell>& cells);

// Per-slot asset deviations of one resolved cell.
void write_breakdown_csv(const std::string& path, const FlexibilityCell& cell);

// Reads a schedule written by write_schedule_csv; boundary states are
// completed from the states file. Allocation ingestion is separate.
ScheduleSolution read_schedule_csv(const std::string& schedule_path,
                                   const std::string& states_path);

std::vector<AllocPiece> read_allocations_csv(const std::string& path);

}  // namespace dcflex
