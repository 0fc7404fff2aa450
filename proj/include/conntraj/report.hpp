#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "conntraj/association.hpp"
#include "conntraj/handover.hpp"
#include "conntraj/planner.hpp"
#include "conntraj/scenario.hpp"

namespace conntraj {

// Map-style SVG: coverage disks of radius d around each GBS, GBS and endpoint
// markers, one polyline per result (colored by method) with its handover
// points. Output bytes depend only on the inputs.
std::string render_svg(const Scenario& s, std::span<const PlanResult> results,
                       CoverageRadius d_bar);

struct SweepRow {
  double rho_db;
  double t_proposed;  // +inf when infeasible
  double t_optimal;
  double t_straight;
  bool straight_feasible;
};

// Mission time of the three planners over an ascending grid of SNR targets.
// Targets above the on-top SNR are reported as infeasible for every method.
std::vector<SweepRow> sweep_snr(const Scenario& s, std::span<const double> rho_grid_db,
                                std::size_t max_paths = kDefaultMaxPaths,
                                const SolverConfig& cfg = {});

// `rho_db,T_proposed,T_optimal,T_straight,straight_feasible`; infinite times
// are empty cells.
void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);

// n evenly spaced values from lo to hi inclusive (n == 1 gives lo).
std::vector<double> linear_grid(double lo, double hi, std::size_t n);

}  // namespace conntraj
