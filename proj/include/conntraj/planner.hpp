#pragma once

#include <chrono>
#include <optional>
#include <string>

#include "conntraj/association.hpp"
#include "conntraj/handover.hpp"
#include "conntraj/scenario.hpp"
#include "conntraj/trajectory.hpp"

namespace conntraj {

enum class PlanStatus { Feasible, Infeasible };
enum class PlanMethod { Proposed, Optimal, Straight };

const char* to_string(PlanStatus status) noexcept;
const char* to_string(PlanMethod method) noexcept;
PlanMethod parse_method(const std::string& name);

struct PlanResult {
  PlanStatus status = PlanStatus::Infeasible;
  PlanMethod method = PlanMethod::Proposed;
  std::optional<AssociationSequence> sequence;
  Trajectory trajectory;
  double total_time = 0.0;   // +inf when infeasible
  double path_length = 0.0;  // +inf when infeasible
  double d_bar = 0.0;
  std::size_t sequences_evaluated = 0;  // enumerated paths
  std::size_t sequences_optimized = 0;  // of those, not pruned by the bound
  std::chrono::duration<double> solve_wall_time{};

  bool feasible() const { return status == PlanStatus::Feasible; }
};

// Graph, BFS feasibility check, Dijkstra association, handover optimization
// and trajectory reconstruction. Infeasible instances give T = +inf with the
// UAV held at u0. The SnrTarget overloads throw Error(UnattainableSnr).
PlanResult plan_proposed(const Scenario& s, CoverageRadius d_bar, const SolverConfig& cfg = {});
PlanResult plan_proposed(const Scenario& s, SnrTarget target, const SolverConfig& cfg = {});

// Exhaustive search over every simple U0 -> UF path, keeping the shortest
// (first in enumeration order on ties). Paths whose lens lower bound cannot
// beat the current best are enumerated but not optimized. Propagates
// Error(TooManyPaths).
PlanResult plan_optimal(const Scenario& s, CoverageRadius d_bar,
                        std::size_t max_paths = kDefaultMaxPaths, const SolverConfig& cfg = {});
PlanResult plan_optimal(const Scenario& s, SnrTarget target,
                        std::size_t max_paths = kDefaultMaxPaths, const SolverConfig& cfg = {});

// Straight u0 -> uF baseline; feasible iff the closest-GBS distance never
// exceeds d along the segment.
PlanResult plan_straight(const Scenario& s, CoverageRadius d_bar);
PlanResult plan_straight(const Scenario& s, SnrTarget target);

}  // namespace conntraj
