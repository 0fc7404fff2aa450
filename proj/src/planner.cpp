#include "conntraj/planner.hpp"

#include <algorithm>
#include <limits>
#include <optional>

#include "conntraj/connectivity.hpp"
#include "conntraj/error.hpp"

namespace conntraj {

namespace {

using Clock = std::chrono::steady_clock;
constexpr double kInf = std::numeric_limits<double>::infinity();

PlanResult infeasible(const Scenario& s, PlanMethod method, double d_bar) {
  PlanResult r;
  r.status = PlanStatus::Infeasible;
  r.method = method;
  r.trajectory = Trajectory::hold(s.u0(), s.vmax());
  r.total_time = kInf;
  r.path_length = kInf;
  r.d_bar = d_bar;
  return r;
}

PlanResult feasible(const Scenario& s, PlanMethod method, double d_bar,
                    const AssociationSequence& seq, const HandoverSolution& sol) {
  PlanResult r;
  r.status = PlanStatus::Feasible;
  r.method = method;
  r.sequence = seq;
  r.trajectory = build_trajectory(sol, seq, s.vmax());
  r.total_time = r.trajectory.total_time();
  r.path_length = sol.objective;
  r.d_bar = d_bar;
  return r;
}

}  // namespace

const char* to_string(PlanStatus status) noexcept {
  return status == PlanStatus::Feasible ? "feasible" : "infeasible";
}

const char* to_string(PlanMethod method) noexcept {
  switch (method) {
    case PlanMethod::Proposed: return "proposed";
    case PlanMethod::Optimal: return "optimal";
    case PlanMethod::Straight: return "straight";
  }
  return "unknown";
}

PlanMethod parse_method(const std::string& name) {
  if (name == "proposed") return PlanMethod::Proposed;
  if (name == "optimal") return PlanMethod::Optimal;
  if (name == "straight") return PlanMethod::Straight;
  throw Error(ErrorCode::InvalidInput, "unknown method '" + name + "'");
}

PlanResult plan_proposed(const Scenario& s, CoverageRadius d_bar, const SolverConfig& cfg) {
  const auto start = Clock::now();
  const CoverageGraph g = build_graph(s, d_bar);
  PlanResult r;
  if (!is_feasible(g)) {
    r = infeasible(s, PlanMethod::Proposed, d_bar.meters());
  } else {
    const AssociationSequence seq = shortest_path_association(g);
    r = feasible(s, PlanMethod::Proposed, d_bar.meters(), seq,
                 optimize_handovers(s, seq, d_bar, cfg));
    r.sequences_evaluated = 1;
  }
  r.solve_wall_time = Clock::now() - start;
  return r;
}

PlanResult plan_proposed(const Scenario& s, SnrTarget target, const SolverConfig& cfg) {
  return plan_proposed(s, compute_coverage_radius(s, target), cfg);
}

PlanResult plan_optimal(const Scenario& s, CoverageRadius d_bar, std::size_t max_paths,
                        const SolverConfig& cfg) {
  const auto start = Clock::now();
  const CoverageGraph g = build_graph(s, d_bar);
  PlanResult r;
  if (!is_feasible(g)) {
    r = infeasible(s, PlanMethod::Optimal, d_bar.meters());
  } else {
    // Candidates are ranked by mission time computed exactly as the reported
    // trajectory does, so the proposed plan can never beat this one by
    // rounding.
    const AssociationSequence seed_seq = shortest_path_association(g);
    HandoverSolution seed = optimize_handovers(s, seed_seq, d_bar, cfg);
    const double seed_time = build_trajectory(seed, seed_seq, s.vmax()).total_time();

    // Branch and bound: a sequence whose lower bound already reaches an
    // earlier candidate can at best tie it, and one above the Dijkstra plan
    // cannot win. The Dijkstra sequence itself is always a candidate, so the
    // result is never slower than the proposed plan.
    constexpr double kRel = 1e-12;
    SolverConfig probe_cfg = cfg;
    probe_cfg.smoothing_schedule = {cfg.smoothing_schedule.back()};
    if (cfg.smoothing_schedule.size() > 1)
      probe_cfg.smoothing_schedule.insert(probe_cfg.smoothing_schedule.begin(), cfg.smoothing_schedule.front());
    probe_cfg.max_iterations = std::min<std::size_t>(cfg.max_iterations, 50);
    std::optional<AssociationSequence> best_seq;
    HandoverSolution best;
    double best_time = kInf;
    std::size_t optimized = 0;
    const std::size_t count =
        for_each_association(g, max_paths, [&](const AssociationSequence& seq) {
          const bool is_seed = seq == seed_seq;
          if (!is_seed) {
            auto hopeless = [&](double length) {
              const double bound = length / s.vmax();
              return bound >= best_time * (1 - kRel) || bound > seed_time * (1 + kRel);
            };
            if (hopeless(length_lower_bound(s, seq, d_bar))) return;
            // Second test: the dual bound at a rough solve.
            const HandoverSolution rough = optimize_handovers(s, seq, d_bar, probe_cfg);
            if (hopeless(length_dual_bound(handover_regions(s, seq, d_bar), rough.points))) return;
          }
          ++optimized;
          HandoverSolution sol = is_seed ? seed : optimize_handovers(s, seq, d_bar, cfg);
          const double t = build_trajectory(sol, seq, s.vmax()).total_time();
          if (!best_seq || t < best_time) {
            best_seq = seq;
            best = std::move(sol);
            best_time = t;
          }
        });
    if (!best_seq) {
      best_seq = seed_seq;
      best = std::move(seed);
    }
    r = feasible(s, PlanMethod::Optimal, d_bar.meters(), *best_seq, best);
    r.sequences_evaluated = count;
    r.sequences_optimized = optimized;
  }
  r.solve_wall_time = Clock::now() - start;
  return r;
}

PlanResult plan_optimal(const Scenario& s, SnrTarget target, std::size_t max_paths,
                        const SolverConfig& cfg) {
  return plan_optimal(s, compute_coverage_radius(s, target), max_paths, cfg);
}

PlanResult plan_straight(const Scenario& s, CoverageRadius d_bar) {
  const auto start = Clock::now();
  PlanResult r;
  if (straight_flight_threshold(s).worst_distance > d_bar.meters()) {
    r = infeasible(s, PlanMethod::Straight, d_bar.meters());
  } else {
    const Trajectory t = straight_flight(s);
    r.status = PlanStatus::Feasible;
    r.method = PlanMethod::Straight;
    r.sequence = AssociationSequence({t.associations()[0]});
    r.trajectory = t;
    r.total_time = t.total_time();
    r.path_length = t.length();
    r.d_bar = d_bar.meters();
  }
  r.solve_wall_time = Clock::now() - start;
  return r;
}

PlanResult plan_straight(const Scenario& s, SnrTarget target) {
  return plan_straight(s, compute_coverage_radius(s, target));
}

}  // namespace conntraj
