// conntraj: command-line front end.
//
//   conntraj plan     scenario.json --rho-db 12 --method proposed --svg out.svg
//   conntraj feasible scenario.json [--rho-db 12]
//   conntraj sweep    scenario.json --rho-min 0 --rho-max 15 --steps 31
//   conntraj bench    --instances 100 --m 11 --seed 1
//
// Exit status: 0 success, 1 infeasible, 2 input error, 3 resource limit.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "conntraj/benchmark.hpp"
#include "conntraj/connectivity.hpp"
#include "conntraj/error.hpp"
#include "conntraj/planner.hpp"
#include "conntraj/report.hpp"
#include "conntraj/scenario_io.hpp"
#include "conntraj/text.hpp"
#include "conntraj/trajectory.hpp"

namespace {

using namespace conntraj;

enum Exit : int { kOk = 0, kInfeasible = 1, kInputError = 2, kResourceLimit = 3 };

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::Infeasible:
    case ErrorCode::UnattainableSnr:
    case ErrorCode::Unreachable: return kInfeasible;
    case ErrorCode::TooManyPaths:
    case ErrorCode::ResourceLimit: return kResourceLimit;
    default: return kInputError;
  }
}

// Writes to `path`, or stdout for "-".
template <typename Fn>
void write_output(const std::string& path, Fn&& fn) {
  if (path == "-") {
    fn(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidInput, "cannot open " + path + " for writing");
  fn(out);
  if (!out) throw Error(ErrorCode::InvalidInput, "write to " + path + " failed");
}

void add_solver_options(CLI::App& cmd, SolverConfig& cfg) {
  cmd.add_option("--eps-schedule", cfg.smoothing_schedule,
                 "Smoothing schedule, fractions of the coverage radius")
      ->group("Solver");
  cmd.add_option("--max-iterations", cfg.max_iterations, "Gradient iterations per smoothing stage")
      ->group("Solver");
  cmd.add_option("--objective-tolerance", cfg.objective_tolerance,
                 "Relative decrease that ends a stage")
      ->group("Solver");
  cmd.add_option("--stall-window", cfg.stall_window, "Iterations the decrease is measured over")
      ->group("Solver");
  cmd.add_option("--polish-iterations", cfg.polish_iterations, "Newton polish iteration budget")
      ->group("Solver");
  cmd.add_flag("!--no-polish", cfg.newton_polish, "Skip the Newton polish")->group("Solver");
  cmd.add_flag("!--no-shortcut", cfg.straight_line_shortcut,
               "Skip the straight-line shortcut")
      ->group("Solver");
}

void print_plan(const Scenario& s, const PlanResult& r) {
  std::cout << "method: " << to_string(r.method) << '\n'
            << "status: " << to_string(r.status) << '\n'
            << "d_bar_m: " << format_fixed(r.d_bar, 6) << '\n';
  if (r.sequence) std::cout << "sequence: " << r.sequence->to_string() << '\n';
  if (r.feasible()) {
    std::cout << "T_s: " << format_fixed(r.total_time, 6) << '\n'
              << "length_m: " << format_fixed(r.path_length, 6) << '\n'
              << "straight_T_s: " << format_fixed(distance(s.u0(), s.uf()) / s.vmax(), 6) << '\n';
  } else {
    std::cout << "T_s: inf\n";
  }
  if (r.method == PlanMethod::Optimal) std::cout << "sequences_evaluated: " << r.sequences_evaluated << '\n';
  std::cout << "wall_time_s: " << format_fixed(r.solve_wall_time.count(), 6) << '\n';
}

struct PlanArgs {
  std::string scenario;
  double rho_db = 0.0;
  std::string method = "proposed";
  std::string waypoints;
  std::string trajectory;
  double dt = 1.0;
  std::string svg;
  std::size_t max_paths = kDefaultMaxPaths;
  SolverConfig solver;
};

int run_plan(const PlanArgs& a) {
  const Scenario s = load_scenario(a.scenario);
  const PlanMethod method = parse_method(a.method);
  const SnrTarget target{a.rho_db};
  PlanResult r;
  try {
    switch (method) {
      case PlanMethod::Proposed: r = plan_proposed(s, target, a.solver); break;
      case PlanMethod::Optimal: r = plan_optimal(s, target, a.max_paths, a.solver); break;
      case PlanMethod::Straight: r = plan_straight(s, target); break;
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::UnattainableSnr) throw;
    std::cout << "method: " << a.method << "\nstatus: infeasible\nT_s: inf\nreason: " << e.what() << '\n';
    return kInfeasible;
  }
  print_plan(s, r);

  if (!a.waypoints.empty())
    write_output(a.waypoints, [&](std::ostream& out) { write_waypoint_csv(out, r.trajectory); });
  if (!a.trajectory.empty()) {
    const auto ref = method == PlanMethod::Straight ? SnrReference::Nearest : SnrReference::Associated;
    write_output(a.trajectory,
                 [&](std::ostream& out) { write_trajectory_csv(out, s, r.trajectory, a.dt, ref); });
  }
  if (!a.svg.empty()) {
    const std::vector<PlanResult> results{r};
    write_output(a.svg, [&](std::ostream& out) {
      out << render_svg(s, results, CoverageRadius(r.d_bar));
    });
  }
  return r.feasible() ? kOk : kInfeasible;
}

struct FeasibleArgs {
  std::string scenario;
  std::optional<double> rho_db;
  std::string edges;
};

int run_feasible(const FeasibleArgs& a) {
  const Scenario s = load_scenario(a.scenario);
  const MaxSnr best = max_attainable_snr(s);
  const StraightThreshold straight = straight_flight_threshold(s);
  std::cout << "critical_d_bar_m: " << format_fixed(best.critical_d_bar, 6) << '\n'
            << "rho_max_db: " << format_fixed(best.rho_max_db, 6) << '\n'
            << "straight_threshold_db: " << format_fixed(straight.rho_s_db, 6) << '\n';
  if (!a.rho_db) return kOk;

  std::cout << "rho_db: " << format_fixed(*a.rho_db, 6) << '\n';
  std::optional<CoverageRadius> d_bar;
  try {
    d_bar = compute_coverage_radius(s, SnrTarget{*a.rho_db});
  } catch (const Error& e) {
    if (e.code() != ErrorCode::UnattainableSnr) throw;
    std::cout << "feasible: no\nreason: " << e.what() << '\n';
    return kInfeasible;
  }
  const CoverageGraph g = build_graph(s, *d_bar);
  const bool ok = is_feasible(g);
  std::cout << "d_bar_m: " << format_fixed(d_bar->meters(), 6) << '\n'
            << "edges: " << g.edges().size() << '\n'
            << "feasible: " << (ok ? "yes" : "no") << '\n';
  if (!a.edges.empty()) write_output(a.edges, [&](std::ostream& out) { write_edge_csv(out, g); });
  return ok ? kOk : kInfeasible;
}

struct SweepArgs {
  std::string scenario;
  double rho_min = 0.0;
  double rho_max = 15.0;
  std::size_t steps = 31;
  std::string out = "-";
  std::size_t max_paths = kDefaultMaxPaths;
  SolverConfig solver;
};

int run_sweep(const SweepArgs& a) {
  if (a.steps == 0) throw Error(ErrorCode::InvalidInput, "--steps must be at least 1");
  if (!(a.rho_max >= a.rho_min)) throw Error(ErrorCode::InvalidInput, "--rho-max must be >= --rho-min");
  const Scenario s = load_scenario(a.scenario);
  const auto grid = linear_grid(a.rho_min, a.rho_max, a.steps);
  const auto rows = sweep_snr(s, grid, a.max_paths, a.solver);
  write_output(a.out, [&](std::ostream& out) { write_sweep_csv(out, rows); });
  return kOk;
}

struct BenchArgs {
  BenchConfig cfg;
  std::optional<double> rho_db;
  std::string summary = "-";
  std::string instances_csv;
};

int run_bench(BenchArgs a) {
  a.cfg.fixed_rho_db = a.rho_db;
  const BenchmarkSummary sum = run_benchmark(a.cfg);
  write_output(a.summary, [&](std::ostream& out) { write_summary_csv(out, a.cfg, sum); });
  if (!a.instances_csv.empty())
    write_output(a.instances_csv, [&](std::ostream& out) { write_instances_csv(out, sum); });
  return sum.failed_count ? kResourceLimit : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimum-time UAV trajectories under a cellular connectivity constraint", "conntraj"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);

  PlanArgs plan;
  auto* plan_cmd = app.add_subcommand("plan", "Plan one trajectory");
  plan_cmd->add_option("scenario", plan.scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  plan_cmd->add_option("--rho-db", plan.rho_db, "Minimum SNR target (dB)")->required();
  plan_cmd->add_option("--method", plan.method, "Planner")
      ->check(CLI::IsMember({"proposed", "optimal", "straight"}));
  plan_cmd->add_option("--waypoints", plan.waypoints, "Waypoint CSV output ('-' for stdout)");
  plan_cmd->add_option("--trajectory", plan.trajectory, "Sampled trajectory CSV output ('-' for stdout)");
  plan_cmd->add_option("--dt", plan.dt, "Trajectory sampling interval (s)")->check(CLI::PositiveNumber);
  plan_cmd->add_option("--svg", plan.svg, "SVG map output");
  plan_cmd->add_option("--max-paths", plan.max_paths, "Path limit for the optimal planner");
  add_solver_options(*plan_cmd, plan.solver);

  FeasibleArgs feas;
  auto* feas_cmd = app.add_subcommand("feasible", "Report the maximum SNR target and check one target");
  feas_cmd->add_option("scenario", feas.scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  feas_cmd->add_option("--rho-db", feas.rho_db, "SNR target to check (dB); exit 1 when infeasible");
  feas_cmd->add_option("--edges", feas.edges, "Coverage graph edge CSV output");

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Mission time of every planner over a range of SNR targets");
  sweep_cmd->add_option("scenario", sweep.scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  sweep_cmd->add_option("--rho-min", sweep.rho_min, "Lowest target (dB)");
  sweep_cmd->add_option("--rho-max", sweep.rho_max, "Highest target (dB)");
  sweep_cmd->add_option("--steps", sweep.steps, "Number of targets");
  sweep_cmd->add_option("--out", sweep.out, "CSV output ('-' for stdout)");
  sweep_cmd->add_option("--max-paths", sweep.max_paths, "Path limit for the optimal planner");
  add_solver_options(*sweep_cmd, sweep.solver);

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Proposed vs. exhaustive planner on random GBS layouts");
  bench_cmd->add_option("--instances", bench.cfg.instance_count, "Number of instances")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--m", bench.cfg.gbs_count, "GBSs per instance")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--seed", bench.cfg.rng_seed, "mt19937_64 seed");
  bench_cmd->add_option("--width", bench.cfg.region_width, "Region width (m)");
  bench_cmd->add_option("--height", bench.cfg.region_height, "Region height (m)");
  bench_cmd->add_option("--u0x", bench.cfg.u0.x, "Start x (m)");
  bench_cmd->add_option("--u0y", bench.cfg.u0.y, "Start y (m)");
  bench_cmd->add_option("--ufx", bench.cfg.uf.x, "Destination x (m)");
  bench_cmd->add_option("--ufy", bench.cfg.uf.y, "Destination y (m)");
  bench_cmd->add_option("--H", bench.cfg.uav_altitude, "UAV altitude (m)");
  bench_cmd->add_option("--HG", bench.cfg.gbs_altitude, "GBS altitude (m)");
  bench_cmd->add_option("--vmax", bench.cfg.vmax, "Speed limit (m/s)");
  bench_cmd->add_option("--gamma0-db", bench.cfg.gamma0_db, "Reference SNR at 1 m (dB)");
  bench_cmd->add_option("--rho-db", bench.rho_db,
                        "Fixed SNR target (dB); default is each instance's maximum attainable target");
  bench_cmd->add_option("--max-paths", bench.cfg.max_paths, "Path limit for the exhaustive planner");
  bench_cmd->add_option("--threads", bench.cfg.threads, "Worker threads")->check(CLI::PositiveNumber);
  bench_cmd->add_flag("--allow-large-m", bench.cfg.allow_large_m, "Permit exhaustive search above 12 GBSs");
  bench_cmd->add_option("--summary", bench.summary, "Summary CSV output ('-' for stdout)");
  bench_cmd->add_option("--instances-csv", bench.instances_csv, "Per-instance CSV output");
  add_solver_options(*bench_cmd, bench.cfg.solver);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (*plan_cmd) return run_plan(plan);
    if (*feas_cmd) return run_feasible(feas);
    if (*sweep_cmd) return run_sweep(sweep);
    if (*bench_cmd) return run_bench(bench);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}
