#include "conntraj/benchmark.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ostream>
#include <random>
#include <thread>

#include "conntraj/connectivity.hpp"
#include "conntraj/error.hpp"
#include "conntraj/planner.hpp"
#include "conntraj/text.hpp"

namespace conntraj {

void BenchConfig::validate() const {
  auto bad = [](const std::string& what) { throw Error(ErrorCode::InvalidInput, "bench: " + what); };
  if (instance_count == 0) bad("instance_count must be >= 1");
  if (gbs_count == 0) bad("M must be >= 1");
  if (!(region_width > 0.0 && region_height > 0.0)) bad("region must be positive");
  if (max_paths == 0) bad("max_paths must be >= 1");
  if (threads == 0) bad("threads must be >= 1");
  if (fixed_rho_db && !std::isfinite(*fixed_rho_db)) bad("rho must be finite");
  solver.validate();
  if (gbs_count > kExhaustiveGbsLimit && !allow_large_m)
    throw Error(ErrorCode::ResourceLimit,
                "bench: exhaustive search with M = " + std::to_string(gbs_count) + " > " +
                    std::to_string(kExhaustiveGbsLimit) + " needs allow_large_m");
}

std::vector<Scenario> draw_instances(const BenchConfig& cfg) {
  std::mt19937_64 rng(cfg.rng_seed);
  auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  std::vector<Scenario> out;
  out.reserve(cfg.instance_count);
  for (std::size_t i = 0; i < cfg.instance_count; ++i) {
    ScenarioParams p;
    for (std::size_t m = 0; m < cfg.gbs_count; ++m) {
      const double x = unit() * cfg.region_width;
      const double y = unit() * cfg.region_height;
      p.gbs.push_back({x, y});
    }
    p.u0 = cfg.u0;
    p.uf = cfg.uf;
    p.uav_altitude = cfg.uav_altitude;
    p.gbs_altitude = cfg.gbs_altitude;
    p.vmax = cfg.vmax;
    p.gamma0_db = cfg.gamma0_db;
    out.emplace_back(std::move(p));
  }
  return out;
}

const char* to_string(InstanceStatus status) noexcept {
  switch (status) {
    case InstanceStatus::Feasible: return "feasible";
    case InstanceStatus::Infeasible: return "infeasible";
    case InstanceStatus::Failed: return "failed";
  }
  return "unknown";
}

namespace {

InstanceResult run_instance(const BenchConfig& cfg, const Scenario& s, std::size_t index) {
  InstanceResult r;
  r.index = index;
  try {
    // The critical radius is used directly rather than round-tripped through
    // dB, so the instance stays feasible at its own maximum target.
    std::optional<CoverageRadius> d_bar;
    if (cfg.fixed_rho_db) {
      r.rho_db = *cfg.fixed_rho_db;
      d_bar = compute_coverage_radius(s, SnrTarget{r.rho_db});
    } else {
      const MaxSnr max = max_attainable_snr(s);
      r.rho_db = max.rho_max_db;
      d_bar = CoverageRadius(max.critical_d_bar);
    }
    r.d_bar = d_bar->meters();
    const PlanResult proposed = plan_proposed(s, *d_bar, cfg.solver);
    if (!proposed.feasible()) {
      r.status = InstanceStatus::Infeasible;
      r.t_proposed = r.t_optimal = std::numeric_limits<double>::infinity();
      return r;
    }
    const PlanResult optimal = plan_optimal(s, *d_bar, cfg.max_paths, cfg.solver);
    r.status = InstanceStatus::Feasible;
    r.t_proposed = proposed.total_time;
    r.t_optimal = optimal.total_time;
    r.gap_percent = r.t_optimal > 0.0 ? 100.0 * (r.t_proposed - r.t_optimal) / r.t_optimal : 0.0;
    r.proposed_sequence = proposed.sequence->to_string();
    r.optimal_sequence = optimal.sequence->to_string();
    r.sequences_evaluated = optimal.sequences_evaluated;
  } catch (const Error& e) {
    r.status = e.code() == ErrorCode::UnattainableSnr ? InstanceStatus::Infeasible
                                                      : InstanceStatus::Failed;
    r.error = std::string(to_string(e.code())) + ": " + e.what();
  }
  return r;
}

}  // namespace

BenchmarkSummary run_benchmark(const BenchConfig& cfg) {
  cfg.validate();
  const std::vector<Scenario> instances = draw_instances(cfg);

  BenchmarkSummary sum;
  sum.instance_count = cfg.instance_count;
  sum.rng_seed = cfg.rng_seed;
  sum.instances.resize(instances.size());

  // Workers pull indices; each result lands in its own slot, so the output
  // does not depend on scheduling.
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < instances.size(); i = next++)
      sum.instances[i] = run_instance(cfg, instances[i], i);
  };
  const std::size_t threads = std::min(cfg.threads, instances.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  double gap_total = 0.0;
  bool first = true;
  for (const InstanceResult& r : sum.instances) {
    switch (r.status) {
      case InstanceStatus::Feasible:
        ++sum.feasible_count;
        gap_total += r.gap_percent;
        sum.max_gap_percent = first ? r.gap_percent : std::max(sum.max_gap_percent, r.gap_percent);
        sum.min_gap_percent = first ? r.gap_percent : std::min(sum.min_gap_percent, r.gap_percent);
        first = false;
        break;
      case InstanceStatus::Infeasible: ++sum.infeasible_count; break;
      case InstanceStatus::Failed: ++sum.failed_count; break;
    }
  }
  if (sum.feasible_count) sum.mean_gap_percent = gap_total / static_cast<double>(sum.feasible_count);
  return sum;
}

void write_summary_csv(std::ostream& out, const BenchConfig& cfg, const BenchmarkSummary& sum) {
  auto row = [&out](const std::string& key, const std::string& value) {
    out << key << ',' << value << '\n';
  };
  std::string schedule;
  for (const double e : cfg.solver.smoothing_schedule) {
    if (!schedule.empty()) schedule += ';';
    schedule += format_general(e);
  }
  out << "key,value\n";
  row("rng", "mt19937_64");
  row("rng_seed", std::to_string(sum.rng_seed));
  row("instance_count", std::to_string(sum.instance_count));
  row("M", std::to_string(cfg.gbs_count));
  row("region_width_m", format_fixed(cfg.region_width, 3));
  row("region_height_m", format_fixed(cfg.region_height, 3));
  row("u0", format_fixed(cfg.u0.x, 3) + ' ' + format_fixed(cfg.u0.y, 3));
  row("uF", format_fixed(cfg.uf.x, 3) + ' ' + format_fixed(cfg.uf.y, 3));
  row("H_m", format_fixed(cfg.uav_altitude, 3));
  row("HG_m", format_fixed(cfg.gbs_altitude, 3));
  row("vmax_mps", format_fixed(cfg.vmax, 3));
  row("gamma0_db", format_fixed(cfg.gamma0_db, 3));
  row("rho_mode", cfg.fixed_rho_db ? "fixed " + format_fixed(*cfg.fixed_rho_db, 6) : "rho_max");
  row("max_paths", std::to_string(cfg.max_paths));
  row("solver_smoothing_schedule", schedule);
  row("solver_max_iterations", std::to_string(cfg.solver.max_iterations));
  row("solver_objective_tolerance", format_general(cfg.solver.objective_tolerance));
  row("solver_constraint_tolerance", format_general(cfg.solver.constraint_tolerance));
  row("solver_straight_line_shortcut", cfg.solver.straight_line_shortcut ? "1" : "0");
  row("solver_newton_polish", cfg.solver.newton_polish ? "1" : "0");
  row("solver_polish_iterations", std::to_string(cfg.solver.polish_iterations));
  row("feasible_count", std::to_string(sum.feasible_count));
  row("infeasible_count", std::to_string(sum.infeasible_count));
  row("failed_count", std::to_string(sum.failed_count));
  row("mean_gap_percent", format_fixed(sum.mean_gap_percent, 6));
  row("min_gap_percent", format_fixed(sum.min_gap_percent, 6));
  row("max_gap_percent", format_fixed(sum.max_gap_percent, 6));
}

void write_instances_csv(std::ostream& out, const BenchmarkSummary& sum) {
  out << "index,status,rho_db,d_bar_m,T_proposed_s,T_optimal_s,gap_percent,proposed_sequence,"
         "optimal_sequence,sequences_evaluated,error\n";
  for (const InstanceResult& r : sum.instances) {
    const bool ok = r.status == InstanceStatus::Feasible;
    std::string error = r.error;
    std::replace(error.begin(), error.end(), ',', ';');
    out << r.index << ',' << to_string(r.status) << ',' << format_fixed(r.rho_db, 6) << ','
        << format_fixed(r.d_bar, 6) << ',' << (ok ? format_cell(r.t_proposed, 6) : "") << ','
        << (ok ? format_cell(r.t_optimal, 6) : "") << ',' << (ok ? format_fixed(r.gap_percent, 6) : "")
        << ",\"" << r.proposed_sequence << "\",\"" << r.optimal_sequence << "\","
        << r.sequences_evaluated << ',' << error << '\n';
  }
}

}  // namespace conntraj
