#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "conntraj/association.hpp"
#include "conntraj/handover.hpp"
#include "conntraj/scenario.hpp"

namespace conntraj {

// Monte-Carlo comparison of the proposed and exhaustive planners. Defaults
// are the reference setup: 11 GBSs uniform in a 10 km x 10 km square,
// u0 = (2000, 2000), uF = (8000, 8000), H = 90 m, H_G = 12.5 m, 50 m/s,
// gamma0 = 80 dB.
struct BenchConfig {
  std::size_t instance_count = 100;
  std::size_t gbs_count = 11;
  double region_width = 10'000.0;
  double region_height = 10'000.0;
  Vec2 u0{2000.0, 2000.0};
  Vec2 uf{8000.0, 8000.0};
  double uav_altitude = 90.0;
  double gbs_altitude = 12.5;
  double vmax = 50.0;
  double gamma0_db = 80.0;
  std::uint64_t rng_seed = 1;
  std::size_t max_paths = kDefaultMaxPaths;
  // Unset: each instance uses its own maximum attainable target.
  std::optional<double> fixed_rho_db;
  bool allow_large_m = false;  // exhaustive search above 12 GBSs
  std::size_t threads = 1;
  SolverConfig solver;

  void validate() const;
};

inline constexpr std::size_t kExhaustiveGbsLimit = 12;

// GBS layouts are drawn from one std::mt19937_64 stream seeded with rng_seed:
// per instance, M points (x then y), each coordinate
// (next() >> 11) * 2^-53 scaled to the region. Bit-identical on every
// platform.
std::vector<Scenario> draw_instances(const BenchConfig& cfg);

enum class InstanceStatus { Feasible, Infeasible, Failed };
const char* to_string(InstanceStatus status) noexcept;

struct InstanceResult {
  std::size_t index = 0;
  InstanceStatus status = InstanceStatus::Failed;
  double rho_db = 0.0;
  double d_bar = 0.0;
  double t_proposed = 0.0;
  double t_optimal = 0.0;
  double gap_percent = 0.0;  // 100 (T_proposed - T_optimal) / T_optimal
  std::string proposed_sequence;
  std::string optimal_sequence;
  std::size_t sequences_evaluated = 0;
  std::string error;
};

struct BenchmarkSummary {
  std::size_t instance_count = 0;
  std::vector<InstanceResult> instances;  // ordered by index
  double mean_gap_percent = 0.0;          // over feasible instances
  double max_gap_percent = 0.0;
  double min_gap_percent = 0.0;
  std::size_t feasible_count = 0;
  std::size_t infeasible_count = 0;
  std::size_t failed_count = 0;
  std::uint64_t rng_seed = 0;
};

// Runs both planners on each drawn instance. Per-instance failures (for
// example TooManyPaths) are recorded, not thrown. Throws Error(ResourceLimit)
// above kExhaustiveGbsLimit GBSs unless allow_large_m is set.
BenchmarkSummary run_benchmark(const BenchConfig& cfg);

// `key,value` rows: configuration (including solver settings) and aggregates.
void write_summary_csv(std::ostream& out, const BenchConfig& cfg, const BenchmarkSummary& sum);
// One row per instance; infinite times are empty cells.
void write_instances_csv(std::ostream& out, const BenchmarkSummary& sum);

}  // namespace conntraj
