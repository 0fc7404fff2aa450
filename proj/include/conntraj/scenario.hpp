#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "conntraj/geometry.hpp"

namespace conntraj {

// Raw problem data. Validated when turned into a Scenario.
struct ScenarioParams {
  std::vector<Vec2> gbs;       // horizontal GBS positions (m)
  Vec2 u0;                     // start (m)
  Vec2 uf;                     // destination (m)
  double uav_altitude = 90.0;  // H (m)
  double gbs_altitude = 12.5;  // H_G (m)
  double vmax = 50.0;          // m/s
  double gamma0_db = 80.0;     // reference SNR at 1 m
};

// Immutable problem instance: one UAV at constant altitude flying from u0 to
// uf among M ground base stations with omnidirectional unit-gain LoS links.
class Scenario {
 public:
  // Throws Error(InvalidInput) unless M >= 1, vmax > 0, H > H_G >= 0 and all
  // values are finite.
  explicit Scenario(ScenarioParams params);

  std::span<const Vec2> gbs() const { return params_.gbs; }
  Vec2 gbs(std::size_t index) const { return params_.gbs.at(index); }
  std::size_t gbs_count() const { return params_.gbs.size(); }
  Vec2 u0() const { return params_.u0; }
  Vec2 uf() const { return params_.uf; }
  double uav_altitude() const { return params_.uav_altitude; }
  double gbs_altitude() const { return params_.gbs_altitude; }
  double height_gap() const { return params_.uav_altitude - params_.gbs_altitude; }
  double vmax() const { return params_.vmax; }
  double gamma0_db() const { return params_.gamma0_db; }
  const ScenarioParams& params() const { return params_; }

 private:
  ScenarioParams params_;
};

struct SnrTarget {
  double rho_bar_db = 0.0;
};

// Largest horizontal UAV-GBS distance at which a given SNR target is met.
class CoverageRadius {
 public:
  // Throws Error(InvalidInput) unless meters is finite and > 0.
  explicit CoverageRadius(double meters);
  double meters() const { return meters_; }

 private:
  double meters_;
};

double db_to_linear(double db);
double linear_to_db(double linear);

// d = sqrt(gamma0/rho - (H - H_G)^2). Throws Error(UnattainableSnr) when the
// target is not met even directly above a GBS.
CoverageRadius compute_coverage_radius(const Scenario& s, SnrTarget target);

// SNR (dB) at horizontal distance `horizontal_m` from a GBS.
double snr_at_distance(const Scenario& s, double horizontal_m);

// snr_at_distance, lowered by a rounding-level amount if needed so that
// compute_coverage_radius of the result is at least `horizontal_m`.
double snr_target_covering(const Scenario& s, double horizontal_m);

// SNR (dB) at u from the closest GBS.
double snr_at(const Scenario& s, Vec2 u);

struct NearestGbs {
  std::size_t index;
  double distance;
};

// Closest GBS to u; ties go to the lowest index.
NearestGbs nearest_gbs(const Scenario& s, Vec2 u);

}  // namespace conntraj
