#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "conntraj/association.hpp"
#include "conntraj/handover.hpp"
#include "conntraj/scenario.hpp"

namespace conntraj {

// Piecewise-linear flight at constant speed vmax. Segment i runs from
// waypoint i to waypoint i + 1 while associated with GBS associations[i].
class Trajectory {
 public:
  Trajectory() = default;

  std::span<const Vec2> waypoints() const { return waypoints_; }
  std::span<const std::size_t> associations() const { return associations_; }
  std::span<const double> durations() const { return durations_; }
  std::size_t segment_count() const { return durations_.size(); }
  double total_time() const { return total_time_; }
  double vmax() const { return vmax_; }
  double length() const;

  // A trajectory that never leaves `at` (used for infeasible plans).
  static Trajectory hold(Vec2 at, double vmax);

 private:
  friend Trajectory build_trajectory(const HandoverSolution&, const AssociationSequence&, double);

  std::vector<Vec2> waypoints_;
  std::vector<std::size_t> associations_;
  std::vector<double> durations_;
  double total_time_ = 0.0;
  double vmax_ = 0.0;
};

// T_i = |u^i - u^{i-1}| / vmax and T = sum T_i. Zero-length segments keep
// their association with T_i = 0. Throws Error(InvalidInput) when the point
// count does not match the sequence or vmax <= 0.
Trajectory build_trajectory(const HandoverSolution& sol, const AssociationSequence& seq,
                            double vmax);

// Position at time t in [0, T]; throws Error(OutOfRange) otherwise.
Vec2 sample_position(const Trajectory& traj, double t);

// Index of the segment active at t (zero-length segments are never active).
std::size_t active_segment(const Trajectory& traj, double t);

struct Violation {
  enum class Kind { SegmentEndpoint, CoverageGap };
  Kind kind;
  std::size_t segment;  // segment index of the first offending sample
  double t_begin;       // seconds
  double t_end;
  double margin;        // worst distance beyond d (m), > 0
};

struct ConnectivityReport {
  std::vector<Violation> violations;
  std::size_t segments_checked = 0;
  std::size_t samples_checked = 0;
  double sample_spacing = 0.0;  // meters between audit samples (<= 1)

  bool ok() const { return violations.empty(); }
};

// Authoritative check: both ends of every segment lie within
// d * (1 + tolerance_fraction) of the segment's GBS, which covers the whole
// segment since disks are convex. Audit: sampled closest-GBS distance along
// the path at <= 1 m spacing, violations merged into time intervals.
ConnectivityReport verify_connectivity(const Scenario& s, const Trajectory& traj,
                                       CoverageRadius d_bar, double tolerance_fraction = 1e-6);

// Direct u0 -> uF at vmax; association is the GBS closest to the midpoint.
Trajectory straight_flight(const Scenario& s);

struct StraightThreshold {
  double rho_s_db;
  double worst_distance;  // max over the segment of the closest-GBS distance
  double worst_fraction;  // where along u0 -> uF it occurs, in [0, 1]
};

// Largest SNR target the straight path meets throughout. The closest-GBS
// distance is scanned at 0.1 m spacing and each sampled local maximum is
// refined by golden-section search (accuracy about 0.01 m).
StraightThreshold straight_flight_threshold(const Scenario& s);

enum class SnrReference { Associated, Nearest };

// CSV `t_s,x_m,y_m,associated_gbs,snr_db` every dt seconds plus the final
// instant. With SnrReference::Nearest the GBS column and SNR refer to the
// closest GBS instead of the segment association.
void write_trajectory_csv(std::ostream& out, const Scenario& s, const Trajectory& traj, double dt,
                          SnrReference ref = SnrReference::Associated);

// CSV `i,x,y,gbs,T_i`; row 0 is u0 with empty gbs and T_i.
void write_waypoint_csv(std::ostream& out, const Trajectory& traj);

}  // namespace conntraj
