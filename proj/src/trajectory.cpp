#include "conntraj/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "conntraj/error.hpp"
#include "conntraj/text.hpp"

namespace conntraj {

double Trajectory::length() const { return polyline_length(waypoints_); }

Trajectory Trajectory::hold(Vec2 at, double vmax) {
  Trajectory t;
  t.waypoints_ = {at};
  t.total_time_ = std::numeric_limits<double>::infinity();
  t.vmax_ = vmax;
  return t;
}

Trajectory build_trajectory(const HandoverSolution& sol, const AssociationSequence& seq,
                            double vmax) {
  if (!(vmax > 0.0)) throw Error(ErrorCode::InvalidInput, "trajectory: vmax must be > 0");
  if (sol.points.size() != seq.size() + 1)
    throw Error(ErrorCode::InvalidInput, "trajectory: expected " + std::to_string(seq.size() + 1) +
                                             " points, got " + std::to_string(sol.points.size()));
  Trajectory t;
  t.waypoints_ = sol.points;
  t.associations_.assign(seq.indices().begin(), seq.indices().end());
  t.vmax_ = vmax;
  t.durations_.reserve(seq.size());
  for (std::size_t i = 1; i < sol.points.size(); ++i) {
    t.durations_.push_back(distance(sol.points[i], sol.points[i - 1]) / vmax);
    t.total_time_ += t.durations_.back();
  }
  return t;
}

std::size_t active_segment(const Trajectory& traj, double t) {
  const auto durations = traj.durations();
  double clock = 0.0;
  std::size_t last_moving = 0;
  for (std::size_t i = 0; i < durations.size(); ++i) {
    if (durations[i] <= 0.0) continue;
    last_moving = i;
    if (t <= clock + durations[i]) return i;
    clock += durations[i];
  }
  return last_moving;
}

Vec2 sample_position(const Trajectory& traj, double t) {
  const double total = traj.total_time();
  if (!(t >= 0.0) || t > total)
    throw Error(ErrorCode::OutOfRange, "time " + std::to_string(t) + " s outside [0, " +
                                           std::to_string(total) + "]");
  const auto wp = traj.waypoints();
  const auto durations = traj.durations();
  double clock = 0.0;
  for (std::size_t i = 0; i < durations.size(); ++i) {
    const double end = clock + durations[i];
    if (durations[i] > 0.0 && t <= end) {
      if (t == clock) return wp[i];
      if (t == end) return wp[i + 1];
      return lerp(wp[i], wp[i + 1], (t - clock) / durations[i]);
    }
    clock = end;
  }
  return wp.back();
}

ConnectivityReport verify_connectivity(const Scenario& s, const Trajectory& traj,
                                       CoverageRadius d_bar, double tolerance_fraction) {
  const double d = d_bar.meters();
  const double limit = d + tolerance_fraction * d;
  const auto wp = traj.waypoints();
  const auto assoc = traj.associations();
  const auto durations = traj.durations();

  ConnectivityReport report;
  report.sample_spacing = 1.0;
  double clock = 0.0;
  for (std::size_t i = 0; i < traj.segment_count(); ++i) {
    const Vec2 g = s.gbs(assoc[i]);
    const double worst = std::max(distance(wp[i], g), distance(wp[i + 1], g));
    if (worst > limit)
      report.violations.push_back(
          {Violation::Kind::SegmentEndpoint, i, clock, clock + durations[i], worst - d});
    clock += durations[i];
    ++report.segments_checked;
  }

  // Audit of the closest-GBS constraint; samples at most 1 m apart.
  std::optional<Violation> open;
  auto audit = [&](Vec2 p, std::size_t segment, double t) {
    ++report.samples_checked;
    const double dist = nearest_gbs(s, p).distance;
    if (dist > limit) {
      if (!open) open = Violation{Violation::Kind::CoverageGap, segment, t, t, dist - d};
      open->t_end = t;
      open->margin = std::max(open->margin, dist - d);
    } else if (open) {
      report.violations.push_back(*open);
      open.reset();
    }
  };
  clock = 0.0;
  for (std::size_t i = 0; i < traj.segment_count(); ++i) {
    const double len = distance(wp[i], wp[i + 1]);
    const auto steps = static_cast<std::size_t>(std::ceil(len / report.sample_spacing));
    for (std::size_t k = 0; k < steps; ++k) {
      const double frac = static_cast<double>(k) / static_cast<double>(steps);
      audit(lerp(wp[i], wp[i + 1], frac), i, clock + frac * durations[i]);
    }
    clock += durations[i];
  }
  audit(wp.back(), traj.segment_count() ? traj.segment_count() - 1 : 0,
        std::isfinite(traj.total_time()) ? traj.total_time() : 0.0);
  if (open) report.violations.push_back(*open);
  return report;
}

Trajectory straight_flight(const Scenario& s) {
  const std::size_t gbs = nearest_gbs(s, 0.5 * (s.u0() + s.uf())).index;
  HandoverSolution line{{s.u0(), s.uf()}, distance(s.u0(), s.uf()), true, 0};
  return build_trajectory(line, AssociationSequence({gbs}), s.vmax());
}

StraightThreshold straight_flight_threshold(const Scenario& s) {
  const Vec2 a = s.u0();
  const Vec2 b = s.uf();
  const double len = distance(a, b);
  auto envelope = [&](double frac) { return nearest_gbs(s, lerp(a, b, frac)).distance; };

  StraightThreshold out{0.0, envelope(0.0), 0.0};
  if (len > 0.0) {
    const auto steps = static_cast<std::size_t>(std::ceil(len / 0.1));
    std::vector<double> env(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k)
      env[k] = envelope(static_cast<double>(k) / static_cast<double>(steps));
    auto consider = [&out](double value, double frac) {
      if (value > out.worst_distance) out = {0.0, value, frac};
    };
    consider(env[steps], 1.0);
    const double h = 1.0 / static_cast<double>(steps);
    for (std::size_t k = 1; k < steps; ++k) {
      if (env[k] < env[k - 1] || env[k] < env[k + 1]) continue;
      // Golden-section maximization on the bracket around the sampled peak.
      constexpr double ratio = 0.6180339887498949;
      double lo = static_cast<double>(k - 1) * h;
      double hi = static_cast<double>(k + 1) * h;
      double x1 = hi - ratio * (hi - lo);
      double x2 = lo + ratio * (hi - lo);
      double f1 = envelope(x1);
      double f2 = envelope(x2);
      for (int it = 0; it < 60 && (hi - lo) * len > 1e-6; ++it) {
        if (f1 < f2) {
          lo = x1;
          x1 = x2;
          f1 = f2;
          x2 = lo + ratio * (hi - lo);
          f2 = envelope(x2);
        } else {
          hi = x2;
          x2 = x1;
          f2 = f1;
          x1 = hi - ratio * (hi - lo);
          f1 = envelope(x1);
        }
      }
      consider(env[k], static_cast<double>(k) * h);
      consider(f1, x1);
      consider(f2, x2);
    }
  }
  out.rho_s_db = snr_target_covering(s, out.worst_distance);
  return out;
}

void write_trajectory_csv(std::ostream& out, const Scenario& s, const Trajectory& traj, double dt,
                          SnrReference ref) {
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidInput, "trajectory csv: dt must be > 0");
  out << "t_s,x_m,y_m,associated_gbs,snr_db\n";
  const double total = std::isfinite(traj.total_time()) ? traj.total_time() : 0.0;
  auto row = [&](double t) {
    const Vec2 p = sample_position(traj, t);
    std::size_t gbs = 0;
    double dist = 0.0;
    if (ref == SnrReference::Nearest || traj.segment_count() == 0) {
      const auto near = nearest_gbs(s, p);
      gbs = near.index;
      dist = near.distance;
    } else {
      gbs = traj.associations()[active_segment(traj, t)];
      dist = distance(p, s.gbs(gbs));
    }
    out << format_fixed(t, 3) << ',' << format_fixed(p.x, 3) << ',' << format_fixed(p.y, 3) << ','
        << gbs + 1 << ',' << format_fixed(snr_at_distance(s, dist), 4) << '\n';
  };
  for (std::size_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * dt;
    if (t >= total) break;
    row(t);
  }
  row(total);
}

void write_waypoint_csv(std::ostream& out, const Trajectory& traj) {
  out << "i,x,y,gbs,T_i\n";
  const auto wp = traj.waypoints();
  for (std::size_t i = 0; i < wp.size(); ++i) {
    out << i << ',' << format_fixed(wp[i].x, 6) << ',' << format_fixed(wp[i].y, 6) << ',';
    if (i > 0) out << traj.associations()[i - 1] + 1 << ',' << format_fixed(traj.durations()[i - 1], 9);
    else out << ',';
    out << '\n';
  }
}

}  // namespace conntraj
