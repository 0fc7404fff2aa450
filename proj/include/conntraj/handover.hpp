#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "conntraj/association.hpp"
#include "conntraj/geometry.hpp"
#include "conntraj/scenario.hpp"

namespace conntraj {

// Lens where the UAV may hand over from GBS a to GBS b: both disks of radius d.
class HandoverRegion {
 public:
  // Throws Error(InvalidInput) when the disks do not intersect.
  HandoverRegion(Vec2 center_a, Vec2 center_b, double radius);

  Vec2 center_a() const { return a_; }
  Vec2 center_b() const { return b_; }
  double radius() const { return r_; }

  bool contains(Vec2 p, double tolerance = 0.0) const;
  // Largest distance to either center beyond the radius (<= 0 inside).
  double excess(Vec2 p) const;
  // Euclidean projection onto the lens.
  Vec2 project(Vec2 p) const;
  // min over the lens of dot(c, u).
  double min_dot(Vec2 c) const;

 private:
  Vec2 a_;
  Vec2 b_;
  double r_;
};

// Tunables for optimize_handovers. Smoothing values are fractions of d.
struct SolverConfig {
  std::vector<double> smoothing_schedule{1e-2, 1e-4, 1e-6};
  std::size_t max_iterations = 5000;   // per smoothing stage
  double armijo = 1e-4;                // sufficient-decrease constant
  double backtrack = 0.5;              // step shrink factor
  double min_step = 1e-12;             // bounds on the spectral step, fractions of d
  double max_step = 1e3;
  double constraint_tolerance = 1e-6;  // fraction of d
  double objective_tolerance = 1e-10;  // relative decrease that ends a stage
  std::size_t stall_window = 10;       // iterations the decrease is measured over
  bool straight_line_shortcut = true;
  // Newton refinement on the active constraints after the gradient stages.
  bool newton_polish = true;
  std::size_t polish_iterations = 200;

  // Throws Error(InvalidInput) on a non-decreasing or non-positive schedule,
  // a final smoothing above 1e-6, or nonsensical step parameters.
  void validate() const;
};

struct HandoverSolution {
  std::vector<Vec2> points;  // u^0 = u0, u^1 .. u^{N-1} handovers, u^N = uF
  double objective = 0.0;    // polyline length (m)
  bool converged = true;
  std::size_t iterations = 0;
};

double polyline_length(std::span<const Vec2> points);

// One region per handover of seq. Throws Error(DegenerateSequence) when two
// consecutive indices are equal.
std::vector<HandoverRegion> handover_regions(const Scenario& s, const AssociationSequence& seq,
                                             CoverageRadius d_bar);

// Cheap lower bound on the optimized length for `seq`: the path crosses every
// lens, so it is at least |u0 - L| + |L - uF| for each one.
double length_lower_bound(const Scenario& s, const AssociationSequence& seq, CoverageRadius d_bar);

// Lagrangian lower bound on the optimal length over `regions`, with one unit
// multiplier per segment of `points` (u0 .. uF) taken from that segment's
// direction. Any points give a valid bound; it is tight at an optimum whose
// segments are all non-degenerate.
double length_dual_bound(std::span<const HandoverRegion> regions, std::span<const Vec2> points);

// Closed-form feasible handovers: u^i = g_Ii + min(d, |g_Ii+1 - g_Ii|) times the
// unit vector towards g_Ii+1.
HandoverSolution feasible_handover_points(const Scenario& s, const AssociationSequence& seq,
                                          CoverageRadius d_bar);

// Shortest u0 -> uF polyline whose i-th vertex lies in the i-th handover
// region. Projected spectral gradient on the smoothed length
// sum sqrt(|u^i - u^{i-1}|^2 + eps^2) with eps decreasing through the
// schedule, started from feasible_handover_points, then an optional Newton
// polish on the constraints active at the result. Never returns a longer
// path than that starting point. If the iteration budget runs out the best
// iterate is returned with converged = false.
HandoverSolution optimize_handovers(const Scenario& s, const AssociationSequence& seq,
                                    CoverageRadius d_bar, const SolverConfig& cfg = {});

}  // namespace conntraj
