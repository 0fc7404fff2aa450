#include "conntraj/handover.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "conntraj/error.hpp"
#include "handover_polish.hpp"

namespace conntraj {

HandoverRegion::HandoverRegion(Vec2 center_a, Vec2 center_b, double radius)
    : a_(center_a), b_(center_b), r_(radius) {
  if (!(radius > 0.0) || distance(center_a, center_b) > 2.0 * radius)
    throw Error(ErrorCode::InvalidInput, "handover region: disks do not intersect");
}

bool HandoverRegion::contains(Vec2 p, double tolerance) const {
  return excess(p) <= tolerance;
}

double HandoverRegion::excess(Vec2 p) const {
  return std::max(distance(p, a_), distance(p, b_)) - r_;
}

Vec2 HandoverRegion::project(Vec2 p) const {
  const Disk da{a_, r_};
  const Disk db{b_, r_};
  if (da.contains(p) && db.contains(p)) return p;
  const Vec2 pa = project_onto_disk(p, da);
  if (db.contains(pa)) return pa;
  const Vec2 pb = project_onto_disk(p, db);
  if (da.contains(pb)) return pb;
  // Both constraints active: the answer is a lens corner.
  const auto corners = equal_circle_intersections(a_, b_, r_);
  if (!corners) return 0.5 * (a_ + b_);
  return squared_norm(corners->first - p) <= squared_norm(corners->second - p) ? corners->first
                                                                               : corners->second;
}

double HandoverRegion::min_dot(Vec2 c) const {
  const double len = norm(c);
  if (len == 0.0) return 0.0;
  const Vec2 toward = (r_ / len) * c;
  // A point accepted slightly outside the other disk only lowers the bound.
  const double slack = r_ * (1.0 + 1e-12);
  const Vec2 pa = a_ - toward;
  if (distance(pa, b_) <= slack) return dot(c, pa);
  const Vec2 pb = b_ - toward;
  if (distance(pb, a_) <= slack) return dot(c, pb);
  const auto corners = equal_circle_intersections(a_, b_, r_);
  if (!corners) return std::min(dot(c, pa), dot(c, pb));
  return std::min(dot(c, corners->first), dot(c, corners->second));
}

void SolverConfig::validate() const {
  auto bad = [](const std::string& what) {
    throw Error(ErrorCode::InvalidInput, "solver config: " + what);
  };
  if (smoothing_schedule.empty()) bad("empty smoothing schedule");
  for (std::size_t i = 0; i < smoothing_schedule.size(); ++i) {
    if (!(smoothing_schedule[i] > 0.0)) bad("smoothing values must be positive");
    if (i && !(smoothing_schedule[i] < smoothing_schedule[i - 1]))
      bad("smoothing schedule must be strictly decreasing");
  }
  if (smoothing_schedule.back() > 1e-6) bad("final smoothing must be <= 1e-6 of d");
  if (max_iterations == 0) bad("max_iterations must be positive");
  if (!(armijo > 0.0 && armijo < 1.0)) bad("armijo must be in (0, 1)");
  if (!(backtrack > 0.0 && backtrack < 1.0)) bad("backtrack must be in (0, 1)");
  if (!(min_step > 0.0 && min_step <= max_step)) bad("step bounds must satisfy 0 < min <= max");
  if (!(constraint_tolerance > 0.0)) bad("constraint tolerance must be positive");
  if (!(objective_tolerance >= 0.0)) bad("objective tolerance must be >= 0");
  if (stall_window == 0) bad("stall window must be positive");
  if (newton_polish && polish_iterations == 0) bad("polish_iterations must be positive");
}

double polyline_length(std::span<const Vec2> points) {
  double total = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) total += distance(points[i], points[i - 1]);
  return total;
}

std::vector<HandoverRegion> handover_regions(const Scenario& s, const AssociationSequence& seq,
                                             CoverageRadius d_bar) {
  if (seq.empty()) throw Error(ErrorCode::InvalidInput, "empty association sequence");
  if (seq.has_consecutive_repeat())
    throw Error(ErrorCode::DegenerateSequence,
                "consecutive repeated GBS in sequence " + seq.to_string() + "; prune first");
  for (const std::size_t i : seq.indices())
    if (i >= s.gbs_count())
      throw Error(ErrorCode::InvalidInput, "GBS index out of range in " + seq.to_string());
  std::vector<HandoverRegion> regions;
  regions.reserve(seq.size() - 1);
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    if (distance(s.gbs(seq[i]), s.gbs(seq[i + 1])) > 2.0 * d_bar.meters())
      throw Error(ErrorCode::InvalidInput,
                  "GBS " + std::to_string(seq[i] + 1) + " and " + std::to_string(seq[i + 1] + 1) +
                      " are farther apart than 2d");
    regions.emplace_back(s.gbs(seq[i]), s.gbs(seq[i + 1]), d_bar.meters());
  }
  return regions;
}

namespace {

void require_endpoint_coverage(const Scenario& s, const AssociationSequence& seq, double d) {
  if (distance(s.u0(), s.gbs(seq.front())) > d || distance(s.uf(), s.gbs(seq.back())) > d)
    throw Error(ErrorCode::InvalidInput,
                "sequence " + seq.to_string() + " does not cover both endpoints");
}

// Straight u0 -> uF flight is achievable with this sequence iff the parameter
// intervals of the line inside consecutive disks can be chained monotonically.
// Greedy earliest handover is optimal for that test.
std::optional<std::vector<Vec2>> straight_chain(const Scenario& s, const AssociationSequence& seq,
                                                double d) {
  constexpr double slack = 1e-12;
  const Vec2 dir = s.uf() - s.u0();
  std::vector<Interval> spans;
  spans.reserve(seq.size());
  for (const std::size_t g : seq.indices()) {
    const auto span = line_disk_interval(s.u0(), dir, Disk{s.gbs(g), d});
    if (!span) return std::nullopt;
    spans.push_back(*span);
  }
  std::vector<Vec2> points{s.u0()};
  double cur = 0.0;
  for (std::size_t i = 0; i < spans.size(); ++i) {
    if (cur < spans[i].lo - slack || cur > spans[i].hi + slack) return std::nullopt;
    if (i + 1 == spans.size()) {
      if (spans[i].hi < 1.0 - slack) return std::nullopt;
      break;
    }
    const double next = std::max(cur, spans[i + 1].lo);
    if (next > std::min({spans[i].hi, spans[i + 1].hi, 1.0}) + slack) return std::nullopt;
    cur = std::min(next, 1.0);
    points.push_back(lerp(s.u0(), s.uf(), cur));
  }
  points.push_back(s.uf());
  return points;
}

double smoothed_length(std::span<const Vec2> x, double eps2) {
  double total = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) total += std::sqrt(squared_norm(x[i] - x[i - 1]) + eps2);
  return total;
}

// Gradient with respect to the interior points x[1..n-2]; grad[0] and
// grad[n-1] stay zero.
void smoothed_gradient(std::span<const Vec2> x, double eps2, std::span<Vec2> grad) {
  const std::size_t n = x.size();
  Vec2 prev_unit{};
  for (std::size_t i = 1; i < n; ++i) {
    const Vec2 delta = x[i] - x[i - 1];
    const Vec2 unit = delta / std::sqrt(squared_norm(delta) + eps2);
    if (i >= 2) grad[i - 1] = prev_unit - unit;
    prev_unit = unit;
  }
  grad[0] = {};
  grad[n - 1] = {};
}

}  // namespace

double length_lower_bound(const Scenario& s, const AssociationSequence& seq, CoverageRadius d_bar) {
  double bound = distance(s.u0(), s.uf());
  for (const HandoverRegion& lens : handover_regions(s, seq, d_bar))
    bound = std::max(bound, distance(s.u0(), lens.project(s.u0())) +
                                distance(lens.project(s.uf()), s.uf()));
  return bound;
}

double length_dual_bound(std::span<const HandoverRegion> regions, std::span<const Vec2> points) {
  if (points.size() != regions.size() + 2)
    throw Error(ErrorCode::InvalidInput, "dual bound: need one point per region plus endpoints");
  const std::size_t segments = points.size() - 1;
  const double tiny = regions.empty() ? 0.0 : 1e-12 * regions.front().radius();
  std::vector<Vec2> lambda(segments);
  std::vector<bool> known(segments, false);
  for (std::size_t i = 0; i < segments; ++i) {
    const Vec2 seg = points[i + 1] - points[i];
    const double len = norm(seg);
    if (len > tiny) {
      lambda[i] = (1.0 / len) * seg;
      known[i] = true;
    }
  }
  // Degenerate segments: interpolate between the neighbouring directions,
  // which keeps every multiplier inside the unit disk.
  for (std::size_t i = 0; i < segments;) {
    if (known[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < segments && !known[j]) ++j;
    const bool has_prev = i > 0;
    const bool has_next = j < segments;
    const Vec2 prev = has_prev ? lambda[i - 1] : (has_next ? lambda[j] : Vec2{});
    const Vec2 next = has_next ? lambda[j] : prev;
    for (std::size_t k = i; k < j; ++k) {
      const double t = static_cast<double>(k - i + 1) / static_cast<double>(j - i + 1);
      lambda[k] = prev + t * (next - prev);
    }
    i = j;
  }
  double bound = dot(lambda.back(), points.back()) - dot(lambda.front(), points.front());
  for (std::size_t i = 0; i < regions.size(); ++i) bound += regions[i].min_dot(lambda[i] - lambda[i + 1]);
  return bound;
}

HandoverSolution feasible_handover_points(const Scenario& s, const AssociationSequence& seq,
                                          CoverageRadius d_bar) {
  handover_regions(s, seq, d_bar);  // validates the sequence
  require_endpoint_coverage(s, seq, d_bar.meters());
  HandoverSolution out;
  out.points.push_back(s.u0());
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    const Vec2 from = s.gbs(seq[i]);
    const Vec2 to = s.gbs(seq[i + 1]);
    const double gap = distance(from, to);
    // Offset clamped to the gap so the point never passes the next GBS.
    const double step = std::min(d_bar.meters(), gap);
    out.points.push_back(gap > 0.0 ? from + (step / gap) * (to - from) : from);
  }
  out.points.push_back(s.uf());
  out.objective = polyline_length(out.points);
  return out;
}

HandoverSolution optimize_handovers(const Scenario& s, const AssociationSequence& seq,
                                    CoverageRadius d_bar, const SolverConfig& cfg) {
  cfg.validate();
  const double d = d_bar.meters();
  const auto regions = handover_regions(s, seq, d_bar);
  HandoverSolution start = feasible_handover_points(s, seq, d_bar);
  if (regions.empty()) return start;

  if (cfg.straight_line_shortcut) {
    if (auto line = straight_chain(s, seq, d)) {
      HandoverSolution out{std::move(*line), 0.0, true, 0};
      out.objective = polyline_length(out.points);
      if (out.objective <= start.objective) return out;
    }
  }

  const std::size_t n = start.points.size();
  std::vector<Vec2> x = start.points;
  std::vector<Vec2> grad(n), trial(n), next_grad(n), dirs(n);
  HandoverSolution best = start;
  best.converged = false;

  auto project_step = [&](double step) {
    for (std::size_t i = 1; i + 1 < n; ++i) trial[i] = regions[i - 1].project(x[i] - step * grad[i]);
    trial[0] = x[0];
    trial[n - 1] = x[n - 1];
  };

  double step = 0.1 * d;
  std::size_t iterations = 0;
  bool converged = false;
  for (const double frac : cfg.smoothing_schedule) {
    const double eps2 = (frac * d) * (frac * d);
    double f = smoothed_length(x, eps2);
    smoothed_gradient(x, eps2, grad);
    std::vector<double> history{f};
    converged = false;

    for (std::size_t it = 0; it < cfg.max_iterations; ++it) {
      ++iterations;
      project_step(step);
      double slope = 0.0;
      double move = 0.0;
      for (std::size_t i = 1; i + 1 < n; ++i) {
        const Vec2 dir = trial[i] - x[i];
        slope += dot(grad[i], dir);
        move = std::max(move, norm(dir));
      }
      if (slope >= 0.0 || move <= 1e-15 * d) {
        converged = true;
        break;
      }

      // Backtrack along the segment x -> P(x - step * grad); stays feasible.
      for (std::size_t i = 1; i + 1 < n; ++i) dirs[i] = trial[i] - x[i];
      double lambda = 1.0;
      double f_new = 0.0;
      bool accepted = false;
      while (lambda * move > 1e-15 * d) {
        for (std::size_t i = 1; i + 1 < n; ++i) trial[i] = x[i] + lambda * dirs[i];
        f_new = smoothed_length(trial, eps2);
        if (f_new <= f + cfg.armijo * lambda * slope) {
          accepted = true;
          break;
        }
        lambda *= cfg.backtrack;
      }
      if (!accepted) {
        converged = true;
        break;
      }

      smoothed_gradient(trial, eps2, next_grad);
      double ss = 0.0;
      double sy = 0.0;
      for (std::size_t i = 1; i + 1 < n; ++i) {
        const Vec2 sv = trial[i] - x[i];
        ss += squared_norm(sv);
        sy += dot(sv, next_grad[i] - grad[i]);
      }
      step = sy > 0.0 ? ss / sy : cfg.max_step * d;
      step = std::clamp(step, cfg.min_step * d, cfg.max_step * d);

      std::swap(x, trial);
      std::swap(grad, next_grad);
      f = f_new;

      const double length = polyline_length(x);
      if (length < best.objective) {
        best.points = x;
        best.objective = length;
      }

      history.push_back(f);
      if (history.size() > cfg.stall_window) {
        const double old = history[history.size() - 1 - cfg.stall_window];
        if (old - f <= cfg.objective_tolerance * f) {
          converged = true;
          break;
        }
      }
    }
  }
  if (cfg.newton_polish) {
    auto polished = detail::polish_handovers(regions, best.points, d, cfg.polish_iterations);
    iterations += polished.iterations;
    const double length = polyline_length(polished.points);
    if (length <= best.objective) {
      best.points = std::move(polished.points);
      best.objective = length;
      converged = converged || polished.stationary;
    }
  }
  best.converged = converged;
  best.iterations = iterations;
  return best;
}

}  // namespace conntraj
