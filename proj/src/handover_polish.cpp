#include "handover_polish.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

namespace conntraj::detail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Face { Fixed, Free, Arc, Corner };

// A run of consecutive handover points that share one position. The
// position must lie in every disk of every member.
struct Group {
  std::size_t first = 0;  // indices into the full point list
  std::size_t last = 0;
  std::vector<Vec2> disks;  // distinct centers
  Face face = Face::Free;
  Vec2 pos{};
  // Arc: circle around disks[circle], angle theta0 + psi, psi in [lo, hi].
  std::size_t circle = 0;
  double theta0 = 0.0;
  double psi = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  std::size_t lo_disk = 0;
  std::size_t hi_disk = 0;
  std::size_t other = 0;  // Corner: second circle
};

struct Sym2 {
  double xx = 0.0, xy = 0.0, yy = 0.0;
};

Vec2 apply(const Sym2& m, Vec2 v) { return {m.xx * v.x + m.xy * v.y, m.xy * v.x + m.yy * v.y}; }

Vec2 polar(double angle) { return {std::cos(angle), std::sin(angle)}; }

void add_disk(std::vector<Vec2>& disks, Vec2 c) {
  if (std::find(disks.begin(), disks.end(), c) == disks.end()) disks.push_back(c);
}

bool inside_all(std::span<const Vec2> disks, Vec2 p, double r, double tol) {
  for (const Vec2 c : disks)
    if (distance(p, c) > r + tol) return false;
  return true;
}

// Euclidean projection onto an intersection of equal disks; nullopt when
// the intersection is empty.
std::optional<Vec2> project_onto_disks(std::span<const Vec2> disks, Vec2 q, double r) {
  const double tol = 1e-12 * r;
  if (inside_all(disks, q, r, 0.0)) return q;
  std::optional<Vec2> best;
  double best_dist = kInf;
  auto consider = [&](Vec2 p) {
    if (!inside_all(disks, p, r, tol)) return;
    const double dd = squared_norm(p - q);
    if (dd < best_dist) {
      best_dist = dd;
      best = p;
    }
  };
  for (const Vec2 c : disks) consider(project_onto_disk(q, Disk{c, r}));
  for (std::size_t i = 0; i < disks.size(); ++i)
    for (std::size_t j = i + 1; j < disks.size(); ++j)
      if (const auto corners = equal_circle_intersections(disks[i], disks[j], r)) {
        consider(corners->first);
        consider(corners->second);
      }
  return best;
}

// Cholesky solve of (a + mu I) p = rhs, a dense row-major n x n matrix.
bool damped_solve(const std::vector<double>& a, std::size_t n, double mu, std::vector<double>& p,
                  const std::vector<double>& rhs) {
  const auto n_ = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd h = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(a.data(), n_, n_);
  h.diagonal().array() += mu;
  Eigen::LLT<Eigen::MatrixXd> llt(h);
  if (llt.info() != Eigen::Success) return false;
  const Eigen::VectorXd sol = llt.solve(Eigen::Map<const Eigen::VectorXd>(rhs.data(), n_));
  if (!sol.allFinite()) return false;
  p.assign(sol.data(), sol.data() + n);
  return true;
}

class Polisher {
 public:
  Polisher(std::span<const HandoverRegion> regions, std::span<const Vec2> x, double d)
      : regions_(regions), x_(x.begin(), x.end()), r_(regions.front().radius()), d_(d),
        eps2_((1e-12 * d) * (1e-12 * d)), merge_gap_(1e-5 * d), collision_gap_(1e-9 * d), mu_(1e-6 / d) {
    for (std::size_t i = 1; i + 1 < x_.size(); ++i) {
      Group g;
      g.first = g.last = i;
      add_disk(g.disks, regions_[i - 1].center_a());
      add_disk(g.disks, regions_[i - 1].center_b());
      g.pos = x_[i];
      groups_.push_back(std::move(g));
    }
    regroup();
  }

  PolishResult run(std::size_t max_iterations) {
    PolishResult out;
    while (out.iterations < max_iterations) {
      const Phase phase = newton_phase(max_iterations, out.iterations);
      if (phase == Phase::Collided) {
        regroup();
        continue;
      }
      if (phase != Phase::Settled) break;
      if (!release_worst()) {
        out.stationary = true;
        break;
      }
    }
    for (const Group& g : groups_)
      for (std::size_t i = g.first; i <= g.last; ++i) x_[i] = regions_[i - 1].project(g.pos);
    out.points = std::move(x_);
    return out;
  }

 private:
  enum class Phase { Settled, Collided, Stuck, Budget };

  // Node positions along the chain: u0, groups, uF.
  std::vector<Vec2> nodes() const {
    std::vector<Vec2> out;
    out.reserve(groups_.size() + 2);
    out.push_back(x_.front());
    for (const Group& g : groups_) out.push_back(g.pos);
    out.push_back(x_.back());
    return out;
  }

  double objective(std::span<const Vec2> y) const {
    double total = 0.0;
    for (std::size_t i = 1; i < y.size(); ++i) total += std::sqrt(squared_norm(y[i] - y[i - 1]) + eps2_);
    return total;
  }

  void classify(Group& g) const {
    if (g.face == Face::Fixed) return;
    const double tol = 1e-9 * r_;
    std::vector<std::size_t> active;
    for (std::size_t k = 0; k < g.disks.size(); ++k)
      if (std::abs(distance(g.pos, g.disks[k]) - r_) <= tol) active.push_back(k);
    if (active.empty()) {
      g.face = Face::Free;
    } else if (active.size() == 1) {
      set_arc(g, active[0]);
    } else {
      // Snap to the nearer end of the arc inside the other disk.
      set_arc(g, active[0]);
      const bool use_lo = g.lo_disk == active[1] && (g.hi_disk != active[1] || -g.lo < g.hi);
      g.psi = use_lo ? g.lo : g.hi;
      g.other = use_lo ? g.lo_disk : g.hi_disk;
      g.pos = arc_point(g, g.psi);
      g.face = Face::Corner;
    }
  }

  void set_arc(Group& g, std::size_t circle) const {
    const Vec2 c = g.disks[circle];
    g.face = Face::Arc;
    g.circle = circle;
    g.theta0 = std::atan2(g.pos.y - c.y, g.pos.x - c.x);
    g.psi = 0.0;
    g.lo = -kInf;
    g.hi = kInf;
    g.lo_disk = g.hi_disk = circle;
    for (std::size_t k = 0; k < g.disks.size(); ++k) {
      const Vec2 o = g.disks[k];
      const double gap = distance(c, o);
      if (k == circle || gap == 0.0) continue;
      const double mid = std::remainder(std::atan2(o.y - c.y, o.x - c.x) - g.theta0,
                                        2.0 * std::numbers::pi);
      const double offset = 0.5 * gap;
      const double half = std::atan2(std::sqrt(std::max(0.0, (r_ - offset) * (r_ + offset))), offset);
      if (mid - half > g.lo) {
        g.lo = mid - half;
        g.lo_disk = k;
      }
      if (mid + half < g.hi) {
        g.hi = mid + half;
        g.hi_disk = k;
      }
    }
    g.lo = std::min(g.lo, 0.0);
    g.hi = std::max(g.hi, 0.0);
    g.pos = arc_point(g, 0.0);
  }

  Vec2 arc_point(const Group& g, double psi) const {
    return g.disks[g.circle] + r_ * polar(g.theta0 + psi);
  }

  // Merges neighbours closer than merge_gap_ when their disks still
  // intersect and the length does not grow. Returns true if anything changed.
  bool regroup() {
    bool changed = false;
    const double before = objective(nodes());
    for (bool again = true; again;) {
      again = false;
      for (int side = 0; side < 2 && !groups_.empty(); ++side) {
        Group& g = side == 0 ? groups_.front() : groups_.back();
        const Vec2 end = side == 0 ? x_.front() : x_.back();
        if (g.face == Face::Fixed || distance(g.pos, end) > merge_gap_) continue;
        if (!inside_all(g.disks, end, r_, 1e-12 * r_)) continue;
        const Vec2 saved = g.pos;
        g.pos = end;
        if (objective(nodes()) <= before + 1e-9 * d_) {
          g.face = Face::Fixed;
          changed = again = true;
        } else {
          g.pos = saved;
        }
      }
      for (std::size_t k = 0; k + 1 < groups_.size(); ++k) {
        const Group& a = groups_[k];
        const Group& b = groups_[k + 1];
        if (distance(a.pos, b.pos) > merge_gap_) continue;
        Group merged = a;
        merged.last = b.last;
        for (const Vec2 c : b.disks) add_disk(merged.disks, c);
        if (a.face == Face::Fixed || b.face == Face::Fixed) {
          const Vec2 at = a.face == Face::Fixed ? a.pos : b.pos;
          if (!inside_all(merged.disks, at, r_, 1e-12 * r_)) continue;
          merged.pos = at;
          merged.face = Face::Fixed;
        } else {
          const auto at = project_onto_disks(merged.disks, 0.5 * (a.pos + b.pos), r_);
          if (!at) continue;
          merged.pos = *at;
          merged.face = Face::Free;
        }
        const Group keep_a = a;
        const Group keep_b = b;
        groups_[k] = merged;
        groups_.erase(groups_.begin() + static_cast<std::ptrdiff_t>(k) + 1);
        if (objective(nodes()) <= before + 1e-9 * d_) {
          changed = again = true;
          break;
        }
        groups_[k] = keep_a;
        groups_.insert(groups_.begin() + static_cast<std::ptrdiff_t>(k) + 1, keep_b);
      }
    }
    for (Group& g : groups_) classify(g);
    return changed;
  }

  std::size_t width(const Group& g) const {
    return g.face == Face::Free ? 2 : g.face == Face::Arc ? 1 : 0;
  }

  // Columns of d pos / d z; arcs are parameterized by arc length.
  std::vector<Vec2> jacobian(const Group& g) const {
    if (g.face == Face::Free) return {{1.0, 0.0}, {0.0, 1.0}};
    if (g.face == Face::Arc) {
      const Vec2 radial = polar(g.theta0 + g.psi);
      return {Vec2{-radial.y, radial.x}};
    }
    return {};
  }

  // Gradient of the length with respect to every node, and the per-segment
  // Hessians.
  void derivatives(std::span<const Vec2> y, std::vector<Vec2>& grad, std::vector<Sym2>& seg) const {
    const std::size_t n = y.size();
    std::vector<Vec2> unit(n);
    seg.assign(n, {});
    for (std::size_t i = 1; i < n; ++i) {
      const Vec2 delta = y[i] - y[i - 1];
      const double len = std::sqrt(squared_norm(delta) + eps2_);
      unit[i] = delta / len;
      seg[i] = {(1.0 - unit[i].x * unit[i].x) / len, -unit[i].x * unit[i].y / len,
                (1.0 - unit[i].y * unit[i].y) / len};
    }
    grad.assign(n, {});
    for (std::size_t i = 1; i + 1 < n; ++i) grad[i] = unit[i] - unit[i + 1];
  }

  std::vector<Vec2> trial(const std::vector<std::size_t>& offset, const std::vector<double>& step,
                          double alpha) const {
    std::vector<Vec2> y = nodes();
    for (std::size_t k = 0; k < groups_.size(); ++k) {
      const Group& g = groups_[k];
      if (g.face == Face::Free) {
        y[k + 1] += alpha * Vec2{step[offset[k]], step[offset[k] + 1]};
      } else if (g.face == Face::Arc) {
        y[k + 1] = arc_point(g, std::clamp(g.psi + alpha * step[offset[k]] / r_, g.lo, g.hi));
      }
    }
    return y;
  }

  Phase newton_phase(std::size_t max_iterations, std::size_t& iterations) {
    // Groups whose Newton step points out of the region right after a
    // constraint was dropped take a few scaled gradient steps instead.
    std::vector<int> decoupled(groups_.size(), 0);
    mu_ = 1e-6 / d_;
    while (iterations < max_iterations) {
      std::vector<std::size_t> offset(groups_.size());
      std::size_t m = 0;
      for (std::size_t k = 0; k < groups_.size(); ++k) {
        offset[k] = m;
        m += width(groups_[k]);
      }
      if (m == 0) return Phase::Settled;
      ++iterations;

      const std::vector<Vec2> y = nodes();
      std::vector<Vec2> g;
      std::vector<Sym2> seg;
      derivatives(y, g, seg);
      std::vector<double> grad(m, 0.0), hess(m * m, 0.0);
      std::vector<std::vector<Vec2>> jac(groups_.size());
      for (std::size_t k = 0; k < groups_.size(); ++k) jac[k] = jacobian(groups_[k]);
      double gmax = 0.0;
      for (std::size_t k = 0; k < groups_.size(); ++k) {
        const std::size_t i = k + 1;
        for (std::size_t c = 0; c < jac[k].size(); ++c) {
          grad[offset[k] + c] = dot(g[i], jac[k][c]);
          gmax = std::max(gmax, std::abs(grad[offset[k] + c]));
        }
        if (decoupled[k]) continue;
        if (groups_[k].face == Face::Arc)
          hess[offset[k] * m + offset[k]] +=
              dot(g[i], groups_[k].disks[groups_[k].circle] - y[i]) / (r_ * r_);
        const Sym2 own{seg[i].xx + seg[i + 1].xx, seg[i].xy + seg[i + 1].xy,
                       seg[i].yy + seg[i + 1].yy};
        for (std::size_t c = 0; c < jac[k].size(); ++c)
          for (std::size_t e = 0; e < jac[k].size(); ++e)
            hess[(offset[k] + c) * m + offset[k] + e] += dot(jac[k][c], apply(own, jac[k][e]));
        if (k + 1 < groups_.size() && !decoupled[k + 1]) {
          const Sym2& link = seg[i + 1];
          for (std::size_t c = 0; c < jac[k].size(); ++c)
            for (std::size_t e = 0; e < jac[k + 1].size(); ++e) {
              const double v = -dot(jac[k][c], apply(link, jac[k + 1][e]));
              hess[(offset[k] + c) * m + offset[k + 1] + e] += v;
              hess[(offset[k + 1] + e) * m + offset[k] + c] += v;
            }
        }
      }
      double scale = 1.0 / d_;
      for (std::size_t i = 0; i < m; ++i) scale = std::max(scale, hess[i * m + i]);
      for (std::size_t k = 0; k < groups_.size(); ++k)
        if (decoupled[k])
          for (std::size_t c = 0; c < jac[k].size(); ++c)
            hess[(offset[k] + c) * m + offset[k] + c] = scale;
      // Objective values only resolve ~1e-16 relative; below these the line
      // search is driven by rounding.
      if (gmax <= 1e-8) return Phase::Settled;

      std::vector<double> rhs(m), step;
      for (std::size_t i = 0; i < m; ++i) rhs[i] = -grad[i];
      double mu = mu_;
      bool solved = false;
      for (int attempt = 0; attempt < 40 && !solved; ++attempt, mu *= 10.0)
        solved = damped_solve(hess, m, mu, step, rhs);
      if (!solved) return Phase::Stuck;
      mu_ = mu / 10.0;
      double decrement = 0.0;
      for (std::size_t i = 0; i < m; ++i) decrement -= grad[i] * step[i];
      if (!(decrement > 0.0)) return Phase::Stuck;
      // Only trust a small decrement when the damping is negligible.
      if (mu_ <= 1e-3 / d_ && decrement <= 1e-15 * objective(y)) return Phase::Settled;

      // Largest step keeping every group feasible.
      double alpha_max = 1.0;
      std::size_t block = groups_.size();
      std::size_t block_disk = 0;
      for (std::size_t k = 0; k < groups_.size(); ++k) {
        const Group& gr = groups_[k];
        if (gr.face == Face::Free) {
          const Vec2 dir{step[offset[k]], step[offset[k] + 1]};
          for (std::size_t c = 0; c < gr.disks.size(); ++c) {
            const auto span = line_disk_interval(gr.pos, dir, Disk{gr.disks[c], r_});
            const double limit = span ? std::max(0.0, span->hi) : 0.0;
            if (limit < alpha_max) {
              alpha_max = limit;
              block = k;
              block_disk = c;
            }
          }
        } else if (gr.face == Face::Arc) {
          const double v = step[offset[k]] / r_;
          double limit = kInf;
          std::size_t disk = gr.circle;
          if (v > 0.0) {
            limit = std::max(0.0, (gr.hi - gr.psi) / v);
            disk = gr.hi_disk;
          } else if (v < 0.0) {
            limit = std::max(0.0, (gr.lo - gr.psi) / v);
            disk = gr.lo_disk;
          }
          if (limit < alpha_max) {
            alpha_max = limit;
            block = k;
            block_disk = disk;
          }
        }
      }

      const double f = objective(y);
      double alpha = alpha_max;
      bool accepted = false;
      std::vector<Vec2> next;
      while (alpha > 1e-16) {
        next = trial(offset, step, alpha);
        if (objective(next) <= f - 1e-4 * alpha * decrement) {
          accepted = true;
          break;
        }
        alpha *= 0.5;
      }
      const bool blocked =
          block < groups_.size() && (alpha_max < 1e-12 || (accepted && alpha == alpha_max));
      // Levenberg damping: relax after clean full steps, tighten otherwise.
      // It keeps steps along flat directions (a point sliding on a straight
      // stretch) bounded.
      if (accepted && alpha == 1.0)
        mu_ = std::max(0.1 * mu_, 1e-18 / d_);
      else if (!blocked)
        mu_ = std::min(100.0 * mu_, 1e6 / d_);
      if (!accepted && !blocked) continue;
      if (alpha_max < 1e-12 && !decoupled[block] && gradient_step_feasible(block, grad, offset)) {
        decoupled[block] = 3;
        continue;
      }
      if (accepted)
        for (int& left : decoupled) left = std::max(0, left - 1);

      if (accepted) {
        for (std::size_t k = 0; k < groups_.size(); ++k) {
          Group& gr = groups_[k];
          if (gr.face == Face::Arc)
            gr.psi = std::clamp(gr.psi + alpha * step[offset[k]] / r_, gr.lo, gr.hi);
          gr.pos = next[k + 1];
        }
      }
      if (blocked) {
        Group& gr = groups_[block];
        if (gr.face == Face::Free) {
          const Vec2 c = gr.disks[block_disk];
          gr.pos = c + (r_ / distance(gr.pos, c)) * (gr.pos - c);
          set_arc(gr, block_disk);
        } else if (block_disk != gr.circle) {
          gr.psi = gr.psi > 0.5 * (gr.lo + gr.hi) ? gr.hi : gr.lo;
          gr.pos = arc_point(gr, gr.psi);
          gr.face = Face::Corner;
          gr.other = block_disk;
        }
      }
      const std::vector<Vec2> now = nodes();
      for (std::size_t i = 1; i < now.size(); ++i) {
        const bool fixed_pair = (i == 1 && groups_.front().face == Face::Fixed) ||
                                (i + 1 == now.size() && groups_.back().face == Face::Fixed);
        if (!fixed_pair && distance(now[i], now[i - 1]) <= collision_gap_) return Phase::Collided;
      }
    }
    return Phase::Budget;
  }

  bool gradient_step_feasible(std::size_t k, const std::vector<double>& grad,
                              const std::vector<std::size_t>& offset) const {
    const Group& gr = groups_[k];
    if (gr.face == Face::Free) {
      const Vec2 dir{-grad[offset[k]], -grad[offset[k] + 1]};
      for (const Vec2 c : gr.disks) {
        const auto span = line_disk_interval(gr.pos, dir, Disk{c, r_});
        if (!span || !(span->hi > 0.0)) return false;
      }
      return true;
    }
    if (gr.face == Face::Arc) {
      const double v = -grad[offset[k]];
      return v > 0.0 ? gr.hi > gr.psi : v < 0.0 && gr.lo < gr.psi;
    }
    return false;
  }

  // Drops the constraint with the most negative multiplier. Returns false
  // when every multiplier is non-negative.
  bool release_worst() {
    const std::vector<Vec2> y = nodes();
    std::vector<Vec2> g;
    std::vector<Sym2> seg;
    derivatives(y, g, seg);
    double worst = -1e-7;
    std::size_t worst_group = groups_.size();
    constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
    std::size_t keep = kNone;  // circle kept when a corner is released
    for (std::size_t k = 0; k < groups_.size(); ++k) {
      const Group& gr = groups_[k];
      const Vec2 grad = g[k + 1];
      if (gr.face == Face::Arc) {
        const double lambda = -dot(grad, (gr.pos - gr.disks[gr.circle]) / r_);
        if (lambda < worst) {
          worst = lambda;
          worst_group = k;
          keep = kNone;
        }
      } else if (gr.face == Face::Corner) {
        // Slope along each boundary arc leaving the corner into the region.
        // Stays well conditioned when the two circles are nearly tangent.
        const std::pair<std::size_t, std::size_t> arcs[] = {{gr.circle, gr.other},
                                                            {gr.other, gr.circle}};
        for (const auto& [along, across] : arcs) {
          const Vec2 radial = gr.pos - gr.disks[along];
          Vec2 tangent = Vec2{-radial.y, radial.x} / r_;
          if (dot(tangent, gr.pos - gr.disks[across]) > 0.0) tangent = -tangent;
          const double slope = dot(grad, tangent);
          if (slope < worst) {
            worst = slope;
            worst_group = k;
            keep = along;
          }
        }
      }
    }
    if (worst_group == groups_.size()) return false;
    Group& gr = groups_[worst_group];
    if (keep != kNone)
      set_arc(gr, keep);
    else
      gr.face = Face::Free;
    return true;
  }

  std::span<const HandoverRegion> regions_;
  std::vector<Vec2> x_;
  double r_;
  double d_;
  double eps2_;
  double merge_gap_;
  double collision_gap_;
  double mu_;
  std::vector<Group> groups_;
};

}  // namespace

PolishResult polish_handovers(std::span<const HandoverRegion> regions, std::vector<Vec2> x,
                              double d, std::size_t max_iterations) {
  if (regions.empty()) return {std::move(x), true, 0};
  return Polisher(regions, x, d).run(max_iterations);
}

}  // namespace conntraj::detail
