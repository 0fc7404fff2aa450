#pragma once

// Independent reference implementations used only by the tests. None of
// these call into the library's algorithms; they share only the plain data
// types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "conntraj/association.hpp"
#include "conntraj/geometry.hpp"
#include "conntraj/scenario.hpp"

namespace oracle {

using conntraj::Vec2;

inline double dist(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

// ---- connectivity ----------------------------------------------------------

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

// Vertex 0 = u0, 1..M = GBSs, M+1 = uF.
inline bool connected(const conntraj::Scenario& s, double d) {
  const std::size_t m = s.gbs_count();
  UnionFind uf(m + 2);
  for (std::size_t i = 0; i < m; ++i) {
    if (dist(s.u0(), s.gbs(i)) <= d) uf.unite(0, i + 1);
    if (dist(s.uf(), s.gbs(i)) <= d) uf.unite(m + 1, i + 1);
    for (std::size_t j = i + 1; j < m; ++j)
      if (dist(s.gbs(i), s.gbs(j)) <= 2.0 * d) uf.unite(i + 1, j + 1);
  }
  return uf.find(0) == uf.find(m + 1);
}

// Smallest feasible radius by bisection on `connected`.
inline double bisect_critical_radius(const conntraj::Scenario& s, double tol = 1e-8) {
  double lo = 0.0, hi = 1.0;
  while (!connected(s, hi)) hi *= 2.0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (connected(s, mid) ? hi : lo) = mid;
  }
  return hi;
}

// ---- sequences -------------------------------------------------------------

inline bool gbs_adjacent(const conntraj::Scenario& s, std::size_t a, std::size_t b, double d) {
  return a != b && dist(s.gbs(a), s.gbs(b)) <= 2.0 * d;
}

// Every simple U0 -> UF path as a list of 0-based GBS indices, by brute
// force over ordered subsets. Order is unspecified.
inline std::vector<std::vector<std::size_t>> all_simple_paths(const conntraj::Scenario& s, double d) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  std::vector<bool> used(s.gbs_count(), false);
  std::function<void()> extend = [&] {
    if (dist(s.uf(), s.gbs(cur.back())) <= d) out.push_back(cur);
    for (std::size_t g = 0; g < s.gbs_count(); ++g) {
      if (used[g] || !gbs_adjacent(s, cur.back(), g, d)) continue;
      used[g] = true;
      cur.push_back(g);
      extend();
      cur.pop_back();
      used[g] = false;
    }
  };
  for (std::size_t g = 0; g < s.gbs_count(); ++g) {
    if (dist(s.u0(), s.gbs(g)) > d) continue;
    used[g] = true;
    cur = {g};
    extend();
    used[g] = false;
  }
  return out;
}

// Counts simple paths with a memoized (visited-mask, last) table.
inline std::uint64_t count_simple_paths(const conntraj::Scenario& s, double d) {
  const std::size_t m = s.gbs_count();
  std::map<std::pair<std::uint32_t, std::size_t>, std::uint64_t> memo;
  std::function<std::uint64_t(std::uint32_t, std::size_t)> from = [&](std::uint32_t mask,
                                                                     std::size_t last) {
    const auto key = std::pair{mask, last};
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::uint64_t n = dist(s.uf(), s.gbs(last)) <= d ? 1 : 0;
    for (std::size_t g = 0; g < m; ++g)
      if (!(mask >> g & 1u) && gbs_adjacent(s, last, g, d)) n += from(mask | (1u << g), g);
    memo[key] = n;
    return n;
  };
  std::uint64_t total = 0;
  for (std::size_t g = 0; g < m; ++g)
    if (dist(s.u0(), s.gbs(g)) <= d) total += from(1u << g, g);
  return total;
}

inline double sequence_weight(const conntraj::Scenario& s, const std::vector<std::size_t>& seq) {
  double w = dist(s.u0(), s.gbs(seq.front())) + dist(s.uf(), s.gbs(seq.back()));
  for (std::size_t i = 1; i < seq.size(); ++i) w += dist(s.gbs(seq[i - 1]), s.gbs(seq[i]));
  return w;
}

// ---- handover placement ----------------------------------------------------

// Lens of two radius-r disks parametrized over [-1, 1]^2: alpha runs along the
// center axis, beta across it. Every parameter maps inside the lens.
struct LensChart {
  Vec2 mid, axis, perp;
  double r, half_gap, half_len;

  LensChart(Vec2 a, Vec2 b, double radius) : r(radius) {
    const double gap = dist(a, b);
    mid = {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
    axis = gap > 0 ? Vec2{(b.x - a.x) / gap, (b.y - a.y) / gap} : Vec2{1, 0};
    perp = {-axis.y, axis.x};
    half_gap = 0.5 * gap;
    half_len = r - half_gap;
  }
  Vec2 at(double alpha, double beta) const {
    const double t = alpha * half_len;
    const double reach = half_gap + std::abs(t);
    const double h = std::sqrt(std::max(0.0, r * r - reach * reach));
    const double sc = beta * h;
    return {mid.x + t * axis.x + sc * perp.x, mid.y + t * axis.y + sc * perp.y};
  }
};

// Shortest u0 -> uF polyline with one or two handovers, each in its lens.
// Nested grid refinement in lens parameter space.
inline double grid_min_length(Vec2 u0, Vec2 uf, const std::vector<LensChart>& lenses,
                              int per_axis = 25, int levels = 10) {
  const std::size_t h = lenses.size();
  std::vector<double> center(2 * h, 0.0);
  double half = 1.0;
  double best = std::numeric_limits<double>::infinity();
  std::vector<Vec2> pts(h);
  for (int level = 0; level < levels; ++level) {
    const double step = 2.0 * half / (per_axis - 1);
    std::vector<double> best_param = center;
    std::vector<int> idx(2 * h, 0);
    while (true) {
      std::vector<double> p(2 * h);
      bool inside = true;
      for (std::size_t k = 0; k < 2 * h; ++k) {
        p[k] = center[k] - half + step * idx[k];
        if (p[k] < -1.0 || p[k] > 1.0) inside = false;
      }
      if (inside) {
        for (std::size_t i = 0; i < h; ++i) pts[i] = lenses[i].at(p[2 * i], p[2 * i + 1]);
        double len = dist(u0, pts.front()) + dist(pts.back(), uf);
        for (std::size_t i = 1; i < h; ++i) len += dist(pts[i - 1], pts[i]);
        if (len < best) {
          best = len;
          best_param = p;
        }
      }
      std::size_t k = 0;
      while (k < 2 * h && ++idx[k] == per_axis) idx[k++] = 0;
      if (k == 2 * h) break;
    }
    center = best_param;
    half = 3.0 * step;
  }
  return best;
}

// ---- straight flight -------------------------------------------------------

// max over t in [0,1] of the closest-GBS distance along u0 -> uF. The maximum
// sits at an endpoint or where the segment crosses a perpendicular bisector
// of two GBSs, so evaluating every such crossing is exact.
inline double straight_worst_distance(const conntraj::Scenario& s) {
  const Vec2 a = s.u0(), b = s.uf();
  const Vec2 dir{b.x - a.x, b.y - a.y};
  auto closest = [&](double t) {
    const Vec2 p{a.x + t * dir.x, a.y + t * dir.y};
    double m = std::numeric_limits<double>::infinity();
    for (const Vec2 g : s.gbs()) m = std::min(m, dist(p, g));
    return m;
  };
  double worst = std::max(closest(0.0), closest(1.0));
  for (std::size_t i = 0; i < s.gbs_count(); ++i)
    for (std::size_t j = i + 1; j < s.gbs_count(); ++j) {
      const Vec2 gi = s.gbs(i), gj = s.gbs(j);
      // |p - gi|^2 = |p - gj|^2 is linear in t.
      const Vec2 diff{gj.x - gi.x, gj.y - gi.y};
      const double slope = 2.0 * (diff.x * dir.x + diff.y * dir.y);
      const double rhs = (gj.x * gj.x + gj.y * gj.y) - (gi.x * gi.x + gi.y * gi.y) -
                         2.0 * (diff.x * a.x + diff.y * a.y);
      if (slope == 0.0) continue;
      const double t = rhs / slope;
      if (t > 0.0 && t < 1.0) worst = std::max(worst, closest(t));
    }
  return worst;
}

// Parameter interval where the line a + t (b - a) is farther than r from c.
// Returns the chord endpoints of the circle (t_in, t_out); the gap between
// two disks on a line is the complement of the union of such chords.
inline bool chord(Vec2 a, Vec2 b, Vec2 c, double r, double& t0, double& t1) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double fx = a.x - c.x, fy = a.y - c.y;
  const double qa = dx * dx + dy * dy, qb = 2 * (fx * dx + fy * dy), qc = fx * fx + fy * fy - r * r;
  const double disc = qb * qb - 4 * qa * qc;
  if (disc < 0) return false;
  t0 = (-qb - std::sqrt(disc)) / (2 * qa);
  t1 = (-qb + std::sqrt(disc)) / (2 * qa);
  return true;
}

// ---- random instances ------------------------------------------------------

inline conntraj::Scenario random_scenario(std::mt19937_64& rng, std::size_t m, double side,
                                          Vec2 u0, Vec2 uf) {
  std::uniform_real_distribution<double> coord(0.0, side);
  conntraj::ScenarioParams p;
  for (std::size_t i = 0; i < m; ++i) p.gbs.push_back({coord(rng), coord(rng)});
  p.u0 = u0;
  p.uf = uf;
  return conntraj::Scenario(p);
}

inline Vec2 polar(double r, double angle) { return {r * std::cos(angle), r * std::sin(angle)}; }

// Chain of n GBSs with consecutive gaps in [0.3, 1.9] d and endpoints inside
// the first/last disk, associated in order.
struct Subproblem {
  conntraj::Scenario scenario;
  conntraj::AssociationSequence seq;
};

inline Subproblem random_subproblem(std::mt19937_64& rng, std::size_t n, double d) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double tau = 2 * std::numbers::pi;
  std::vector<Vec2> g{{0, 0}};
  double heading = tau * unit(rng);
  for (std::size_t i = 1; i < n; ++i) {
    heading += (unit(rng) - 0.5) * 2.0;
    g.push_back(g.back() + polar(d * (0.3 + 1.6 * unit(rng)), heading));
  }
  conntraj::ScenarioParams p;
  p.u0 = g.front() + polar(d * std::sqrt(unit(rng)), tau * unit(rng));
  p.uf = g.back() + polar(d * std::sqrt(unit(rng)), tau * unit(rng));
  p.gbs = g;
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return {conntraj::Scenario(p), conntraj::AssociationSequence(idx)};
}

// Random walk over the coverage graph, revisits allowed, at least four hops.
inline std::optional<std::vector<std::size_t>> random_walk(const conntraj::Scenario& s, double d,
                                                           std::mt19937_64& rng) {
  std::vector<std::size_t> starts;
  for (std::size_t g = 0; g < s.gbs_count(); ++g)
    if (dist(s.u0(), s.gbs(g)) <= d) starts.push_back(g);
  if (starts.empty()) return std::nullopt;
  std::vector<std::size_t> walk{starts[rng() % starts.size()]};
  for (int step = 0; step < 60; ++step) {
    if (walk.size() >= 4 && dist(s.uf(), s.gbs(walk.back())) <= d) return walk;
    std::vector<std::size_t> next;
    for (std::size_t g = 0; g < s.gbs_count(); ++g)
      if (gbs_adjacent(s, walk.back(), g, d)) next.push_back(g);
    if (next.empty()) return std::nullopt;
    walk.push_back(next[rng() % next.size()]);
  }
  return std::nullopt;
}

}  // namespace oracle
