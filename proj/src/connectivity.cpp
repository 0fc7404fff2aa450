#include "conntraj/connectivity.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <queue>

#include "conntraj/error.hpp"
#include "conntraj/text.hpp"

namespace conntraj {

std::optional<double> CoverageGraph::weight(std::size_t a, std::size_t b) const {
  for (const Neighbor& n : neighbors(a))
    if (n.vertex == b) return n.weight;
  return std::nullopt;
}

std::string CoverageGraph::vertex_name(std::size_t v) const {
  if (v == source()) return "U0";
  if (v == sink()) return "UF";
  return "G" + std::to_string(v);  // 1-based GBS label
}

CoverageGraph build_graph(const Scenario& s, CoverageRadius d_bar) {
  if (s.gbs_count() == 0) throw Error(ErrorCode::InvalidInput, "graph: no GBS");
  const double d = d_bar.meters();

  CoverageGraph g;
  g.d_bar_ = d;
  g.positions_.reserve(s.gbs_count() + 2);
  g.positions_.push_back(s.u0());
  for (const Vec2 p : s.gbs()) g.positions_.push_back(p);
  g.positions_.push_back(s.uf());
  g.adjacency_.resize(g.positions_.size());

  const std::size_t sink = g.sink();
  auto connect = [&g](std::size_t a, std::size_t b, double w) {
    g.edges_.push_back({a, b, w});
    g.adjacency_[a].push_back({b, w});
    g.adjacency_[b].push_back({a, w});
  };
  // a ascending, then b ascending, so every adjacency list ends up sorted.
  for (std::size_t v = 1; v < sink; ++v) {
    const double w = distance(g.positions_[0], g.positions_[v]);
    if (w <= d) connect(0, v, w);
  }
  for (std::size_t a = 1; a < sink; ++a) {
    for (std::size_t b = a + 1; b < sink; ++b) {
      const double w = distance(g.positions_[a], g.positions_[b]);
      if (w <= 2.0 * d) connect(a, b, w);
    }
    const double w = distance(g.positions_[a], g.positions_[sink]);
    if (w <= d) connect(a, sink, w);
  }
  return g;
}

bool is_feasible(const CoverageGraph& g) {
  std::vector<char> seen(g.vertex_count(), 0);
  std::queue<std::size_t> frontier;
  frontier.push(g.source());
  seen[g.source()] = 1;
  while (!frontier.empty()) {
    const std::size_t v = frontier.front();
    frontier.pop();
    if (v == g.sink()) return true;
    for (const auto& n : g.neighbors(v)) {
      if (!seen[n.vertex]) {
        seen[n.vertex] = 1;
        frontier.push(n.vertex);
      }
    }
  }
  return false;
}

MaxSnr max_attainable_snr(const Scenario& s) {
  const std::size_t m = s.gbs_count();
  if (m == 0) throw Error(ErrorCode::Unreachable, "max_attainable_snr: no GBS");

  // Dense O(V^2) minimax Dijkstra; vertices as in CoverageGraph.
  const std::size_t n = m + 2;
  const std::size_t sink = n - 1;
  auto pos = [&](std::size_t v) {
    return v == 0 ? s.u0() : (v == sink ? s.uf() : s.gbs(v - 1));
  };
  auto edge = [&](std::size_t a, std::size_t b) -> double {
    if (a > b) std::swap(a, b);
    if (a == 0 && b == sink) return std::numeric_limits<double>::infinity();
    const double w = distance(pos(a), pos(b));
    return (a == 0 || b == sink) ? w : 0.5 * w;
  };

  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> label(n, inf);
  std::vector<char> done(n, 0);
  label[0] = 0.0;
  for (std::size_t iter = 0; iter < n; ++iter) {
    std::size_t u = n;
    for (std::size_t v = 0; v < n; ++v)
      if (!done[v] && (u == n || label[v] < label[u])) u = v;
    if (u == n || label[u] == inf) break;
    done[u] = 1;
    if (u == sink) break;
    for (std::size_t v = 0; v < n; ++v) {
      if (done[v] || v == u) continue;
      const double cand = std::max(label[u], edge(u, v));
      if (cand < label[v]) label[v] = cand;
    }
  }
  if (label[sink] == inf) throw Error(ErrorCode::Unreachable, "U0 and UF cannot be connected");
  return {snr_target_covering(s, label[sink]), label[sink]};
}

void write_edge_csv(std::ostream& out, const CoverageGraph& g) {
  out << "v1,v2,weight_m\n";
  for (const auto& e : g.edges())
    out << g.vertex_name(e.a) << ',' << g.vertex_name(e.b) << ',' << format_fixed(e.weight, 6)
        << '\n';
}

}  // namespace conntraj
