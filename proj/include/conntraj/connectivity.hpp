#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "conntraj/scenario.hpp"

namespace conntraj {

// Undirected weighted graph over {U0, G_1..G_M, UF}. Vertex 0 is U0, vertex
// m + 1 is GBS m (0-based), vertex M + 1 is UF.
//
// Edges: (U0, G_m) iff |u0 - g_m| <= d, (UF, G_m) iff |uF - g_m| <= d,
// (G_m, G_n) iff |g_m - g_n| <= 2d. Weights are the horizontal distances.
class CoverageGraph {
 public:
  struct Edge {
    std::size_t a;  // a < b
    std::size_t b;
    double weight;
  };
  struct Neighbor {
    std::size_t vertex;
    double weight;
  };

  std::size_t gbs_count() const { return positions_.size() - 2; }
  std::size_t vertex_count() const { return positions_.size(); }
  std::size_t source() const { return 0; }
  std::size_t sink() const { return positions_.size() - 1; }
  static std::size_t gbs_vertex(std::size_t gbs) { return gbs + 1; }
  bool is_gbs_vertex(std::size_t v) const { return v != source() && v != sink(); }
  std::size_t gbs_of(std::size_t v) const { return v - 1; }

  double coverage_radius() const { return d_bar_; }
  Vec2 position(std::size_t v) const { return positions_.at(v); }
  const std::vector<Edge>& edges() const { return edges_; }
  // Sorted by vertex id.
  std::span<const Neighbor> neighbors(std::size_t v) const { return adjacency_.at(v); }
  std::optional<double> weight(std::size_t a, std::size_t b) const;
  std::string vertex_name(std::size_t v) const;

 private:
  friend CoverageGraph build_graph(const Scenario& s, CoverageRadius d_bar);

  double d_bar_ = 0.0;
  std::vector<Vec2> positions_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Neighbor>> adjacency_;
};

CoverageGraph build_graph(const Scenario& s, CoverageRadius d_bar);

// True iff UF is reachable from U0 (breadth-first search).
bool is_feasible(const CoverageGraph& g);

struct MaxSnr {
  double rho_max_db;
  double critical_d_bar;  // smallest coverage radius that keeps U0 and UF connected
};

// Exact supremum of feasible SNR targets via a bottleneck (minimax) path over
// the complete graph with normalized weights |u0-g|, |g-g'|/2, |uF-g|. The
// result is attained: build_graph at critical_d_bar is feasible.
MaxSnr max_attainable_snr(const Scenario& s);

// CSV `v1,v2,weight_m`, one row per edge.
void write_edge_csv(std::ostream& out, const CoverageGraph& g);

}  // namespace conntraj
