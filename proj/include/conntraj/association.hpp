#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "conntraj/connectivity.hpp"
#include "conntraj/scenario.hpp"

namespace conntraj {

inline constexpr std::size_t kDefaultMaxPaths = 10'000'000;

// Ordered GBS indices the UAV associates with, one per trajectory segment.
// Stored 0-based; the text form is 1-based and comma separated ("1,10,11").
class AssociationSequence {
 public:
  AssociationSequence() = default;
  // Throws Error(InvalidInput) when empty.
  explicit AssociationSequence(std::vector<std::size_t> gbs_indices);

  std::span<const std::size_t> indices() const { return indices_; }
  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  std::size_t operator[](std::size_t i) const { return indices_[i]; }
  std::size_t front() const { return indices_.front(); }
  std::size_t back() const { return indices_.back(); }

  bool all_distinct() const;
  bool has_consecutive_repeat() const;

  std::string to_string() const;
  // Parses the 1-based text form; every index must be in 1..gbs_count.
  static AssociationSequence parse(std::string_view text, std::size_t gbs_count);

  friend auto operator<=>(const AssociationSequence&, const AssociationSequence&) = default;

 private:
  std::vector<std::size_t> indices_;
};

// |u0 - g_I1| + sum |g_Ii+1 - g_Ii| + |uF - g_IN|: the triangle-inequality
// upper bound on the optimized path length, and the path weight in the graph.
double path_weight(const Scenario& s, const AssociationSequence& seq);

// Start/end coverage, consecutive GBS gaps within 2d and valid indices.
bool satisfies_coverage_conditions(const Scenario& s, const AssociationSequence& seq,
                                   CoverageRadius d_bar, double tolerance = 0.0);

// Minimum-weight U0 -> UF path (Dijkstra). Ties: lowest vertex first, then the
// lower-indexed predecessor. Throws Error(Infeasible) when UF is unreachable.
AssociationSequence shortest_path_association(const CoverageGraph& g);

// Depth-first enumeration of all simple U0 -> UF paths in lexicographic order.
// Calls `visit` for each; throws Error(TooManyPaths) once more than max_paths
// have been found and Error(Infeasible) when there is none.
std::size_t for_each_association(const CoverageGraph& g, std::size_t max_paths,
                                 const std::function<void(const AssociationSequence&)>& visit);

std::vector<AssociationSequence> enumerate_associations(const CoverageGraph& g,
                                                        std::size_t max_paths = kDefaultMaxPaths);

// Removes revisits: for the leftmost index with a later repeat, drops every
// element after it up to and including its last occurrence. Repeats until all
// indices are distinct. Coverage conditions are preserved.
AssociationSequence prune_repeats(const AssociationSequence& seq);

}  // namespace conntraj
