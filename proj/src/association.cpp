#include "conntraj/association.hpp"

#include <algorithm>
#include <charconv>
#include <limits>

#include "conntraj/error.hpp"

namespace conntraj {

AssociationSequence::AssociationSequence(std::vector<std::size_t> gbs_indices)
    : indices_(std::move(gbs_indices)) {
  if (indices_.empty())
    throw Error(ErrorCode::InvalidInput, "association sequence must not be empty");
}

bool AssociationSequence::all_distinct() const {
  std::vector<std::size_t> sorted = indices_;
  std::sort(sorted.begin(), sorted.end());
  return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}

bool AssociationSequence::has_consecutive_repeat() const {
  return std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end();
}

std::string AssociationSequence::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(indices_[i] + 1);
  }
  return out;
}

AssociationSequence AssociationSequence::parse(std::string_view text, std::size_t gbs_count) {
  std::vector<std::size_t> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    std::string_view token = text.substr(pos, comma - pos);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    std::size_t value = 0;
    const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || end != token.data() + token.size() || value < 1 ||
        value > gbs_count)
      throw Error(ErrorCode::InvalidInput,
                  "association: bad GBS index '" + std::string(token) + "'");
    out.push_back(value - 1);
    pos = comma + 1;
  }
  return AssociationSequence(std::move(out));
}

double path_weight(const Scenario& s, const AssociationSequence& seq) {
  double total = distance(s.u0(), s.gbs(seq.front()));
  for (std::size_t i = 0; i + 1 < seq.size(); ++i)
    total += distance(s.gbs(seq[i]), s.gbs(seq[i + 1]));
  return total + distance(s.uf(), s.gbs(seq.back()));
}

bool satisfies_coverage_conditions(const Scenario& s, const AssociationSequence& seq,
                                   CoverageRadius d_bar, double tolerance) {
  if (seq.empty()) return false;
  for (const std::size_t i : seq.indices())
    if (i >= s.gbs_count()) return false;
  const double d = d_bar.meters();
  if (distance(s.u0(), s.gbs(seq.front())) > d + tolerance) return false;
  if (distance(s.uf(), s.gbs(seq.back())) > d + tolerance) return false;
  for (std::size_t i = 0; i + 1 < seq.size(); ++i)
    if (distance(s.gbs(seq[i]), s.gbs(seq[i + 1])) > 2.0 * d + tolerance) return false;
  return true;
}

AssociationSequence shortest_path_association(const CoverageGraph& g) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
  const std::size_t n = g.vertex_count();
  std::vector<double> dist(n, inf);
  std::vector<std::size_t> pred(n, none);
  std::vector<char> done(n, 0);
  dist[g.source()] = 0.0;

  for (std::size_t iter = 0; iter < n; ++iter) {
    std::size_t u = none;
    for (std::size_t v = 0; v < n; ++v)
      if (!done[v] && dist[v] < inf && (u == none || dist[v] < dist[u])) u = v;
    if (u == none) break;
    done[u] = 1;
    if (u == g.sink()) break;
    for (const auto& nb : g.neighbors(u)) {
      if (done[nb.vertex]) continue;
      // U0 -> UF is never an edge, and UF is terminal.
      const double cand = dist[u] + nb.weight;
      if (cand < dist[nb.vertex] || (cand == dist[nb.vertex] && u < pred[nb.vertex])) {
        dist[nb.vertex] = cand;
        pred[nb.vertex] = u;
      }
    }
  }
  if (dist[g.sink()] == inf)
    throw Error(ErrorCode::Infeasible, "no path from U0 to UF in the coverage graph");

  std::vector<std::size_t> seq;
  for (std::size_t v = pred[g.sink()]; v != g.source(); v = pred[v]) seq.push_back(g.gbs_of(v));
  std::reverse(seq.begin(), seq.end());
  return AssociationSequence(std::move(seq));
}

namespace {

struct PathEnumerator {
  const CoverageGraph& g;
  std::size_t max_paths;
  const std::function<void(const AssociationSequence&)>& visit;
  std::vector<char> on_path;
  std::vector<std::size_t> path;
  std::size_t count = 0;

  void extend(std::size_t v) {
    const auto nbs = g.neighbors(v);
    // Adjacency is sorted and UF has the largest id, so check it first to
    // report a prefix before its extensions.
    if (!nbs.empty() && nbs.back().vertex == g.sink()) {
      if (++count > max_paths)
        throw Error(ErrorCode::TooManyPaths,
                    "more than " + std::to_string(max_paths) + " simple U0-UF paths");
      visit(AssociationSequence(path));
    }
    for (const auto& nb : nbs) {
      if (!g.is_gbs_vertex(nb.vertex) || on_path[nb.vertex]) continue;
      on_path[nb.vertex] = 1;
      path.push_back(g.gbs_of(nb.vertex));
      extend(nb.vertex);
      path.pop_back();
      on_path[nb.vertex] = 0;
    }
  }
};

}  // namespace

std::size_t for_each_association(const CoverageGraph& g, std::size_t max_paths,
                                 const std::function<void(const AssociationSequence&)>& visit) {
  if (!is_feasible(g))
    throw Error(ErrorCode::Infeasible, "no path from U0 to UF in the coverage graph");
  PathEnumerator e{g, max_paths, visit, std::vector<char>(g.vertex_count(), 0), {}, 0};
  for (const auto& nb : g.neighbors(g.source())) {
    e.on_path[nb.vertex] = 1;
    e.path.push_back(g.gbs_of(nb.vertex));
    e.extend(nb.vertex);
    e.path.pop_back();
    e.on_path[nb.vertex] = 0;
  }
  return e.count;
}

std::vector<AssociationSequence> enumerate_associations(const CoverageGraph& g,
                                                        std::size_t max_paths) {
  std::vector<AssociationSequence> out;
  for_each_association(g, max_paths, [&out](const AssociationSequence& s) { out.push_back(s); });
  return out;
}

AssociationSequence prune_repeats(const AssociationSequence& seq) {
  std::vector<std::size_t> out(seq.indices().begin(), seq.indices().end());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const auto last = std::find(out.rbegin(), out.rend(), out[k]);
    const auto q = static_cast<std::size_t>(out.rend() - last) - 1;
    if (q > k)
      out.erase(out.begin() + static_cast<std::ptrdiff_t>(k) + 1,
                out.begin() + static_cast<std::ptrdiff_t>(q) + 1);
  }
  return AssociationSequence(std::move(out));
}

}  // namespace conntraj
