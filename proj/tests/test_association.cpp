#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "conntraj/association.hpp"
#include "conntraj/connectivity.hpp"
#include "conntraj/error.hpp"
#include "conntraj/handover.hpp"
#include "oracles.hpp"

using namespace conntraj;

namespace {

Scenario make(std::vector<Vec2> gbs, Vec2 u0, Vec2 uf) {
  ScenarioParams p;
  p.gbs = std::move(gbs);
  p.u0 = u0;
  p.uf = uf;
  return Scenario(p);
}

std::vector<std::size_t> as_vector(const AssociationSequence& s) {
  return {s.indices().begin(), s.indices().end()};
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::InvalidInput;
}

using oracle::random_walk;

}  // namespace

TEST_CASE("sequence text form") {
  const AssociationSequence seq({0, 9, 10, 5, 7});
  CHECK(seq.to_string() == "1,10,11,6,8");
  CHECK(AssociationSequence::parse("1,10,11,6,8", 11) == seq);
  CHECK(AssociationSequence::parse(" 3 , 1 ", 3) == AssociationSequence({2, 0}));
  CHECK(code_of([] { AssociationSequence::parse("0,1", 3); }) == ErrorCode::InvalidInput);
  CHECK(code_of([] { AssociationSequence::parse("1,4", 3); }) == ErrorCode::InvalidInput);
  CHECK(code_of([] { AssociationSequence::parse("", 3); }) == ErrorCode::InvalidInput);
  CHECK(code_of([] { AssociationSequence::parse("1,,2", 3); }) == ErrorCode::InvalidInput);
  CHECK(code_of([] { AssociationSequence(std::vector<std::size_t>{}); }) == ErrorCode::InvalidInput);
  CHECK(seq.all_distinct());
  CHECK_FALSE(AssociationSequence({1, 2, 1}).all_distinct());
  CHECK(AssociationSequence({1, 1}).has_consecutive_repeat());
}

TEST_CASE("single GBS association") {
  const Scenario s = make({{50, 0}}, {0, 0}, {100, 0});
  const CoverageGraph g = build_graph(s, CoverageRadius(60.0));
  CHECK(shortest_path_association(g) == AssociationSequence({0}));
  const auto all = enumerate_associations(g);
  REQUIRE(all.size() == 1);
  CHECK(all[0] == AssociationSequence({0}));
}

TEST_CASE("three GBSs: two-hop route beats the direct one") {
  // Direct U0-G1-UF weighs 900, U0-G2-G3-UF weighs 700.
  const Scenario s = make({{300, 335.41}, {75, 100}, {525, 100}}, {0, 0}, {600, 0});
  const double d = 500.0;
  CHECK(path_weight(s, AssociationSequence({0})) == doctest::Approx(900.0).epsilon(1e-5));
  CHECK(path_weight(s, AssociationSequence({1, 2})) == doctest::Approx(700.0).epsilon(1e-12));
  const AssociationSequence best = shortest_path_association(build_graph(s, CoverageRadius(d)));
  CHECK(best == AssociationSequence({1, 2}));

  double min_weight = std::numeric_limits<double>::infinity();
  for (const auto& p : oracle::all_simple_paths(s, d)) min_weight = std::min(min_weight, oracle::sequence_weight(s, p));
  CHECK(path_weight(s, best) == doctest::Approx(min_weight).epsilon(1e-15));
}

TEST_CASE("Dijkstra equals the brute-force minimum weight") {
  std::mt19937_64 rng(31);
  int checked = 0;
  for (int trial = 0; trial < 80; ++trial) {
    const Scenario s = oracle::random_scenario(rng, 3 + trial % 5, 10000.0, {2000, 2000}, {8000, 8000});
    const double d = 1.1 * oracle::bisect_critical_radius(s);
    const CoverageGraph g = build_graph(s, CoverageRadius(d));
    const AssociationSequence seq = shortest_path_association(g);
    CHECK(seq.all_distinct());
    CHECK(seq.size() <= s.gbs_count());
    CHECK(satisfies_coverage_conditions(s, seq, CoverageRadius(d)));
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : oracle::all_simple_paths(s, d)) best = std::min(best, oracle::sequence_weight(s, p));
    CHECK(path_weight(s, seq) == doctest::Approx(best).epsilon(1e-12));
    CHECK(path_weight(s, seq) == doctest::Approx(oracle::sequence_weight(s, as_vector(seq))).epsilon(1e-15));
    ++checked;
  }
  CHECK(checked == 80);
}

TEST_CASE("Dijkstra ties resolve the same way every time") {
  // Mirror-symmetric: both routes weigh the same.
  const Scenario s = make({{50, 40}, {50, -40}}, {0, 0}, {100, 0});
  const CoverageGraph g = build_graph(s, CoverageRadius(70.0));
  const AssociationSequence first = shortest_path_association(g);
  CHECK(first == AssociationSequence({0}));
  for (int i = 0; i < 5; ++i) CHECK(shortest_path_association(g) == first);
}

TEST_CASE("infeasible graphs are rejected") {
  const Scenario s = make({{5000, 5000}}, {0, 0}, {100, 0});
  const CoverageGraph g = build_graph(s, CoverageRadius(100.0));
  CHECK(code_of([&] { shortest_path_association(g); }) == ErrorCode::Infeasible);
  CHECK(code_of([&] { enumerate_associations(g); }) == ErrorCode::Infeasible);
}

TEST_CASE("enumeration on a complete graph of three GBSs") {
  const Scenario s = make({{0, 10}, {10, 0}, {-10, 0}}, {0, 0}, {1, 1});
  const CoverageGraph g = build_graph(s, CoverageRadius(100.0));
  const auto all = enumerate_associations(g);
  CHECK(all.size() == 15);  // 3 + 6 + 6 ordered selections
  std::set<std::vector<std::size_t>> unique;
  for (const auto& a : all) unique.insert(as_vector(a));
  CHECK(unique.size() == 15);
  CHECK(code_of([&] { enumerate_associations(g, 14); }) == ErrorCode::TooManyPaths);
  CHECK(enumerate_associations(g, 15).size() == 15);
}

TEST_CASE("enumeration matches brute force and a memoized counter") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 40; ++trial) {
    const Scenario s = oracle::random_scenario(rng, 4 + trial % 5, 10000.0, {2000, 2000}, {8000, 8000});
    const double d = (1.05 + 0.03 * trial) * oracle::bisect_critical_radius(s);
    const CoverageGraph g = build_graph(s, CoverageRadius(d));
    const auto all = enumerate_associations(g);
    std::set<std::vector<std::size_t>> got;
    for (const auto& a : all) {
      got.insert(as_vector(a));
      CHECK(a.all_distinct());
      CHECK(satisfies_coverage_conditions(s, a, CoverageRadius(d)));
    }
    CHECK(got.size() == all.size());
    const auto brute = oracle::all_simple_paths(s, d);
    CHECK(std::set<std::vector<std::size_t>>(brute.begin(), brute.end()) == got);
    CHECK(oracle::count_simple_paths(s, d) == all.size());
    // Deterministic order; the Dijkstra sequence is among them and weighs least.
    CHECK(enumerate_associations(g) == all);
    const AssociationSequence best = shortest_path_association(g);
    CHECK(std::find(all.begin(), all.end(), best) != all.end());
    for (const auto& a : all) CHECK(path_weight(s, best) <= path_weight(s, a) + 1e-9);
  }
}

TEST_CASE("streaming enumeration visits the same sequences") {
  const Scenario s = make({{0, 10}, {10, 0}, {-10, 0}, {0, -10}}, {0, 0}, {1, 1});
  const CoverageGraph g = build_graph(s, CoverageRadius(100.0));
  std::vector<AssociationSequence> seen;
  const std::size_t n = for_each_association(g, 1000, [&](const AssociationSequence& a) { seen.push_back(a); });
  CHECK(n == 64);  // 4 + 12 + 24 + 24
  CHECK(seen == enumerate_associations(g));
}

TEST_CASE("pruning repeats") {
  CHECK(prune_repeats(AssociationSequence({1, 2, 1, 3})) == AssociationSequence({1, 3}));
  CHECK(prune_repeats(AssociationSequence({0, 4, 6})) == AssociationSequence({0, 4, 6}));
  CHECK(prune_repeats(AssociationSequence({5, 5, 5})) == AssociationSequence({5}));
  // Leftmost repeat first, cut to its last occurrence.
  CHECK(prune_repeats(AssociationSequence({0, 1, 0, 2, 0, 3})) == AssociationSequence({0, 3}));
  CHECK(prune_repeats(AssociationSequence({0, 1, 2, 1, 3, 2, 4})) == AssociationSequence({0, 1, 3, 2, 4}));
}

TEST_CASE("pruned random walks stay valid and never get longer") {
  std::mt19937_64 rng(123);
  int trials = 0;
  for (int attempt = 0; attempt < 400 && trials < 25; ++attempt) {
    const Scenario s = oracle::random_scenario(rng, 7, 10000.0, {2000, 2000}, {8000, 8000});
    const double d = 1.3 * oracle::bisect_critical_radius(s);
    const auto walk = random_walk(s, d, rng);
    if (!walk) continue;
    const AssociationSequence seq(*walk);
    const AssociationSequence pruned = prune_repeats(seq);
    CHECK(pruned.all_distinct());
    CHECK(pruned.size() <= seq.size());
    CHECK(satisfies_coverage_conditions(s, pruned, CoverageRadius(d)));
    CHECK(path_weight(s, pruned) <= path_weight(s, seq) + 1e-9);
    if (pruned.size() == seq.size()) continue;
    ++trials;
    const double before = optimize_handovers(s, seq, CoverageRadius(d)).objective;
    const double after = optimize_handovers(s, pruned, CoverageRadius(d)).objective;
    CHECK(after <= before + 1e-6);
  }
  CHECK(trials == 25);
}

TEST_CASE("coverage conditions") {
  const Scenario s = make({{0, 0}, {150, 0}, {340, 0}}, {-90, 0}, {430, 0});
  const CoverageRadius d(100.0);
  CHECK(satisfies_coverage_conditions(s, AssociationSequence({0, 1, 2}), d));
  CHECK_FALSE(satisfies_coverage_conditions(s, AssociationSequence({0, 2}), d));  // gap 340 > 200
  CHECK_FALSE(satisfies_coverage_conditions(s, AssociationSequence({1, 2}), d));  // start uncovered
  CHECK_FALSE(satisfies_coverage_conditions(s, AssociationSequence({0, 1}), d));  // end uncovered
}
