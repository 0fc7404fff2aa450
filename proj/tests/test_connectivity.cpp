#include <doctest.h>

#include <random>
#include <sstream>

#include "conntraj/connectivity.hpp"
#include "conntraj/error.hpp"
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

bool has_edge(const CoverageGraph& g, std::size_t a, std::size_t b) { return g.weight(a, b).has_value(); }

// Two chains of GBSs between the endpoints plus isolated distractors. At
// radius 1000 the only route is U0, G2, G3, G4, G6, G8, UF; each GBS hop is
// 1627.9 m, more than 2 * 750.
Scenario fig2_like() {
  return make({{0, 3000},      // G1
               {600, 0},       // G2
               {2200, 300},    // G3
               {3800, 0},      // G4
               {3800, 3500},   // G5
               {5400, 300},    // G6
               {7000, -3000},  // G7
               {7000, 0}},     // G8
              {0, 0}, {7600, 0});
}

}  // namespace

TEST_CASE("single GBS covering both endpoints") {
  const Scenario s = make({{50, 50}}, {0, 0}, {100, 0});
  const CoverageGraph g = build_graph(s, CoverageRadius(80.0));
  CHECK(g.vertex_count() == 3);
  CHECK(g.edges().size() == 2);
  CHECK(has_edge(g, g.source(), 1));
  CHECK(has_edge(g, 1, g.sink()));
  CHECK(*g.weight(0, 1) == doctest::Approx(std::hypot(50.0, 50.0)));
  CHECK(is_feasible(g));
}

TEST_CASE("edges at exactly the radius and twice the radius") {
  const Scenario s = make({{0, 0}, {200, 0}}, {-100, 0}, {300, 0});
  const CoverageGraph g = build_graph(s, CoverageRadius(100.0));
  CHECK(has_edge(g, 1, 2));
  CHECK(*g.weight(1, 2) == 200.0);
  CHECK(has_edge(g, 0, 1));
  CHECK(has_edge(g, 2, 3));
  CHECK(is_feasible(g));
  const CoverageGraph tight = build_graph(s, CoverageRadius(std::nextafter(100.0, 0.0)));
  CHECK_FALSE(has_edge(tight, 1, 2));
  CHECK_FALSE(is_feasible(tight));
}

TEST_CASE("no endpoint edge and no self loops") {
  // u0 and uF next to each other but no GBS in reach.
  const Scenario s = make({{5000, 5000}}, {0, 0}, {1, 0});
  const CoverageGraph g = build_graph(s, CoverageRadius(100.0));
  CHECK_FALSE(has_edge(g, g.source(), g.sink()));
  for (const auto& e : g.edges()) CHECK(e.a < e.b);
  CHECK(g.edges().empty());
  CHECK_FALSE(is_feasible(g));
}

TEST_CASE("graph edges match the definition") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const Scenario s = oracle::random_scenario(rng, 7, 6000.0, {1000, 1000}, {5000, 5000});
    const double d = 600.0 + 200.0 * trial;
    const CoverageGraph g = build_graph(s, CoverageRadius(d));
    std::size_t expected = 0;
    for (std::size_t i = 0; i < 7; ++i) {
      const bool a = oracle::dist(s.u0(), s.gbs(i)) <= d;
      const bool b = oracle::dist(s.uf(), s.gbs(i)) <= d;
      CHECK(has_edge(g, 0, i + 1) == a);
      CHECK(has_edge(g, i + 1, 8) == b);
      expected += a + b;
      for (std::size_t j = i + 1; j < 7; ++j) {
        const double w = oracle::dist(s.gbs(i), s.gbs(j));
        CHECK(has_edge(g, i + 1, j + 1) == (w <= 2 * d));
        if (w <= 2 * d) {
          ++expected;
          CHECK(*g.weight(j + 1, i + 1) == doctest::Approx(w).epsilon(1e-15));
        }
      }
    }
    CHECK(g.edges().size() == expected);
  }
}

TEST_CASE("BFS feasibility matches union-find") {
  std::mt19937_64 rng(5);
  int feasible = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const Scenario s = oracle::random_scenario(rng, 3 + trial % 6, 10000.0, {2000, 2000}, {8000, 8000});
    const double d = 900.0 + 60.0 * trial;
    const bool got = is_feasible(build_graph(s, CoverageRadius(d)));
    CHECK(got == oracle::connected(s, d));
    feasible += got;
  }
  // Both outcomes occur.
  CHECK(feasible > 5);
  CHECK(feasible < 45);
}

TEST_CASE("layout with a single route") {
  const Scenario s = fig2_like();
  const CoverageGraph wide = build_graph(s, CoverageRadius(1000.0));
  CHECK(is_feasible(wide));
  const std::vector<std::size_t> route{0, 2, 3, 4, 6, 8, 9};
  for (std::size_t i = 1; i < route.size(); ++i) CHECK(has_edge(wide, route[i - 1], route[i]));
  CHECK(oracle::count_simple_paths(s, 1000.0) == 1);
  CHECK_FALSE(is_feasible(build_graph(s, CoverageRadius(750.0))));
}

TEST_CASE("maximum attainable SNR") {
  SUBCASE("single GBS") {
    const Scenario s = make({{300, 400}}, {0, 0}, {1000, 400});
    const MaxSnr m = max_attainable_snr(s);
    CHECK(m.critical_d_bar == doctest::Approx(700.0).epsilon(1e-15));
    CHECK(m.rho_max_db == doctest::Approx(80.0 - 10 * std::log10(700.0 * 700.0 + 77.5 * 77.5)));
  }
  SUBCASE("collinear chain") {
    const Scenario s = make({{100, 0}, {200, 0}}, {0, 0}, {300, 0});
    const MaxSnr m = max_attainable_snr(s);
    CHECK(m.critical_d_bar == doctest::Approx(100.0).epsilon(1e-15));
    CHECK(m.critical_d_bar == doctest::Approx(oracle::bisect_critical_radius(s)).epsilon(1e-9));
  }
  SUBCASE("GBS gap dominates") {
    const Scenario s = make({{0, 0}, {3000, 0}}, {0, 10}, {3000, 10});
    CHECK(max_attainable_snr(s).critical_d_bar == doctest::Approx(1500.0).epsilon(1e-15));
  }
  SUBCASE("random layouts agree with bisection and bracket feasibility") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 40; ++trial) {
      const Scenario s = oracle::random_scenario(rng, 2 + trial % 8, 10000.0, {2000, 2000}, {8000, 8000});
      const MaxSnr best = max_attainable_snr(s);
      const double crit = best.critical_d_bar;
      CHECK(std::abs(crit - oracle::bisect_critical_radius(s)) <= 1e-6);
      CHECK(is_feasible(build_graph(s, CoverageRadius(crit))));
      // The target itself, not only the radius, is attained.
      CHECK(is_feasible(build_graph(s, compute_coverage_radius(s, SnrTarget{best.rho_max_db}))));
      CHECK(best.rho_max_db == doctest::Approx(snr_at_distance(s, crit)).epsilon(1e-14));
      CHECK_FALSE(is_feasible(build_graph(s, CoverageRadius(crit * (1 - 1e-9)))));
    }
  }
}

TEST_CASE("feasibility is monotone in the radius") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const Scenario s = oracle::random_scenario(rng, 6, 10000.0, {2000, 2000}, {8000, 8000});
    bool seen = false;
    std::size_t prev_edges = 0;
    for (double d = 200.0; d < 6000.0; d *= 1.15) {
      const CoverageGraph g = build_graph(s, CoverageRadius(d));
      const bool ok = is_feasible(g);
      if (seen) CHECK(ok);
      seen = seen || ok;
      CHECK(g.edges().size() >= prev_edges);
      prev_edges = g.edges().size();
    }
    CHECK(seen);
  }
}

TEST_CASE("edge CSV") {
  const Scenario s = make({{0, 0}, {200, 0}}, {-100, 0}, {300, 0});
  std::ostringstream out;
  write_edge_csv(out, build_graph(s, CoverageRadius(100.0)));
  const std::string text = out.str();
  CHECK(text.rfind("v1,v2,weight_m\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);
}
