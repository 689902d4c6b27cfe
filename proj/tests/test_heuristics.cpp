#include <algorithm>
#include <optional>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "scanwidth/digraph.hpp"
#include "scanwidth/exact.hpp"
#include "scanwidth/heuristics.hpp"
#include "scanwidth/layouts.hpp"
#include "scanwidth/rng.hpp"

using namespace scanwidth;

TEST_CASE("minimum s-t cuts find the bottleneck") {
  Digraph g;
  for (int i = 0; i < 4; ++i) g.add_vertex();
  g.add_arc(0, 1, 5);
  g.add_arc(1, 2, 2);
  g.add_arc(0, 2, 1);
  g.add_arc(2, 3, 9);
  const StCut cut = min_st_cut(g, 0, 2);
  CHECK(cut.weight == 3);  // the arcs 1->2 and 0->2
  CHECK(cut.source_side.contains(0));
  CHECK(cut.source_side.contains(1));
  CHECK(cut.sink_side.contains(2));
  // The reported sink side is the minimal one; 3 carries no flow towards 2
  // and therefore stays on the source side.
  CHECK(cut.source_side.contains(3));
  CHECK(!cut.sink_side.contains(3));
  CHECK_THROWS_AS(min_st_cut(g, 1, 1), std::invalid_argument);
}

TEST_CASE("the lightest non-trivial cut matches exhaustive enumeration") {
  SUBCASE("on the cut fixture it weighs four") {
    const Digraph g = fixtures::cut_example();
    const auto cut = min_nontrivial_dag_cut(g);
    REQUIRE(cut.has_value());
    CHECK(cut->weight == 4);
    CHECK_FALSE(cut->trivial);
    CHECK(oracles::exhaustive_min_nontrivial_cut(g) == 4);
    weight_t recount = 0;
    for (const int a : cut->cut_arcs) recount += g.arc(a).weight;
    CHECK(recount == cut->weight);
    CHECK(is_sinkset(g, cut->sink_side));
    CHECK(weakly_connected_components(g, cut->sink_side).size() == 1);
  }
  SUBCASE("on the splitting fixture it weighs three and isolates e, f, g") {
    const Digraph g = fixtures::cutsplit_example();
    const auto cut = min_nontrivial_dag_cut(g);
    REQUIRE(cut.has_value());
    CHECK(cut->weight == 3);
    CHECK(oracles::exhaustive_min_nontrivial_cut(g) == 3);
    CHECK(cut->sink_side.size() == 3);
    for (const char* l : {"e", "f", "g"}) CHECK(cut->sink_side.contains(fixtures::id_of(g, l)));
  }
  SUBCASE("on random single-root graphs") {
    Rng rng(1111);
    int found = 0;
    for (int round = 0; round < 50; ++round) {
      const Digraph g =
          oracles::random_single_root_dag(rng, 4 + static_cast<int>(rng.below(6)), round % 2 == 1);
      const auto expected = oracles::exhaustive_min_nontrivial_cut(g);
      const auto got = min_nontrivial_dag_cut(g);
      if (expected) {
        REQUIRE(got.has_value());
        CHECK(got->weight == *expected);
        ++found;
      } else {
        CHECK_FALSE(got.has_value());
      }
    }
    CHECK(found > 10);
  }
}

TEST_CASE("tiny graphs have no non-trivial cut") {
  CHECK_FALSE(min_nontrivial_dag_cut(fixtures::path(3)).has_value());
}

TEST_CASE("cut splitting yields valid extensions") {
  Rng rng(1212);
  for (int round = 0; round < 40; ++round) {
    const Digraph g = oracles::random_dag(rng, 4 + static_cast<int>(rng.below(8)), round % 2 == 1);
    const Extension e = cut_split_heuristic(g);
    REQUIRE(is_extension(g, e));
    CHECK(scanwidth_of_extension(g, e).value >= brute_force(g, 12).value);
  }
}

TEST_CASE("cut splitting pays one over the optimum on the splitting fixture") {
  const Digraph g = fixtures::cutsplit_example();
  CHECK(brute_force(g).value == 5);
  const Extension e = cut_split_heuristic(g);
  REQUIRE(is_extension(g, e));
  CHECK(scanwidth_of_extension(g, e).value == 6);
}

TEST_CASE("the greedy layout is valid and walks into the ladder trap") {
  // On the extended ladder the b-rail is always the locally cheapest leaf
  // (one arc cheaper than a_n at every step), so greedy swallows it whole.
  // The forced a_n placement then pays for every rung plus the chain arc
  // plus the two shortcut arcs: n - 1 + 1 + 2 = n + 2, against optimum 5.
  for (int n = 4; n <= 10; ++n) {
    const Digraph g = fixtures::extended_ladder(n);
    const Extension e = greedy_heuristic(g);
    REQUIRE(is_extension(g, e));
    CHECK(scanwidth_of_extension(g, e).value == n + 2);
  }
  Rng rng(1313);
  for (int round = 0; round < 30; ++round) {
    const Digraph g = oracles::random_dag(rng, 3 + static_cast<int>(rng.below(8)), round % 2 == 1);
    const Extension e = greedy_heuristic(g);
    REQUIRE(is_extension(g, e));
    CHECK(scanwidth_of_extension(g, e).value >= brute_force(g, 11).value);
  }
}

TEST_CASE("annealing never worsens its start and stays deterministic per seed") {
  Rng rng(1414);
  for (int round = 0; round < 15; ++round) {
    const Digraph g = oracles::random_dag(rng, 5 + static_cast<int>(rng.below(6)), round % 2 == 1);
    const Extension start = greedy_heuristic(g);
    SaConfig cfg;
    cfg.seed = 99 + static_cast<std::uint64_t>(round);
    cfg.max_total_steps = 2000;
    const Extension once = simulated_annealing(g, start, cfg);
    const Extension twice = simulated_annealing(g, start, cfg);
    CHECK(once.order == twice.order);
    REQUIRE(is_extension(g, once));
    CHECK(scanwidth_of_extension(g, once).value <= scanwidth_of_extension(g, start).value);
  }
}

TEST_CASE("annealing recovers the optimum on the splitting fixture") {
  const Digraph g = fixtures::cutsplit_example();
  const Extension start = cut_split_heuristic(g);
  SaConfig cfg;
  cfg.seed = 7;
  const Extension refined = simulated_annealing(g, start, cfg);
  CHECK(scanwidth_of_extension(g, refined).value == 5);
}

TEST_CASE("annealing handles budgets and rejects bad input") {
  const Digraph g = fixtures::ladder(4);
  const Extension start = greedy_heuristic(g);
  SaConfig cfg;
  SUBCASE("a zero budget returns the start unchanged") {
    cfg.max_total_steps = 0;
    CHECK(simulated_annealing(g, start, cfg).order == start.order);
  }
  SUBCASE("a non-extension start is refused") {
    Extension bad = start;
    std::reverse(bad.order.begin(), bad.order.end());
    CHECK_THROWS_AS(simulated_annealing(g, bad, cfg), NotAnExtension);
  }
  SUBCASE("cooling must shrink the temperature") {
    cfg.cooling_factor = 1.0;
    CHECK_THROWS_AS(simulated_annealing(g, start, cfg), std::invalid_argument);
  }
}
