#include <algorithm>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "scanwidth/digraph.hpp"
#include "scanwidth/layouts.hpp"
#include "scanwidth/rng.hpp"

using namespace scanwidth;

namespace {

// Sorted "tail head" label pairs for the arc ids in a width-report set.
std::set<std::pair<std::string, std::string>> arc_labels(const Digraph& g,
                                                         const std::vector<int>& arc_ids) {
  std::set<std::pair<std::string, std::string>> out;
  for (const int a : arc_ids) out.emplace(g.label(g.arc(a).tail), g.label(g.arc(a).head));
  return out;
}

}  // namespace

TEST_CASE("extension validity requires heads before tails") {
  const Digraph g = fixtures::running_example();
  CHECK(is_extension(g, fixtures::extension_by_labels(g, fixtures::running_sigma())));
  CHECK(is_extension(g, fixtures::extension_by_labels(g, fixtures::running_pi())));

  auto backwards = fixtures::running_sigma();
  std::reverse(backwards.begin(), backwards.end());
  CHECK_FALSE(is_extension(g, fixtures::extension_by_labels(g, backwards)));

  Extension short_order = fixtures::extension_by_labels(g, {"a", "x"});
  CHECK_FALSE(is_extension(g, short_order));

  Extension repeated = fixtures::extension_by_labels(g, fixtures::running_sigma());
  repeated.order[1] = repeated.order[0];
  CHECK_FALSE(is_extension(g, repeated));
}

TEST_CASE("the running example's layouts evaluate to their known widths") {
  const Digraph g = fixtures::running_example();
  const Extension sigma = fixtures::extension_by_labels(g, fixtures::running_sigma());
  const Extension pi = fixtures::extension_by_labels(g, fixtures::running_pi());

  const WidthReport sw = scanwidth_of_extension(g, sigma, true);
  CHECK(sw.value == 3);
  CHECK(g.label(sw.argmax_vertex) == "v");
  // At z's position only the arcs into z's own component count.
  const auto positions = sigma.positions(g.vertex_count());
  const int z_pos = positions[static_cast<std::size_t>(fixtures::id_of(g, "z"))];
  REQUIRE(sw.sets.has_value());
  CHECK(arc_labels(g, (*sw.sets)[static_cast<std::size_t>(z_pos)]) ==
        std::set<std::pair<std::string, std::string>>{{"v", "z"}, {"w", "z"}});

  CHECK(cutwidth_of_extension(g, sigma).value == 4);
  CHECK(cutwidth_of_extension(g, pi).value == 5);
  CHECK(scanwidth_of_extension(g, pi).value == oracles::naive_scanwidth(g, pi.order));
}

TEST_CASE("linear evaluators agree with literal recomputation on random graphs") {
  Rng rng(101);
  for (int round = 0; round < 60; ++round) {
    const int n = 3 + static_cast<int>(rng.below(7));
    const Digraph g = oracles::random_dag(rng, n, round % 2 == 1);
    const Extension e = reverse_bfs_extension(g);
    REQUIRE(is_extension(g, e));
    CHECK(scanwidth_of_extension(g, e).value == oracles::naive_scanwidth(g, e.order));
    CHECK(cutwidth_of_extension(g, e).value == oracles::naive_cutwidth(g, e.order));
  }
}

TEST_CASE("scan sets never outweigh cut sets at any position") {
  Rng rng(202);
  for (int round = 0; round < 40; ++round) {
    const Digraph g = oracles::random_dag(rng, 4 + static_cast<int>(rng.below(6)), round % 2 == 1);
    const Extension e = reverse_bfs_extension(g);
    const WidthReport sw = scanwidth_of_extension(g, e, true);
    const WidthReport cw = cutwidth_of_extension(g, e, true);
    REQUIRE(sw.sets.has_value());
    REQUIRE(cw.sets.has_value());
    for (std::size_t i = 0; i < sw.sets->size(); ++i) {
      weight_t scan = 0, cut = 0;
      for (const int a : (*sw.sets)[i]) scan += g.arc(a).weight;
      for (const int a : (*cw.sets)[i]) cut += g.arc(a).weight;
      CHECK(scan <= cut);
      // Every scan arc is in particular a cut arc.
      for (const int a : (*sw.sets)[i])
        CHECK(std::find((*cw.sets)[i].begin(), (*cw.sets)[i].end(), a) != (*cw.sets)[i].end());
    }
  }
}

TEST_CASE("tree extensions are recognized and evaluated") {
  const Digraph g = fixtures::running_example();
  const TreeExtension canonical =
      fixtures::tree_by_parent_labels(g, fixtures::running_canonical_parents(), "rho");
  const TreeExtension variant =
      fixtures::tree_by_parent_labels(g, fixtures::running_tree_variant_parents(), "rho");
  REQUIRE(is_tree_extension(g, canonical));
  REQUIRE(is_tree_extension(g, variant));

  const WidthReport sw_canonical = scanwidth_of_tree_extension(g, canonical, true);
  CHECK(sw_canonical.value == 3);
  CHECK(g.label(sw_canonical.argmax_vertex) == "v");
  REQUIRE(sw_canonical.sets.has_value());
  CHECK(arc_labels(g, (*sw_canonical.sets)[static_cast<std::size_t>(fixtures::id_of(g, "v"))]) ==
        std::set<std::pair<std::string, std::string>>{{"q", "v"}, {"q", "u"}, {"w", "z"}});

  const WidthReport sw_variant = scanwidth_of_tree_extension(g, variant, true);
  CHECK(sw_variant.value == 4);
  CHECK(g.label(sw_variant.argmax_vertex) == "z");
  CHECK(arc_labels(g, (*sw_variant.sets)[static_cast<std::size_t>(fixtures::id_of(g, "z"))]) ==
        std::set<std::pair<std::string, std::string>>{
            {"v", "z"}, {"w", "z"}, {"q", "u"}, {"v", "y"}});

  CHECK(oracles::naive_tree_scanwidth(g, canonical) == 3);
  CHECK(oracles::naive_tree_scanwidth(g, variant) == 4);
}

TEST_CASE("the treewidth stand-in counts distinct outside ancestors") {
  const Digraph g = fixtures::running_example();
  const TreeExtension canonical =
      fixtures::tree_by_parent_labels(g, fixtures::running_canonical_parents(), "rho");
  const WidthReport tw = treewidth_of_tree_layout(g, canonical, true);
  CHECK(tw.value == oracles::naive_tree_treewidth(g, canonical));
  CHECK(tw.value == 2);
  // At v the outside ancestors adjacent to v's subtree are q and w.
  REQUIRE(tw.sets.has_value());
  const auto& at_v = (*tw.sets)[static_cast<std::size_t>(fixtures::id_of(g, "v"))];
  std::set<std::string> labels;
  for (const int u : at_v) labels.insert(g.label(u));
  CHECK(labels == std::set<std::string>{"q", "w"});
}

TEST_CASE("a malformed parent map is rejected") {
  const Digraph g = fixtures::path(3);
  TreeExtension t;
  t.parent = {1, 2, 0};  // a cycle, no root
  t.root = 0;
  CHECK_FALSE(is_tree_extension(g, t));
  CHECK_THROWS_AS(scanwidth_of_tree_extension(g, t), NotATreeExtension);
}

TEST_CASE("canonical tree extensions match the worked example") {
  const Digraph g = fixtures::running_example();
  const Extension sigma = fixtures::extension_by_labels(g, fixtures::running_sigma());
  const TreeExtension gamma = canonical_tree_extension(g, sigma);
  const TreeExtension expected =
      fixtures::tree_by_parent_labels(g, fixtures::running_canonical_parents(), "rho");
  CHECK(gamma.parent == expected.parent);
  CHECK(gamma.root == expected.root);
  CHECK(verify_canonical(g, gamma));
  CHECK_FALSE(verify_canonical(
      g, fixtures::tree_by_parent_labels(g, fixtures::running_tree_variant_parents(), "rho")));
}

TEST_CASE("canonicalization preserves the scanwidth of the extension") {
  Rng rng(303);
  for (int round = 0; round < 50; ++round) {
    const Digraph g = oracles::random_dag(rng, 3 + static_cast<int>(rng.below(7)), round % 2 == 1);
    const Extension e = reverse_bfs_extension(g);
    const TreeExtension gamma = canonical_tree_extension(g, e);
    CHECK(verify_canonical(g, gamma));
    CHECK(scanwidth_of_tree_extension(g, gamma).value == scanwidth_of_extension(g, e).value);
    // Reading the tree back out gives an extension of the same value.
    const Extension back = extension_of_tree_extension(g, gamma);
    REQUIRE(is_extension(g, back));
    CHECK(scanwidth_of_extension(g, back).value == scanwidth_of_extension(g, e).value);
  }
}

TEST_CASE("reverse search order is a valid extension and plain reversal is not") {
  // A shallow vertex can enter a plain traversal before a deeper parent, so
  // reversing a traversal that ignores arc directions is not enough; the
  // order must drain vertices whose unplaced out-neighbors are exhausted.
  Rng rng(404);
  for (int round = 0; round < 80; ++round) {
    const Digraph g = oracles::random_dag(rng, 3 + static_cast<int>(rng.below(8)), false);
    CHECK(is_extension(g, reverse_bfs_extension(g)));
  }
  Digraph cyclic;
  for (int i = 0; i < 3; ++i) cyclic.add_vertex();
  cyclic.add_arc(0, 1);
  cyclic.add_arc(1, 2);
  cyclic.add_arc(2, 0);
  CHECK_THROWS_AS(reverse_bfs_order(cyclic, cyclic.all_vertices()), std::invalid_argument);
}
