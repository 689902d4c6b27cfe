#pragma once

// Hand-built graphs and layouts the tests check against. Values asserted on
// these fixtures were computed independently (by enumeration or by hand)
// before the solvers existed.

#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "scanwidth/digraph.hpp"
#include "scanwidth/layouts.hpp"

namespace fixtures {

using scanwidth::Digraph;
using scanwidth::Extension;
using scanwidth::TreeExtension;

inline Digraph from_arcs(std::initializer_list<std::pair<const char*, const char*>> arcs) {
  Digraph g;
  const auto vertex_of = [&](const char* label) {
    const int v = g.find_vertex(label);
    return v >= 0 ? v : g.add_vertex(label);
  };
  for (const auto& [tail, head] : arcs) g.add_arc(vertex_of(tail), vertex_of(head));
  return g;
}

inline int id_of(const Digraph& g, const std::string& label) {
  const int v = g.find_vertex(label);
  if (v < 0) throw std::logic_error("fixture has no vertex \"" + label + "\"");
  return v;
}

inline Extension extension_by_labels(const Digraph& g, const std::vector<std::string>& labels) {
  Extension e;
  for (const std::string& l : labels) e.order.push_back(id_of(g, l));
  return e;
}

inline TreeExtension tree_by_parent_labels(
    const Digraph& g, const std::vector<std::pair<std::string, std::string>>& child_parent,
    const std::string& root) {
  TreeExtension t;
  t.parent.assign(static_cast<std::size_t>(g.vertex_count()), -1);
  t.root = id_of(g, root);
  for (const auto& [child, parent] : child_parent)
    t.parent[static_cast<std::size_t>(id_of(g, child))] = id_of(g, parent);
  return t;
}

// Two binary trees glued at shared leaves; scanwidth 3.
inline Digraph double_tree() {
  return from_arcs({{"rho", "q"},
                    {"q", "u"},
                    {"u", "a"},
                    {"q", "v"},
                    {"u", "x"},
                    {"v", "x"},
                    {"x", "b"},
                    {"v", "y"},
                    {"y", "c"},
                    {"rho", "w"},
                    {"w", "y"},
                    {"w", "d"}});
}

// The 11-vertex, 12-arc network with reticulations y and z used by most of
// the layout fixtures below.
inline Digraph running_example() {
  return from_arcs({{"rho", "q"},
                    {"q", "u"},
                    {"u", "x"},
                    {"x", "a"},
                    {"q", "v"},
                    {"u", "y"},
                    {"v", "y"},
                    {"y", "b"},
                    {"v", "z"},
                    {"z", "c"},
                    {"rho", "w"},
                    {"w", "z"}});
}

// An extension of running_example() with scanwidth 3 and cutwidth 4.
inline std::vector<std::string> running_sigma() {
  return {"a", "x", "b", "y", "u", "c", "z", "v", "q", "w", "rho"};
}

// Another extension of running_example(), cutwidth 5.
inline std::vector<std::string> running_pi() {
  return {"c", "z", "a", "x", "b", "y", "u", "v", "q", "w", "rho"};
}

// The canonical tree extension of running_sigma(); scanwidth 3, attained at v.
inline std::vector<std::pair<std::string, std::string>> running_canonical_parents() {
  return {{"w", "rho"}, {"q", "w"}, {"v", "q"}, {"z", "v"}, {"c", "z"},
          {"u", "v"},   {"x", "u"}, {"a", "x"}, {"y", "u"}, {"b", "y"}};
}

// Like the canonical tree but with u re-parented under z; still a tree
// extension, no longer canonical, scanwidth 4 attained at z.
inline std::vector<std::pair<std::string, std::string>> running_tree_variant_parents() {
  return {{"w", "rho"}, {"q", "w"}, {"v", "q"}, {"z", "v"}, {"c", "z"},
          {"u", "z"},   {"x", "u"}, {"a", "x"}, {"y", "u"}, {"b", "y"}};
}

// Directed path v1 -> v2 -> ... -> vn; scanwidth 1.
inline Digraph path(int n) {
  Digraph g;
  for (int i = 1; i <= n; ++i) g.add_vertex("v" + std::to_string(i));
  for (int i = 0; i + 1 < n; ++i) g.add_arc(i, i + 1);
  return g;
}

// Two directed paths of the given interior lengths from a root to a shared
// sink; scanwidth 2.
inline Digraph rooted_cycle(int a_len, int b_len) {
  Digraph g;
  const int r = g.add_vertex("r");
  const int t_sink = g.add_vertex("t");
  int prev = r;
  for (int i = 1; i <= a_len; ++i) {
    const int v = g.add_vertex("x" + std::to_string(i));
    g.add_arc(prev, v);
    prev = v;
  }
  g.add_arc(prev, t_sink);
  prev = r;
  for (int i = 1; i <= b_len; ++i) {
    const int v = g.add_vertex("y" + std::to_string(i));
    g.add_arc(prev, v);
    prev = v;
  }
  g.add_arc(prev, t_sink);
  return g;
}

// A rooted network whose two reticulations share both parents.  Its core
// {rho, u, v, h1, h2} is one block with reticulation count 2, so the level
// solver must run its inner solver on it rather than use a closed form.
inline Digraph twin_reticulation_network() {
  Digraph g;
  const int rho = g.add_vertex("rho");
  const int u = g.add_vertex("u");
  const int v = g.add_vertex("v");
  const int h1 = g.add_vertex("h1");
  const int h2 = g.add_vertex("h2");
  const int l1 = g.add_vertex("l1");
  const int l2 = g.add_vertex("l2");
  g.add_arc(rho, u);
  g.add_arc(rho, v);
  g.add_arc(u, h1);
  g.add_arc(v, h1);
  g.add_arc(u, h2);
  g.add_arc(v, h2);
  g.add_arc(h1, l1);
  g.add_arc(h2, l2);
  return g;
}

// The ladder: rails a_i -> a_{i+1}, b_i -> b_{i+1} and rungs a_i -> b_i.
// Scanwidth 3 for n >= 3.  Not a rooted network: a_n has in- and out-degree 1
// and the sink b_n has in-degree 2, and no network vertex type allows either.
inline Digraph ladder(int n) {
  Digraph g;
  std::vector<int> a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) a[static_cast<std::size_t>(i)] = g.add_vertex("a" + std::to_string(i + 1));
  for (int i = 0; i < n; ++i) b[static_cast<std::size_t>(i)] = g.add_vertex("b" + std::to_string(i + 1));
  for (int i = 0; i + 1 < n; ++i) {
    g.add_arc(a[static_cast<std::size_t>(i)], a[static_cast<std::size_t>(i + 1)]);
    g.add_arc(b[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(i + 1)]);
  }
  for (int i = 0; i < n; ++i) g.add_arc(a[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(i)]);
  return g;
}

// The ladder plus the two chords a_1 -> a_n and a_2 -> a_n (n >= 4): a family
// where the greedy layout pays n while the optimum stays small.
inline Digraph extended_ladder(int n) {
  if (n < 4) throw std::logic_error("extended_ladder needs n >= 4");
  Digraph g = ladder(n);
  g.add_arc(fixtures::id_of(g, "a1"), fixtures::id_of(g, "a" + std::to_string(n)));
  g.add_arc(fixtures::id_of(g, "a2"), fixtures::id_of(g, "a" + std::to_string(n)));
  return g;
}

// 11-vertex DAG whose lightest non-trivial directed cut has weight 4.
inline Digraph cut_example() {
  return from_arcs({{"6", "4"},
                    {"4", "1"},
                    {"4", "2"},
                    {"4", "3"},
                    {"6", "7"},
                    {"6", "8"},
                    {"6", "9"},
                    {"3", "0"},
                    {"2", "0"},
                    {"1", "0"},
                    {"7", "5"},
                    {"8", "5"},
                    {"9", "5"},
                    {"4", "5"},
                    {"5", "0"},
                    {"5", "10"},
                    {"9", "10"}});
}

// 8-vertex DAG where splitting at the lightest cut costs one over the
// optimum: optimum 5, cut-splitting (without annealing) 6.
inline Digraph cutsplit_example() {
  return from_arcs({{"rho", "b"},
                    {"b", "d"},
                    {"rho", "f"},
                    {"rho", "a"},
                    {"a", "b"},
                    {"b", "c"},
                    {"c", "d"},
                    {"d", "g"},
                    {"rho", "d"},
                    {"a", "c"},
                    {"rho", "e"},
                    {"e", "f"},
                    {"e", "g"}});
}

// A level-1 network with one reticulation and three leaves.
inline const char* enewick_small() { return "((a,(b)#H1),(#H1,c));"; }

}  // namespace fixtures
