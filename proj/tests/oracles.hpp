#pragma once

// Independent reference implementations the library is checked against.
// Everything here recomputes from definitions with plain breadth-first
// searches and explicit enumeration; none of it shares code with the library
// algorithms under test.

#include <algorithm>
#include <optional>
#include <queue>
#include <stdexcept>
#include <vector>

#include "scanwidth/digraph.hpp"
#include "scanwidth/layouts.hpp"
#include "scanwidth/rng.hpp"

namespace oracles {

using scanwidth::Digraph;
using scanwidth::Extension;
using scanwidth::Rng;
using scanwidth::TreeExtension;
using scanwidth::VertexSet;
using scanwidth::weight_t;

// Arc ids of the scan set at position i of the order: arcs whose head lies in
// the prefix, weakly connected to order[i] within the prefix, and whose tail
// lies beyond the prefix.
inline std::vector<int> scan_set_at(const Digraph& g, const std::vector<int>& order, int i) {
  std::vector<bool> in_prefix(static_cast<std::size_t>(g.vertex_count()), false);
  for (int j = 0; j <= i; ++j) in_prefix[static_cast<std::size_t>(order[j])] = true;
  // Undirected BFS from order[i] inside the prefix.
  std::vector<bool> reached(static_cast<std::size_t>(g.vertex_count()), false);
  std::queue<int> queue;
  queue.push(order[static_cast<std::size_t>(i)]);
  reached[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = true;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop();
    for (const int a : g.out_arcs(v)) {
      const int to = g.arc(a).head;
      if (in_prefix[static_cast<std::size_t>(to)] && !reached[static_cast<std::size_t>(to)]) {
        reached[static_cast<std::size_t>(to)] = true;
        queue.push(to);
      }
    }
    for (const int a : g.in_arcs(v)) {
      const int from = g.arc(a).tail;
      if (in_prefix[static_cast<std::size_t>(from)] && !reached[static_cast<std::size_t>(from)]) {
        reached[static_cast<std::size_t>(from)] = true;
        queue.push(from);
      }
    }
  }
  std::vector<int> arcs;
  for (int a = 0; a < static_cast<int>(g.arcs().size()); ++a) {
    const auto& arc = g.arc(a);
    if (!in_prefix[static_cast<std::size_t>(arc.tail)] &&
        reached[static_cast<std::size_t>(arc.head)])
      arcs.push_back(a);
  }
  return arcs;
}

inline weight_t naive_scanwidth(const Digraph& g, const std::vector<int>& order) {
  weight_t best = 0;
  for (int i = 0; i < static_cast<int>(order.size()); ++i) {
    weight_t here = 0;
    for (const int a : scan_set_at(g, order, i)) here += g.arc(a).weight;
    best = std::max(best, here);
  }
  return best;
}

inline weight_t naive_cutwidth(const Digraph& g, const std::vector<int>& order) {
  weight_t best = 0;
  for (int i = 0; i < static_cast<int>(order.size()); ++i) {
    std::vector<bool> in_prefix(static_cast<std::size_t>(g.vertex_count()), false);
    for (int j = 0; j <= i; ++j) in_prefix[static_cast<std::size_t>(order[j])] = true;
    weight_t here = 0;
    for (const auto& arc : g.arcs())
      if (in_prefix[static_cast<std::size_t>(arc.head)] &&
          !in_prefix[static_cast<std::size_t>(arc.tail)])
        here += arc.weight;
    best = std::max(best, here);
  }
  return best;
}

namespace detail {

inline bool is_strict_tree_ancestor(const TreeExtension& t, int anc, int v) {
  int cur = t.parent[static_cast<std::size_t>(v)];
  while (cur >= 0) {
    if (cur == anc) return true;
    cur = t.parent[static_cast<std::size_t>(cur)];
  }
  return false;
}

}  // namespace detail

// Literal per-vertex evaluation: arcs whose head lies in v's subtree
// (including v) and whose tail is a strict tree ancestor of v.
inline weight_t naive_tree_scanwidth(const Digraph& g, const TreeExtension& t) {
  weight_t best = 0;
  for (int v = 0; v < g.vertex_count(); ++v) {
    weight_t here = 0;
    for (const auto& arc : g.arcs()) {
      const bool head_in_subtree = arc.head == v || detail::is_strict_tree_ancestor(t, v, arc.head);
      if (head_in_subtree && detail::is_strict_tree_ancestor(t, arc.tail, v)) here += arc.weight;
    }
    best = std::max(best, here);
  }
  return best;
}

// Literal per-vertex evaluation of the tree-layout treewidth stand-in: the
// number of distinct strict tree ancestors of v with an arc (either
// direction) into v's subtree.
inline weight_t naive_tree_treewidth(const Digraph& g, const TreeExtension& t) {
  weight_t best = 0;
  for (int v = 0; v < g.vertex_count(); ++v) {
    std::vector<bool> counted(static_cast<std::size_t>(g.vertex_count()), false);
    weight_t here = 0;
    for (const auto& arc : g.arcs()) {
      const auto in_subtree = [&](int u) {
        return u == v || detail::is_strict_tree_ancestor(t, v, u);
      };
      int outside = -1;
      if (in_subtree(arc.head) && !in_subtree(arc.tail)) outside = arc.tail;
      if (in_subtree(arc.tail) && !in_subtree(arc.head)) outside = arc.head;
      if (outside < 0) continue;
      if (!detail::is_strict_tree_ancestor(t, outside, v)) continue;
      if (!counted[static_cast<std::size_t>(outside)]) {
        counted[static_cast<std::size_t>(outside)] = true;
        ++here;
      }
    }
    best = std::max(best, here);
  }
  return best;
}

// Exhaustive minimum over all extensions, evaluated from the definition at
// every step.  Exponential; callers keep n small.
inline weight_t exhaustive_min_scanwidth(const Digraph& g) {
  const int n = g.vertex_count();
  if (n > 10) throw std::logic_error("exhaustive_min_scanwidth: graph too large");
  std::vector<int> order;
  std::vector<bool> placed(static_cast<std::size_t>(n), false);
  weight_t best = g.infinite_weight();

  const auto placeable = [&](int v) {
    if (placed[static_cast<std::size_t>(v)]) return false;
    for (const int a : g.out_arcs(v))
      if (!placed[static_cast<std::size_t>(g.arc(a).head)]) return false;
    return true;
  };
  const auto dfs = [&](auto&& self, weight_t running_max) -> void {
    if (running_max >= best) return;  // the max over a prefix never decreases
    if (static_cast<int>(order.size()) == n) {
      best = running_max;
      return;
    }
    for (int v = 0; v < n; ++v) {
      if (!placeable(v)) continue;
      order.push_back(v);
      placed[static_cast<std::size_t>(v)] = true;
      weight_t here = 0;
      for (const int a : scan_set_at(g, order, static_cast<int>(order.size()) - 1))
        here += g.arc(a).weight;
      self(self, std::max(running_max, here));
      placed[static_cast<std::size_t>(v)] = false;
      order.pop_back();
    }
  };
  dfs(dfs, 0);
  return best;
}

// Exhaustive lightest non-trivial directed cut: minimum over sinksets T with
// G[T] weakly connected and both sides of size at least two, of the weight of
// the arcs entering T.
inline std::optional<weight_t> exhaustive_min_nontrivial_cut(const Digraph& g) {
  const int n = g.vertex_count();
  if (n > 22) throw std::logic_error("exhaustive_min_nontrivial_cut: graph too large");
  std::optional<weight_t> best;
  for (std::uint64_t bits = 1; bits + 1 < (1ull << n); ++bits) {
    VertexSet t_side(n);
    for (int v = 0; v < n; ++v)
      if (bits & (1ull << v)) t_side.insert(v);
    const int size = static_cast<int>(t_side.size());
    if (size < 2 || n - size < 2) continue;
    if (!scanwidth::is_sinkset(g, t_side)) continue;
    if (scanwidth::weakly_connected_components(g, t_side).size() != 1) continue;
    weight_t w = 0;
    for (const auto& arc : g.arcs())
      if (!t_side.contains(arc.tail) && t_side.contains(arc.head)) w += arc.weight;
    if (!best || w < *best) best = w;
  }
  return best;
}

// Random weakly connected DAG, possibly with several roots: arcs are drawn
// between positions of a hidden ranking and oriented forward, rejecting
// disconnected draws.  Falls back to a chain-connected draw (single root)
// when rejection keeps failing.
inline Digraph random_dag(Rng& rng, int n, bool weighted) {
  if (n < 2) throw std::logic_error("random_dag: n must be at least 2");
  const auto weight = [&]() -> weight_t {
    return weighted ? static_cast<weight_t>(1 + rng.below(3)) : 1;
  };
  for (int attempt = 0; attempt < 200; ++attempt) {
    Digraph g;
    for (int v = 0; v < n; ++v) g.add_vertex();
    std::vector<int> rank(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) rank[static_cast<std::size_t>(v)] = v;
    for (int v = n - 1; v > 0; --v)
      std::swap(rank[static_cast<std::size_t>(v)],
                rank[static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(v + 1)))]);
    const int extra = static_cast<int>(rng.below(static_cast<std::uint64_t>(n + 1)));
    const int target_arcs = n - 1 + extra;
    for (int tries = 0; tries < 8 * target_arcs && g.arc_count() < target_arcs; ++tries) {
      int p = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
      int q = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
      if (p == q) continue;
      if (p > q) std::swap(p, q);
      const int tail = rank[static_cast<std::size_t>(p)];
      const int head = rank[static_cast<std::size_t>(q)];
      if (g.has_arc(tail, head)) continue;
      g.add_arc(tail, head, weight());
    }
    if (g.arc_count() == 0) continue;
    if (scanwidth::weakly_connected_components(g, g.all_vertices()).size() == 1) return g;
  }
  // Chain-connected fallback: position p attaches below some earlier position.
  Digraph g;
  for (int v = 0; v < n; ++v) g.add_vertex();
  for (int p = 1; p < n; ++p)
    g.add_arc(static_cast<int>(rng.below(static_cast<std::uint64_t>(p))), p, weight());
  return g;
}

// Random weakly connected DAG with a single root: every later position hooks
// under an earlier one, plus forward chords.
inline Digraph random_single_root_dag(Rng& rng, int n, bool weighted) {
  if (n < 2) throw std::logic_error("random_single_root_dag: n must be at least 2");
  const auto weight = [&]() -> weight_t {
    return weighted ? static_cast<weight_t>(1 + rng.below(3)) : 1;
  };
  Digraph g;
  for (int v = 0; v < n; ++v) g.add_vertex();
  for (int p = 1; p < n; ++p)
    g.add_arc(static_cast<int>(rng.below(static_cast<std::uint64_t>(p))), p, weight());
  const int extra = static_cast<int>(rng.below(static_cast<std::uint64_t>(n + 1)));
  for (int tries = 0; tries < 8 * extra + 1; ++tries) {
    if (extra == 0) break;
    int p = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    int q = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    if (p == q) continue;
    if (p > q) std::swap(p, q);
    if (g.has_arc(p, q)) continue;
    g.add_arc(p, q, weight());
  }
  return g;
}

}  // namespace oracles
