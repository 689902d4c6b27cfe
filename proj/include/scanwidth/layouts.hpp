#pragma once

// Linear and tree layouts of a DAG, and the width measures defined on them.
//
// An *extension* lists the vertices so that every arc points backwards: the
// head of each arc appears before the tail. Position 1 therefore holds a leaf
// of the graph and the last position a root. A *tree extension* generalizes
// the idea to a rooted tree on the vertex set: every arc of the graph must
// connect tree-comparable vertices, with the tail strictly closer to the tree
// root.
//
// Three width measures are evaluated on these layouts:
//   - scanwidth: at each position, the arcs entering the placed weak
//     component of the current vertex from the unplaced side;
//   - cutwidth: at each position, all arcs crossing from unplaced to placed;
//   - a treewidth-style proxy on tree layouts: distinct tree-ancestors of v
//     adjacent (ignoring direction) to the subtree below v.
// Arc weights are summed wherever sizes are taken; the treewidth proxy
// counts distinct vertices.

#include <algorithm>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "scanwidth/digraph.hpp"

namespace scanwidth {

struct NotAnExtension : std::runtime_error {
  explicit NotAnExtension(const std::string& what) : std::runtime_error(what) {}
};

struct NotATreeExtension : std::runtime_error {
  explicit NotATreeExtension(const std::string& what) : std::runtime_error(what) {}
};

// order[i] = vertex at position i (0-based internally; the math counts from 1).
struct Extension {
  std::vector<int> order;

  // Inverse lookup: result[v] = position of vertex v.
  std::vector<int> positions(int vertex_count) const {
    std::vector<int> pos(static_cast<std::size_t>(vertex_count), -1);
    for (int i = 0; i < static_cast<int>(order.size()); ++i)
      pos[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = i;
    return pos;
  }
};

// parent[v] = tree parent of v, -1 exactly for the root.
struct TreeExtension {
  std::vector<int> parent;
  int root = -1;
};

struct WidthReport {
  weight_t value = 0;
  // Vertex at which the maximum is attained (first such position for linear
  // layouts, smallest such vertex id for tree layouts).
  int argmax_vertex = -1;
  // Present when requested. Linear layouts: sets[i] = sorted arc ids of the
  // cut recorded at position i. Tree layouts: sets[v] = sorted arc ids (or,
  // for the treewidth proxy, vertex ids) recorded at vertex v.
  std::optional<std::vector<std::vector<int>>> sets;
};

inline bool is_extension(const Digraph& g, const Extension& e) {
  const int n = g.vertex_count();
  if (static_cast<int>(e.order.size()) != n) return false;
  std::vector<int> pos(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    const int v = e.order[static_cast<std::size_t>(i)];
    if (v < 0 || v >= n || pos[static_cast<std::size_t>(v)] != -1) return false;
    pos[static_cast<std::size_t>(v)] = i;
  }
  for (const auto& a : g.arcs())
    if (pos[static_cast<std::size_t>(a.head)] > pos[static_cast<std::size_t>(a.tail)])
      return false;
  return true;
}

namespace detail {

inline void require_extension(const Digraph& g, const Extension& e, const char* who) {
  if (!is_extension(g, e))
    throw NotAnExtension(std::string(who) + ": order is not an extension of the graph");
}

// Minimal union-find over vertex ids.
class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(static_cast<std::size_t>(n)) {
    for (int v = 0; v < n; ++v) parent_[static_cast<std::size_t>(v)] = v;
  }
  int find(int v) {
    while (parent_[static_cast<std::size_t>(v)] != v) {
      parent_[static_cast<std::size_t>(v)] =
          parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(v)])];
      v = parent_[static_cast<std::size_t>(v)];
    }
    return v;
  }
  // Attaches the tree of `from` under `to` (no rank union: callers rely on
  // the representative being the one they chose).
  void redirect(int from, int to) { parent_[static_cast<std::size_t>(find(from))] = find(to); }

 private:
  std::vector<int> parent_;
};

}  // namespace detail

// Scanwidth of an extension. The fast path maintains, per weak component of
// the placed prefix, its "open" weight: total weight of arcs entering it from
// unplaced vertices. Placing v opens all of v's in-arcs and closes its
// out-arcs, then merges v with its placed neighbor components; the cut
// recorded at v's position is the open weight of its merged component.
// When `collect_sets`, the per-position arc sets are recomputed directly.
inline WidthReport scanwidth_of_extension(const Digraph& g, const Extension& e,
                                          bool collect_sets = false) {
  detail::require_extension(g, e, "scanwidth_of_extension");
  const int n = g.vertex_count();
  WidthReport report;
  report.value = 0;
  report.argmax_vertex = n > 0 ? e.order[0] : -1;

  detail::UnionFind uf(n);
  std::vector<weight_t> open(static_cast<std::size_t>(n), 0);
  std::vector<char> placed(static_cast<std::size_t>(n), 0);
  std::vector<int> head_roots;
  for (int i = 0; i < n; ++i) {
    const int v = e.order[static_cast<std::size_t>(i)];
    open[static_cast<std::size_t>(v)] = g.in_weight(v);
    head_roots.clear();
    for (int idx : g.out_arcs(v)) {
      const Arc& a = g.arc(idx);
      const int r = uf.find(a.head);
      open[static_cast<std::size_t>(r)] -= a.weight;
      head_roots.push_back(r);
    }
    std::sort(head_roots.begin(), head_roots.end());
    head_roots.erase(std::unique(head_roots.begin(), head_roots.end()), head_roots.end());
    for (int r : head_roots) {
      open[static_cast<std::size_t>(v)] += open[static_cast<std::size_t>(r)];
      uf.redirect(r, v);
    }
    placed[static_cast<std::size_t>(v)] = 1;
    const weight_t cut = open[static_cast<std::size_t>(uf.find(v))];
    if (cut > report.value) {
      report.value = cut;
      report.argmax_vertex = v;
    }
  }

  if (collect_sets) {
    std::vector<std::vector<int>> sets(static_cast<std::size_t>(n));
    VertexSet prefix(n);
    for (int i = 0; i < n; ++i) {
      prefix.insert(e.order[static_cast<std::size_t>(i)]);
      // Weak component of the current vertex within the prefix.
      VertexSet comp(n);
      for (const auto& c : weakly_connected_components(g, prefix))
        if (c.contains(e.order[static_cast<std::size_t>(i)])) comp = c;
      for (int idx = 0; idx < g.arc_count(); ++idx) {
        const Arc& a = g.arc(idx);
        if (!prefix.contains(a.tail) && comp.contains(a.head))
          sets[static_cast<std::size_t>(i)].push_back(idx);
      }
    }
    report.sets = std::move(sets);
  }
  return report;
}

// Cutwidth of an extension: at position i, *all* arcs from unplaced to
// placed. Incrementally, placing v adds its in-weight and retires its
// out-weight.
inline WidthReport cutwidth_of_extension(const Digraph& g, const Extension& e,
                                         bool collect_sets = false) {
  detail::require_extension(g, e, "cutwidth_of_extension");
  const int n = g.vertex_count();
  WidthReport report;
  report.value = 0;
  report.argmax_vertex = n > 0 ? e.order[0] : -1;
  weight_t running = 0;
  for (int i = 0; i < n; ++i) {
    const int v = e.order[static_cast<std::size_t>(i)];
    running += g.in_weight(v) - g.out_weight(v);
    if (running > report.value) {
      report.value = running;
      report.argmax_vertex = v;
    }
  }
  if (collect_sets) {
    std::vector<std::vector<int>> sets(static_cast<std::size_t>(n));
    VertexSet prefix(n);
    for (int i = 0; i < n; ++i) {
      prefix.insert(e.order[static_cast<std::size_t>(i)]);
      for (int idx = 0; idx < g.arc_count(); ++idx) {
        const Arc& a = g.arc(idx);
        if (!prefix.contains(a.tail) && prefix.contains(a.head))
          sets[static_cast<std::size_t>(i)].push_back(idx);
      }
    }
    report.sets = std::move(sets);
  }
  return report;
}

namespace detail {

// Checks tree shape (single root, parent pointers acyclic) and returns the
// depth of every vertex. Throws NotATreeExtension on malformed input.
inline std::vector<int> tree_depths(const TreeExtension& t, int n, const char* who) {
  if (static_cast<int>(t.parent.size()) != n || t.root < 0 || t.root >= n ||
      t.parent[static_cast<std::size_t>(t.root)] != -1)
    throw NotATreeExtension(std::string(who) + ": malformed tree (root/parent array)");
  std::vector<int> depth(static_cast<std::size_t>(n), -1);
  depth[static_cast<std::size_t>(t.root)] = 0;
  for (int v = 0; v < n; ++v) {
    if (depth[static_cast<std::size_t>(v)] >= 0) continue;
    // Climb to a vertex of known depth, then unwind.
    std::vector<int> chain;
    int u = v;
    while (depth[static_cast<std::size_t>(u)] < 0) {
      chain.push_back(u);
      u = t.parent[static_cast<std::size_t>(u)];
      if (u < 0 || u >= n || static_cast<int>(chain.size()) > n)
        throw NotATreeExtension(std::string(who) + ": parent pointers do not reach the root");
    }
    int d = depth[static_cast<std::size_t>(u)];
    for (auto it = chain.rbegin(); it != chain.rend(); ++it)
      depth[static_cast<std::size_t>(*it)] = ++d;
  }
  return depth;
}

}  // namespace detail

// A tree extension of g: a rooted tree on g's vertices where every arc of g
// connects comparable vertices and the tail is the strict ancestor.
inline bool is_tree_extension(const Digraph& g, const TreeExtension& t) {
  const int n = g.vertex_count();
  std::vector<int> depth;
  try {
    depth = detail::tree_depths(t, n, "is_tree_extension");
  } catch (const NotATreeExtension&) {
    return false;
  }
  for (const auto& a : g.arcs()) {
    // Climb from the head; the tail must appear strictly above it.
    int u = a.head;
    bool found = false;
    while (t.parent[static_cast<std::size_t>(u)] != -1) {
      u = t.parent[static_cast<std::size_t>(u)];
      if (u == a.tail) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

namespace detail {

inline void require_tree_extension(const Digraph& g, const TreeExtension& t, const char* who) {
  if (!is_tree_extension(g, t))
    throw NotATreeExtension(std::string(who) + ": not a tree extension of the graph");
}

// Children lists in ascending id order (deterministic traversals).
inline std::vector<std::vector<int>> children_lists(const TreeExtension& t, int n) {
  std::vector<std::vector<int>> children(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v)
    if (v != t.root) children[static_cast<std::size_t>(t.parent[static_cast<std::size_t>(v)])].push_back(v);
  return children;  // ascending by construction of the loop
}

}  // namespace detail

// Scanwidth of a tree extension: at vertex v, the arcs whose head lies in
// v's subtree (v included) and whose tail is a strict ancestor of v. Each arc
// xy charges every tree vertex on the path from y up to, but excluding, x.
inline WidthReport scanwidth_of_tree_extension(const Digraph& g, const TreeExtension& t,
                                               bool collect_sets = false) {
  detail::require_tree_extension(g, t, "scanwidth_of_tree_extension");
  const int n = g.vertex_count();
  std::vector<weight_t> load(static_cast<std::size_t>(n), 0);
  std::vector<std::vector<int>> sets;
  if (collect_sets) sets.assign(static_cast<std::size_t>(n), {});
  for (int idx = 0; idx < g.arc_count(); ++idx) {
    const Arc& a = g.arc(idx);
    for (int v = a.head; v != a.tail; v = t.parent[static_cast<std::size_t>(v)]) {
      load[static_cast<std::size_t>(v)] += a.weight;
      if (collect_sets) sets[static_cast<std::size_t>(v)].push_back(idx);
    }
  }
  WidthReport report;
  report.value = 0;
  report.argmax_vertex = n > 0 ? 0 : -1;
  for (int v = 0; v < n; ++v) {
    if (load[static_cast<std::size_t>(v)] > report.value) {
      report.value = load[static_cast<std::size_t>(v)];
      report.argmax_vertex = v;
    }
  }
  if (collect_sets) {
    for (auto& s : sets) std::sort(s.begin(), s.end());
    report.sets = std::move(sets);
  }
  return report;
}

// Treewidth-style measure of a tree layout: at vertex v, the number of
// distinct strict tree-ancestors of v adjacent (ignoring arc direction) to
// some vertex in v's subtree (v included).
inline WidthReport treewidth_of_tree_layout(const Digraph& g, const TreeExtension& t,
                                            bool collect_sets = false) {
  detail::require_tree_extension(g, t, "treewidth_of_tree_layout");
  const int n = g.vertex_count();
  const auto depth = detail::tree_depths(t, n, "treewidth_of_tree_layout");

  // subtree[v] = vertices of v's subtree, v included.
  std::vector<VertexSet> subtree(static_cast<std::size_t>(n), VertexSet(n));
  std::vector<int> by_depth(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) by_depth[static_cast<std::size_t>(v)] = v;
  std::sort(by_depth.begin(), by_depth.end(), [&](int a, int b) {
    return depth[static_cast<std::size_t>(a)] > depth[static_cast<std::size_t>(b)];
  });
  for (int v : by_depth) {
    subtree[static_cast<std::size_t>(v)].insert(v);
    if (v != t.root) {
      auto& up = subtree[static_cast<std::size_t>(t.parent[static_cast<std::size_t>(v)])];
      up |= subtree[static_cast<std::size_t>(v)];
    }
  }

  WidthReport report;
  report.value = 0;
  report.argmax_vertex = n > 0 ? 0 : -1;
  std::vector<std::vector<int>> sets;
  if (collect_sets) sets.assign(static_cast<std::size_t>(n), {});
  for (int v = 0; v < n; ++v) {
    VertexSet bag(n);
    for (const auto& a : g.arcs()) {
      const bool tail_below = subtree[static_cast<std::size_t>(v)].contains(a.tail);
      const bool head_below = subtree[static_cast<std::size_t>(v)].contains(a.head);
      if (tail_below == head_below) continue;  // fully inside or fully outside
      const int outside = tail_below ? a.head : a.tail;
      // For a valid tree extension the outside endpoint of a crossing arc is
      // necessarily a strict ancestor of v.
      bag.insert(outside);
    }
    const weight_t count = bag.size();
    if (count > report.value) {
      report.value = count;
      report.argmax_vertex = v;
    }
    if (collect_sets) sets[static_cast<std::size_t>(v)] = bag.to_vector();
  }
  if (collect_sets) report.sets = std::move(sets);
  return report;
}

// Canonical tree extension of an extension: scanning left to right, each
// vertex becomes the parent of the roots of exactly those placed weak
// components it sends an arc into. The resulting tree preserves the
// scanwidth of the extension, and its subtrees induce weakly connected
// subgraphs.
inline TreeExtension canonical_tree_extension(const Digraph& g, const Extension& e) {
  detail::require_extension(g, e, "canonical_tree_extension");
  const int n = g.vertex_count();
  if (n > 0 && static_cast<int>(weakly_connected_components(g, g.all_vertices()).size()) != 1)
    throw std::invalid_argument("canonical_tree_extension: graph must be weakly connected");

  TreeExtension t;
  t.parent.assign(static_cast<std::size_t>(n), -1);
  detail::UnionFind uf(n);
  // tree_root[r] = root of the partial tree for the placed component with
  // union-find representative r.
  std::vector<int> tree_root(static_cast<std::size_t>(n), -1);
  std::vector<int> comp_roots;
  for (int i = 0; i < n; ++i) {
    const int v = e.order[static_cast<std::size_t>(i)];
    comp_roots.clear();
    for (int idx : g.out_arcs(v)) comp_roots.push_back(uf.find(g.arc(idx).head));
    std::sort(comp_roots.begin(), comp_roots.end());
    comp_roots.erase(std::unique(comp_roots.begin(), comp_roots.end()), comp_roots.end());
    for (int r : comp_roots) {
      t.parent[static_cast<std::size_t>(tree_root[static_cast<std::size_t>(r)])] = v;
      uf.redirect(r, v);
    }
    tree_root[static_cast<std::size_t>(uf.find(v))] = v;
  }
  t.root = n > 0 ? e.order[static_cast<std::size_t>(n - 1)] : -1;
  return t;
}

// A tree extension is canonical iff every subtree induces a weakly connected
// subgraph of g.
inline bool verify_canonical(const Digraph& g, const TreeExtension& t) {
  if (!is_tree_extension(g, t)) return false;
  const int n = g.vertex_count();
  const auto depth = detail::tree_depths(t, n, "verify_canonical");
  std::vector<VertexSet> subtree(static_cast<std::size_t>(n), VertexSet(n));
  std::vector<int> by_depth(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) by_depth[static_cast<std::size_t>(v)] = v;
  std::sort(by_depth.begin(), by_depth.end(), [&](int a, int b) {
    return depth[static_cast<std::size_t>(a)] > depth[static_cast<std::size_t>(b)];
  });
  for (int v : by_depth) {
    subtree[static_cast<std::size_t>(v)].insert(v);
    if (v != t.root)
      subtree[static_cast<std::size_t>(t.parent[static_cast<std::size_t>(v)])] |=
          subtree[static_cast<std::size_t>(v)];
  }
  for (int v = 0; v < n; ++v)
    if (weakly_connected_components(g, subtree[static_cast<std::size_t>(v)]).size() != 1)
      return false;
  return true;
}

// Any linearization of a tree extension that keeps descendants first. Uses a
// breadth-first traversal from the tree root (children in ascending id
// order), reversed; ancestors sit strictly later than their descendants.
inline Extension extension_of_tree_extension(const Digraph& g, const TreeExtension& t) {
  detail::require_tree_extension(g, t, "extension_of_tree_extension");
  const int n = g.vertex_count();
  const auto children = detail::children_lists(t, n);
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(n));
  std::queue<int> queue;
  if (n > 0) queue.push(t.root);
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop();
    order.push_back(v);
    for (int c : children[static_cast<std::size_t>(v)]) queue.push(c);
  }
  std::reverse(order.begin(), order.end());
  return Extension{std::move(order)};
}

// Fallback linear layout of a DAG: level-order topological traversal from
// the roots (Kahn's algorithm, FIFO, roots seeded in ascending id order),
// reversed so that it reads as an extension. `restrict_set` limits the
// traversal to an induced subgraph; the returned ids are in g's id space.
inline std::vector<int> reverse_bfs_order(const Digraph& g, const VertexSet& restrict_set) {
  const int n = g.vertex_count();
  std::vector<int> indeg(static_cast<std::size_t>(n), 0);
  restrict_set.for_each([&](int v) {
    for (int i : g.in_arcs(v))
      if (restrict_set.contains(g.arc(i).tail)) ++indeg[static_cast<std::size_t>(v)];
  });
  std::queue<int> queue;
  restrict_set.for_each([&](int v) {
    if (indeg[static_cast<std::size_t>(v)] == 0) queue.push(v);
  });
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(restrict_set.size()));
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop();
    order.push_back(v);
    for (int i : g.out_arcs(v)) {
      const int h = g.arc(i).head;
      if (restrict_set.contains(h) && --indeg[static_cast<std::size_t>(h)] == 0) queue.push(h);
    }
  }
  if (order.size() != static_cast<std::size_t>(restrict_set.size()))
    throw std::invalid_argument("reverse_bfs_order: induced subgraph is cyclic");
  std::reverse(order.begin(), order.end());
  return order;
}

inline Extension reverse_bfs_extension(const Digraph& g) {
  return Extension{reverse_bfs_order(g, g.all_vertices())};
}

}  // namespace scanwidth
