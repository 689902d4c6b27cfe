#pragma once

// Instance reduction: block decomposition and vertex suppression.
//
// The scanwidth of a weakly connected DAG is the maximum over its s-blocks —
// the biconnected components of the underlying undirected graph after adding
// a virtual clique over the roots. Each block can be laid out independently
// and the layouts spliced back together: a pendant block hangs off the rest
// by a single shared vertex, which is also the unique root of the block's
// induced subgraph, so its layout (minus that shared vertex) can simply be
// prepended.
//
// Inside a block, vertices with in-degree 1 and out-degree 1 are suppressed
// (bypassed by an arc from parent to child) as long as that creates no
// parallel arc; this preserves the optimal value and the log allows exact
// reinsertion into any extension of the reduced block.

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "scanwidth/digraph.hpp"
#include "scanwidth/layouts.hpp"

namespace scanwidth {

struct MissingBlockSolution : std::runtime_error {
  explicit MissingBlockSolution(const std::string& what) : std::runtime_error(what) {}
};

// --------------------------------------------------------------------------
// s-blocks
// --------------------------------------------------------------------------

// Vertex sets of the s-blocks of g: biconnected components of the underlying
// undirected graph plus a virtual clique over the roots. Blocks are returned
// in a deterministic order (by DFS discovery from ascending start ids). For
// a single-vertex graph the lone vertex forms one block.
inline std::vector<VertexSet> sblocks(const Digraph& g) {
  const int n = g.vertex_count();
  std::vector<VertexSet> blocks;
  if (n == 0) return blocks;
  if (n == 1) {
    blocks.push_back(VertexSet::full(1));
    return blocks;
  }

  // Undirected edge list: one edge per arc, plus the root clique.
  std::vector<std::pair<int, int>> edges;
  for (const auto& a : g.arcs()) edges.emplace_back(a.tail, a.head);
  const std::vector<int> root_ids = roots(g).to_vector();
  for (std::size_t i = 0; i < root_ids.size(); ++i)
    for (std::size_t j = i + 1; j < root_ids.size(); ++j)
      edges.emplace_back(root_ids[i], root_ids[j]);

  std::vector<std::vector<std::pair<int, int>>> adj(static_cast<std::size_t>(n));
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
    adj[static_cast<std::size_t>(edges[static_cast<std::size_t>(e)].first)].emplace_back(
        e, edges[static_cast<std::size_t>(e)].second);
    adj[static_cast<std::size_t>(edges[static_cast<std::size_t>(e)].second)].emplace_back(
        e, edges[static_cast<std::size_t>(e)].first);
  }

  // Iterative Tarjan: discovery/low-link over a DFS with an edge stack; a
  // block is popped whenever a child subtree cannot reach above its parent.
  std::vector<int> disc(static_cast<std::size_t>(n), -1);
  std::vector<int> low(static_cast<std::size_t>(n), 0);
  std::vector<int> edge_stack;
  int timer = 0;

  struct Frame {
    int v;
    int via_edge;  // edge used to enter v, -1 for DFS roots
    std::size_t next = 0;
  };

  auto emit_block = [&](int up_to_edge) {
    VertexSet block(n);
    for (;;) {
      const int e = edge_stack.back();
      edge_stack.pop_back();
      block.insert(edges[static_cast<std::size_t>(e)].first);
      block.insert(edges[static_cast<std::size_t>(e)].second);
      if (e == up_to_edge) break;
    }
    blocks.push_back(std::move(block));
  };

  std::vector<Frame> stack;
  for (int s = 0; s < n; ++s) {
    if (disc[static_cast<std::size_t>(s)] != -1) continue;
    disc[static_cast<std::size_t>(s)] = low[static_cast<std::size_t>(s)] = timer++;
    stack.push_back(Frame{s, -1});
    while (!stack.empty()) {
      Frame& f = stack.back();
      if (f.next < adj[static_cast<std::size_t>(f.v)].size()) {
        const auto [e, w] = adj[static_cast<std::size_t>(f.v)][f.next++];
        if (e == f.via_edge) continue;
        if (disc[static_cast<std::size_t>(w)] == -1) {
          edge_stack.push_back(e);
          disc[static_cast<std::size_t>(w)] = low[static_cast<std::size_t>(w)] = timer++;
          stack.push_back(Frame{w, e});
        } else if (disc[static_cast<std::size_t>(w)] < disc[static_cast<std::size_t>(f.v)]) {
          edge_stack.push_back(e);
          low[static_cast<std::size_t>(f.v)] =
              std::min(low[static_cast<std::size_t>(f.v)], disc[static_cast<std::size_t>(w)]);
        }
      } else {
        const Frame finished = f;
        stack.pop_back();
        if (!stack.empty()) {
          Frame& parent = stack.back();
          low[static_cast<std::size_t>(parent.v)] = std::min(
              low[static_cast<std::size_t>(parent.v)], low[static_cast<std::size_t>(finished.v)]);
          if (low[static_cast<std::size_t>(finished.v)] >=
              disc[static_cast<std::size_t>(parent.v)])
            emit_block(finished.via_edge);
        }
      }
    }
  }
  return blocks;
}

// Reticulation arcs of a block, counted as arcs (not weights): the sum over
// block vertices of max(0, in-degree within the block - 1).
inline int block_reticulation_count(const Digraph& g, const VertexSet& block) {
  int total = 0;
  block.for_each([&](int v) {
    int din = 0;
    for (int idx : g.in_arcs(v))
      if (block.contains(g.arc(idx).tail)) ++din;
    total += std::max(0, din - 1);
  });
  return total;
}

// Level of a DAG: the maximum reticulation count over its s-blocks.
inline int level(const Digraph& g) {
  int best = 0;
  for (const auto& block : sblocks(g))
    best = std::max(best, block_reticulation_count(g, block));
  return best;
}

// Size guarantee for a suppressed block of a network whose block
// reticulation count is k: at most 4k-1 vertices and 5k-2 arcs.
inline bool check_level_size_bound(const Digraph& reduced_block, int k) {
  return reduced_block.vertex_count() <= 4 * k - 1 && reduced_block.arc_count() <= 5 * k - 2;
}

// --------------------------------------------------------------------------
// Suppression
// --------------------------------------------------------------------------

// One suppression event: vertex v (with unique parent u and unique child w)
// was removed and bridged by the arc u->w. Ids refer to the graph suppress()
// was called on.
struct SuppressionEntry {
  int v = -1;
  int u = -1;
  int w = -1;
  weight_t weight = 1;
};

struct SuppressResult {
  Digraph graph;                       // compacted surviving graph
  std::vector<int> kept_to_input;      // surviving id -> input id
  std::vector<SuppressionEntry> log;   // in application order, input ids
};

// Exhaustively suppresses vertices with in-degree 1 and out-degree 1 whose
// bypass arc u->w does not already exist (and whose two incident arcs carry
// equal weight, which keeps the optimum unchanged on weighted graphs; on
// unit-weight graphs the condition is vacuous). Candidates are processed in
// ascending id order; a suppression re-queues the two endpoints it touched.
inline SuppressResult suppress(const Digraph& g) {
  const int n = g.vertex_count();
  std::vector<std::map<int, weight_t>> out(static_cast<std::size_t>(n)),
      in(static_cast<std::size_t>(n));
  for (const auto& a : g.arcs()) {
    out[static_cast<std::size_t>(a.tail)][a.head] = a.weight;
    in[static_cast<std::size_t>(a.head)][a.tail] = a.weight;
  }
  std::vector<char> alive(static_cast<std::size_t>(n), 1);

  SuppressResult res;
  std::vector<char> queued(static_cast<std::size_t>(n), 1);
  std::vector<int> worklist(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) worklist[static_cast<std::size_t>(v)] = n - 1 - v;  // pop ascending

  while (!worklist.empty()) {
    const int v = worklist.back();
    worklist.pop_back();
    queued[static_cast<std::size_t>(v)] = 0;
    if (!alive[static_cast<std::size_t>(v)]) continue;
    auto& vin = in[static_cast<std::size_t>(v)];
    auto& vout = out[static_cast<std::size_t>(v)];
    if (vin.size() != 1 || vout.size() != 1) continue;
    const auto [u, wu] = *vin.begin();
    const auto [w, ww] = *vout.begin();
    if (u == w || wu != ww) continue;
    if (out[static_cast<std::size_t>(u)].count(w) != 0) continue;  // would merge arcs

    // Bypass v.
    out[static_cast<std::size_t>(u)].erase(v);
    in[static_cast<std::size_t>(w)].erase(v);
    out[static_cast<std::size_t>(u)][w] = wu;
    in[static_cast<std::size_t>(w)][u] = wu;
    vin.clear();
    vout.clear();
    alive[static_cast<std::size_t>(v)] = 0;
    res.log.push_back(SuppressionEntry{v, u, w, wu});
    for (int touched : {u, w}) {
      if (!queued[static_cast<std::size_t>(touched)]) {
        queued[static_cast<std::size_t>(touched)] = 1;
        worklist.push_back(touched);
      }
    }
  }

  std::vector<int> input_to_kept(static_cast<std::size_t>(n), -1);
  for (int v = 0; v < n; ++v) {
    if (!alive[static_cast<std::size_t>(v)]) continue;
    input_to_kept[static_cast<std::size_t>(v)] = res.graph.add_vertex(g.label(v));
    res.kept_to_input.push_back(v);
  }
  for (int v = 0; v < n; ++v) {
    if (!alive[static_cast<std::size_t>(v)]) continue;
    for (const auto& [head, weight] : out[static_cast<std::size_t>(v)])
      res.graph.add_arc(input_to_kept[static_cast<std::size_t>(v)],
                        input_to_kept[static_cast<std::size_t>(head)], weight);
  }
  return res;
}

// --------------------------------------------------------------------------
// Decomposition plan and reassembly
// --------------------------------------------------------------------------

enum class SBlockKind { single_arc, rooted_cycle, general };

struct SBlock {
  VertexSet vertices;  // in the original graph's id space
  SBlockKind kind = SBlockKind::general;
  // Populated for general blocks only: the induced block graph (local ids in
  // ascending original-id order) and its suppressed form.
  Digraph block_graph;
  std::vector<int> local_to_g;
  SuppressResult reduced;
};

struct DecompositionPlan {
  int n = 0;
  std::vector<SBlock> blocks;
  // Blocks in splice order. All but the last are pendant at the time they
  // are peeled; drop_vertex holds the shared vertex each peeled block leaves
  // behind (-1 for the final block, which keeps all its vertices).
  std::vector<int> peel_order;
  std::vector<int> drop_vertex;
};

namespace detail {

inline Digraph induced_subgraph(const Digraph& g, const VertexSet& vertices,
                                std::vector<int>& local_to_g) {
  Digraph sub;
  local_to_g = vertices.to_vector();
  std::vector<int> g_to_local(static_cast<std::size_t>(g.vertex_count()), -1);
  for (int local = 0; local < static_cast<int>(local_to_g.size()); ++local) {
    g_to_local[static_cast<std::size_t>(local_to_g[static_cast<std::size_t>(local)])] = local;
    sub.add_vertex(g.label(local_to_g[static_cast<std::size_t>(local)]));
  }
  for (const auto& a : g.arcs())
    if (vertices.contains(a.tail) && vertices.contains(a.head))
      sub.add_arc(g_to_local[static_cast<std::size_t>(a.tail)],
                  g_to_local[static_cast<std::size_t>(a.head)], a.weight);
  return sub;
}

inline SBlockKind classify_block(const Digraph& g, const VertexSet& block) {
  const int size = block.size();
  int arc_count = 0;
  bool all_unit = true;
  std::vector<int> undirected_degree(static_cast<std::size_t>(g.vertex_count()), 0);
  for (const auto& a : g.arcs()) {
    if (!block.contains(a.tail) || !block.contains(a.head)) continue;
    ++arc_count;
    if (a.weight != 1) all_unit = false;
    ++undirected_degree[static_cast<std::size_t>(a.tail)];
    ++undirected_degree[static_cast<std::size_t>(a.head)];
  }
  if (size == 2 && arc_count == 1) return SBlockKind::single_arc;
  bool is_cycle = arc_count == size && size >= 3;
  if (is_cycle)
    block.for_each([&](int v) {
      if (undirected_degree[static_cast<std::size_t>(v)] != 2) is_cycle = false;
    });
  if (is_cycle && all_unit && roots(g, block).size() == 1) return SBlockKind::rooted_cycle;
  return SBlockKind::general;
}

}  // namespace detail

// Splits g into its s-blocks, classifies each (single arc / unit-weight
// cycle with a unique root / general), suppresses the general ones, and
// fixes the splice order: repeatedly peel the lowest-indexed block that (a)
// shares only one vertex with the still-alive rest and (b) has no root of g
// strictly inside — which makes the shared vertex the unique root of the
// block's induced subgraph, i.e. the last element of any of its extensions.
inline DecompositionPlan decompose(const Digraph& g) {
  const int n = g.vertex_count();
  DecompositionPlan plan;
  plan.n = n;
  if (n == 0) return plan;

  for (auto& vertices : sblocks(g)) {
    SBlock block;
    block.kind = detail::classify_block(g, vertices);
    if (block.kind == SBlockKind::general) {
      block.block_graph = detail::induced_subgraph(g, vertices, block.local_to_g);
      block.reduced = suppress(block.block_graph);
    }
    block.vertices = std::move(vertices);
    plan.blocks.push_back(std::move(block));
  }

  const int block_count = static_cast<int>(plan.blocks.size());
  const VertexSet g_roots = roots(g);
  // alive_count[v] = number of alive blocks containing v; a block is pendant
  // when exactly one of its vertices is still shared.
  std::vector<int> alive_count(static_cast<std::size_t>(n), 0);
  for (const auto& block : plan.blocks)
    block.vertices.for_each([&](int v) { ++alive_count[static_cast<std::size_t>(v)]; });
  std::vector<char> alive(static_cast<std::size_t>(block_count), 1);

  int remaining = block_count;
  while (remaining > 1) {
    int chosen = -1;
    int chosen_cut = -1;
    for (int b = 0; b < block_count && chosen < 0; ++b) {
      if (!alive[static_cast<std::size_t>(b)]) continue;
      int shared = -1;
      int shared_count = 0;
      bool root_inside = false;
      plan.blocks[static_cast<std::size_t>(b)].vertices.for_each([&](int v) {
        if (alive_count[static_cast<std::size_t>(v)] >= 2) {
          ++shared_count;
          shared = v;
        } else if (g_roots.contains(v)) {
          root_inside = true;
        }
      });
      if (shared_count == 1 && !root_inside) {
        chosen = b;
        chosen_cut = shared;
      }
    }
    if (chosen < 0)
      throw std::logic_error("decompose: no pendant block found (input not weakly connected?)");
    plan.peel_order.push_back(chosen);
    plan.drop_vertex.push_back(chosen_cut);
    alive[static_cast<std::size_t>(chosen)] = 0;
    plan.blocks[static_cast<std::size_t>(chosen)].vertices.for_each(
        [&](int v) { --alive_count[static_cast<std::size_t>(v)]; });
    --remaining;
  }
  for (int b = 0; b < block_count; ++b) {
    if (alive[static_cast<std::size_t>(b)]) {
      plan.peel_order.push_back(b);
      plan.drop_vertex.push_back(-1);
    }
  }
  return plan;
}

// Splices per-block layouts into one extension of g. `general_extensions[b]`
// must hold an extension of plan.blocks[b].reduced.graph for every general
// block; single arcs and rooted cycles are laid out directly. Suppressed
// vertices are reinserted immediately after their child, undoing the log in
// reverse order.
inline Extension reassemble(const Digraph& g, const DecompositionPlan& plan,
                            const std::vector<std::optional<Extension>>& general_extensions) {
  if (general_extensions.size() != plan.blocks.size())
    throw MissingBlockSolution("reassemble: one (optional) extension per block expected");

  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(plan.n));
  for (std::size_t i = 0; i < plan.peel_order.size(); ++i) {
    const int b = plan.peel_order[i];
    const SBlock& block = plan.blocks[static_cast<std::size_t>(b)];
    std::vector<int> block_order;
    switch (block.kind) {
      case SBlockKind::single_arc: {
        for (const auto& a : g.arcs())
          if (block.vertices.contains(a.tail) && block.vertices.contains(a.head))
            block_order = {a.head, a.tail};
        break;
      }
      case SBlockKind::rooted_cycle: {
        block_order = reverse_bfs_order(g, block.vertices);
        break;
      }
      case SBlockKind::general: {
        const auto& maybe = general_extensions[static_cast<std::size_t>(b)];
        if (!maybe.has_value())
          throw MissingBlockSolution("reassemble: no extension supplied for general block " +
                                     std::to_string(b));
        if (!is_extension(block.reduced.graph, *maybe))
          throw MissingBlockSolution("reassemble: supplied order is not an extension of the "
                                     "reduced graph of block " +
                                     std::to_string(b));
        // Reduced ids -> block-local ids, then reinsert suppressed vertices.
        for (int v : maybe->order)
          block_order.push_back(block.reduced.kept_to_input[static_cast<std::size_t>(v)]);
        for (auto it = block.reduced.log.rbegin(); it != block.reduced.log.rend(); ++it) {
          const auto pos = std::find(block_order.begin(), block_order.end(), it->w);
          if (pos == block_order.end())
            throw std::logic_error("reassemble: suppressed vertex's child missing");
          block_order.insert(pos + 1, it->v);
        }
        // Block-local ids -> g ids.
        for (int& v : block_order) v = block.local_to_g[static_cast<std::size_t>(v)];
        break;
      }
    }
    const int drop = plan.drop_vertex[i];
    if (drop != -1) {
      if (block_order.empty() || block_order.back() != drop)
        throw std::logic_error("reassemble: peeled block does not end at its shared vertex");
      block_order.pop_back();
    }
    order.insert(order.end(), block_order.begin(), block_order.end());
  }

  Extension result{std::move(order)};
  if (!is_extension(g, result))
    throw std::logic_error("reassemble: spliced order is not an extension of the input");
  return result;
}

}  // namespace scanwidth
