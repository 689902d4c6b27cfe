#pragma once

// Scanwidth heuristics.
//
// cut_split_heuristic searches for a light non-trivial DAG-cut (the cuts
// that can appear as scan sets of an extension), splits the instance at it
// with a supervertex standing in for the far side, and recurses; the sink
// side is laid out first. Cuts are found by max-flow on an auxiliary graph
// whose added reverse arcs are too heavy to ever be cut, which forces the
// sink side of a finite min cut to be a sinkset.
//
// greedy_heuristic grows the extension left to right, always placing the
// currently placeable vertex that yields the smallest scan set at its own
// position.
//
// simulated_annealing perturbs an extension by swapping adjacent entries
// (swaps across an arc are rejected, keeping every visited layout a valid
// extension) under the Metropolis rule; the energy is the scanwidth with
// the total cut volume as a strictly dominated tie-breaker.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "scanwidth/digraph.hpp"
#include "scanwidth/layouts.hpp"
#include "scanwidth/rng.hpp"

namespace scanwidth {

// --------------------------------------------------------------------------
// Cuts
// --------------------------------------------------------------------------

struct StCut {
  weight_t weight = 0;
  VertexSet source_side;
  VertexSet sink_side;  // the minimal sink side: vertices still reaching t
};

// A directed cut (S, T) where T is a sinkset and the cut is minimal (no
// proper sub-cut); cut_arcs are the arc ids from S into T.
struct DagCut {
  VertexSet source_side;
  VertexSet sink_side;
  std::vector<int> cut_arcs;
  weight_t weight = 0;
  bool trivial = false;  // |S| == 1 or |T| == 1
};

namespace detail {

// Dinic max-flow over arc weights as capacities.
class FlowNetwork {
 public:
  explicit FlowNetwork(const Digraph& g) : adj_(static_cast<std::size_t>(g.vertex_count())) {
    for (const auto& a : g.arcs()) add_edge(a.tail, a.head, a.weight);
  }

  weight_t max_flow(int s, int t) {
    weight_t flow = 0;
    while (build_levels(s, t)) {
      progress_.assign(adj_.size(), 0);
      for (;;) {
        const weight_t pushed = push(s, t, kInf);
        if (pushed == 0) break;
        flow += pushed;
      }
    }
    return flow;
  }

  // Vertices that can still reach t through residual capacity (t included):
  // the sink side of the minimal min cut. Call after max_flow.
  VertexSet residual_reach_to(int t) const {
    VertexSet seen(static_cast<int>(adj_.size()));
    std::vector<int> stack{t};
    seen.insert(t);
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      // u steps to v iff the paired reverse copy of some edge v->u (i.e. the
      // residual of u->v) has capacity left.
      for (const auto& e : adj_[static_cast<std::size_t>(v)]) {
        const auto& residual_into_v = adj_[static_cast<std::size_t>(e.to)][static_cast<std::size_t>(e.rev)];
        if (residual_into_v.cap > 0 && !seen.contains(e.to)) {
          seen.insert(e.to);
          stack.push_back(e.to);
        }
      }
    }
    return seen;
  }

 private:
  static constexpr weight_t kInf = std::numeric_limits<weight_t>::max() / 4;

  struct Edge {
    int to;
    weight_t cap;
    int rev;
  };

  void add_edge(int u, int v, weight_t cap) {
    adj_[static_cast<std::size_t>(u)].push_back(
        Edge{v, cap, static_cast<int>(adj_[static_cast<std::size_t>(v)].size())});
    adj_[static_cast<std::size_t>(v)].push_back(
        Edge{u, 0, static_cast<int>(adj_[static_cast<std::size_t>(u)].size()) - 1});
  }

  bool build_levels(int s, int t) {
    level_.assign(adj_.size(), -1);
    level_[static_cast<std::size_t>(s)] = 0;
    std::vector<int> queue{s};
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      const int v = queue[qi];
      for (const auto& e : adj_[static_cast<std::size_t>(v)]) {
        if (e.cap > 0 && level_[static_cast<std::size_t>(e.to)] < 0) {
          level_[static_cast<std::size_t>(e.to)] = level_[static_cast<std::size_t>(v)] + 1;
          queue.push_back(e.to);
        }
      }
    }
    return level_[static_cast<std::size_t>(t)] >= 0;
  }

  weight_t push(int v, int t, weight_t limit) {
    if (v == t) return limit;
    for (auto& i = progress_[static_cast<std::size_t>(v)];
         i < static_cast<int>(adj_[static_cast<std::size_t>(v)].size()); ++i) {
      Edge& e = adj_[static_cast<std::size_t>(v)][static_cast<std::size_t>(i)];
      if (e.cap <= 0 || level_[static_cast<std::size_t>(e.to)] != level_[static_cast<std::size_t>(v)] + 1)
        continue;
      const weight_t pushed = push(e.to, t, std::min(limit, e.cap));
      if (pushed > 0) {
        e.cap -= pushed;
        adj_[static_cast<std::size_t>(e.to)][static_cast<std::size_t>(e.rev)].cap += pushed;
        return pushed;
      }
    }
    return 0;
  }

  std::vector<std::vector<Edge>> adj_;
  std::vector<int> level_;
  std::vector<int> progress_;
};

}  // namespace detail

// Minimum-weight s-t cut of g (arc weights as capacities), via max-flow.
// The reported sink side is the minimal one: the vertices that can still
// reach t in the residual network.
inline StCut min_st_cut(const Digraph& g, int s, int t) {
  if (s == t) throw std::invalid_argument("min_st_cut: s and t must differ");
  detail::FlowNetwork net(g);
  StCut cut;
  cut.weight = net.max_flow(s, t);
  cut.sink_side = net.residual_reach_to(t);
  cut.source_side = g.all_vertices();
  cut.source_side -= cut.sink_side;
  return cut;
}

// Lightest non-trivial DAG-cut of g, if one exists. Auxiliary construction:
// every arc gains a reverse twin of effectively infinite weight, so a finite
// min s-t cut can never cut a reverse arc and its sink side is forced to be
// closed under out-arcs. Sources s range over children of roots and sinks t
// over parents of leaves (both sides then hold at least two vertices); pairs
// where t can reach s are skipped. The first lightest pair in ascending
// (s, t) order wins; its sink side is shrunk to the weak component of t,
// which keeps the weight and makes the cut minimal.
inline std::optional<DagCut> min_nontrivial_dag_cut(const Digraph& g) {
  const int n = g.vertex_count();
  if (n < 4) return std::nullopt;  // |S|, |T| >= 2 is impossible otherwise

  const weight_t sentinel = g.infinite_weight();
  Digraph aux;
  for (int v = 0; v < n; ++v) aux.add_vertex(g.label(v));
  for (const auto& a : g.arcs()) aux.add_arc(a.tail, a.head, a.weight);
  for (const auto& a : g.arcs()) aux.add_arc(a.head, a.tail, sentinel);

  std::vector<int> source_candidates, sink_candidates;
  {
    VertexSet u_set(n), w_set(n);
    roots(g).for_each([&](int r) {
      for (int idx : g.out_arcs(r)) u_set.insert(g.arc(idx).head);
    });
    leaves(g).for_each([&](int l) {
      for (int idx : g.in_arcs(l)) w_set.insert(g.arc(idx).tail);
    });
    source_candidates = u_set.to_vector();
    sink_candidates = w_set.to_vector();
  }
  const auto desc = descendant_sets(g);

  weight_t best_weight = sentinel;
  int best_s = -1, best_t = -1;
  for (int s : source_candidates) {
    for (int t : sink_candidates) {
      if (s == t) continue;
      if (desc[static_cast<std::size_t>(t)].contains(s)) continue;  // t above s: hopeless
      const StCut cut = min_st_cut(aux, s, t);
      if (cut.weight < best_weight) {
        best_weight = cut.weight;
        best_s = s;
        best_t = t;
      }
    }
  }
  if (best_s < 0 || best_weight >= sentinel) return std::nullopt;

  const StCut cut = min_st_cut(aux, best_s, best_t);
  // The residual sink side is a sinkset of g; restricting to the weak
  // component of t keeps it a sinkset and cannot increase the weight.
  VertexSet sink_side(n);
  for (const auto& comp : weakly_connected_components(g, cut.sink_side))
    if (comp.contains(best_t)) sink_side = comp;

  DagCut result;
  result.sink_side = sink_side;
  result.source_side = g.all_vertices();
  result.source_side -= sink_side;
  for (int idx = 0; idx < g.arc_count(); ++idx) {
    const Arc& a = g.arc(idx);
    if (result.source_side.contains(a.tail) && sink_side.contains(a.head)) {
      result.cut_arcs.push_back(idx);
      result.weight += a.weight;
    }
  }
  result.trivial = result.source_side.size() < 2 || result.sink_side.size() < 2;
  return result;
}

// --------------------------------------------------------------------------
// Cut-splitting heuristic
// --------------------------------------------------------------------------

namespace detail {

// Recursive worker over an explicit subgraph; returns an order over sub ids.
inline std::vector<int> cut_split_rec(const Digraph& sub) {
  const int n = sub.vertex_count();
  std::optional<DagCut> cut;
  if (n > 3) cut = min_nontrivial_dag_cut(sub);
  if (!cut.has_value()) return reverse_bfs_order(sub, sub.all_vertices());

  // Source half: S plus a supervertex absorbing the cut arcs as a sink.
  Digraph h1;
  const std::vector<int> s_ids = cut->source_side.to_vector();
  std::vector<int> sub_to_h1(static_cast<std::size_t>(n), -1);
  for (int v : s_ids) sub_to_h1[static_cast<std::size_t>(v)] = h1.add_vertex(sub.label(v));
  const int super_sink = h1.add_vertex("");
  for (const auto& a : sub.arcs())
    if (cut->source_side.contains(a.tail) && cut->source_side.contains(a.head))
      h1.add_arc(sub_to_h1[static_cast<std::size_t>(a.tail)],
                 sub_to_h1[static_cast<std::size_t>(a.head)], a.weight);
  for (int idx : cut->cut_arcs)
    h1.add_arc(sub_to_h1[static_cast<std::size_t>(sub.arc(idx).tail)], super_sink,
               sub.arc(idx).weight);

  // Sink half: T plus a supervertex feeding the cut arcs as a root.
  Digraph h2;
  const std::vector<int> t_ids = cut->sink_side.to_vector();
  std::vector<int> sub_to_h2(static_cast<std::size_t>(n), -1);
  for (int v : t_ids) sub_to_h2[static_cast<std::size_t>(v)] = h2.add_vertex(sub.label(v));
  const int super_root = h2.add_vertex("");
  for (const auto& a : sub.arcs())
    if (cut->sink_side.contains(a.tail) && cut->sink_side.contains(a.head))
      h2.add_arc(sub_to_h2[static_cast<std::size_t>(a.tail)],
                 sub_to_h2[static_cast<std::size_t>(a.head)], a.weight);
  for (int idx : cut->cut_arcs)
    h2.add_arc(super_root, sub_to_h2[static_cast<std::size_t>(sub.arc(idx).head)],
               sub.arc(idx).weight);

  const std::vector<int> order1 = cut_split_rec(h1);
  const std::vector<int> order2 = cut_split_rec(h2);

  // Sink side first (its vertices sit below the cut), supervertices dropped.
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(n));
  for (int v : order2)
    if (v != super_root) order.push_back(t_ids[static_cast<std::size_t>(v)]);
  for (int v : order1)
    if (v != super_sink) order.push_back(s_ids[static_cast<std::size_t>(v)]);
  return order;
}

}  // namespace detail

// Repeated cut splitting: find a lightest non-trivial DAG-cut, replace each
// side's far half by a supervertex, lay out both halves recursively, and
// concatenate (sink side first). Falls back to a reverse breadth-first
// layout when no non-trivial cut exists.
inline Extension cut_split_heuristic(const Digraph& g) {
  return Extension{detail::cut_split_rec(g)};
}

// --------------------------------------------------------------------------
// Greedy
// --------------------------------------------------------------------------

// Builds the extension left to right. A vertex is placeable once all heads
// of its out-arcs are placed; the greedy step evaluates, for each placeable
// vertex, the weight of the scan set that placing it would record at its own
// position, and commits the smallest (ties: lowest id).
inline Extension greedy_heuristic(const Digraph& g) {
  const int n = g.vertex_count();
  detail::UnionFind uf(n);
  std::vector<weight_t> open(static_cast<std::size_t>(n), 0);
  std::vector<char> placed(static_cast<std::size_t>(n), 0);
  std::vector<int> pending_out(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) pending_out[static_cast<std::size_t>(v)] = g.out_degree(v);

  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(n));
  std::vector<int> seen_roots;
  for (int step = 0; step < n; ++step) {
    int chosen = -1;
    weight_t chosen_cost = 0;
    for (int v = 0; v < n; ++v) {
      if (placed[static_cast<std::size_t>(v)] || pending_out[static_cast<std::size_t>(v)] != 0)
        continue;
      weight_t cost = g.in_weight(v);
      seen_roots.clear();
      for (int idx : g.out_arcs(v)) {
        const Arc& a = g.arc(idx);
        cost -= a.weight;
        seen_roots.push_back(uf.find(a.head));
      }
      std::sort(seen_roots.begin(), seen_roots.end());
      seen_roots.erase(std::unique(seen_roots.begin(), seen_roots.end()), seen_roots.end());
      for (int r : seen_roots) cost += open[static_cast<std::size_t>(r)];
      if (chosen < 0 || cost < chosen_cost) {
        chosen = v;
        chosen_cost = cost;
      }
    }
    // Commit: same update the incremental evaluator performs.
    open[static_cast<std::size_t>(chosen)] = g.in_weight(chosen);
    seen_roots.clear();
    for (int idx : g.out_arcs(chosen)) {
      const Arc& a = g.arc(idx);
      const int r = uf.find(a.head);
      open[static_cast<std::size_t>(r)] -= a.weight;
      seen_roots.push_back(r);
    }
    std::sort(seen_roots.begin(), seen_roots.end());
    seen_roots.erase(std::unique(seen_roots.begin(), seen_roots.end()), seen_roots.end());
    for (int r : seen_roots) {
      open[static_cast<std::size_t>(chosen)] += open[static_cast<std::size_t>(r)];
      uf.redirect(r, chosen);
    }
    placed[static_cast<std::size_t>(chosen)] = 1;
    for (int idx : g.in_arcs(chosen)) --pending_out[static_cast<std::size_t>(g.arc(idx).tail)];
    order.push_back(chosen);
  }
  return Extension{std::move(order)};
}

// --------------------------------------------------------------------------
// Simulated annealing
// --------------------------------------------------------------------------

struct SaConfig {
  double initial_temperature = 0.0;     // <= 0: derived from a neighbor sample
  double cooling_factor = 0.99;
  long long steps_per_temperature = 0;  // <= 0: derived as 20 * n
  double floor_temperature = 1e-3;
  std::uint64_t seed = 0;
  long long max_total_steps = -1;       // < 0: unlimited; 0: return the start
};

namespace detail {

// Scanwidth value and total cut volume (sum of all per-position scan-set
// weights) in one pass. The volume is the annealing tie-breaker.
inline std::pair<weight_t, weight_t> scan_value_and_volume(const Digraph& g,
                                                           const std::vector<int>& order) {
  const int n = g.vertex_count();
  UnionFind uf(n);
  std::vector<weight_t> open(static_cast<std::size_t>(n), 0);
  weight_t value = 0, volume = 0;
  std::vector<int> head_roots;
  for (int v : order) {
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
    const weight_t cut = open[static_cast<std::size_t>(uf.find(v))];
    value = std::max(value, cut);
    volume += cut;
  }
  return {value, volume};
}

}  // namespace detail

// Adjacent-swap simulated annealing from a starting extension. Proposals
// swapping two consecutive vertices joined by an arc are rejected outright
// (they would flip the arc); every other proposal is evaluated from scratch
// and accepted by the Metropolis rule on the energy
//     E = scanwidth + volume / (n * total_weight + 1),
// whose second term is always < 1, so the primary objective dominates and
// the volume only breaks ties. Returns the best extension seen. Fully
// deterministic for a fixed config.
inline Extension simulated_annealing(const Digraph& g, const Extension& start,
                                     const SaConfig& cfg = SaConfig{}) {
  if (!is_extension(g, start))
    throw NotAnExtension("simulated_annealing: start order is not an extension");
  if (cfg.cooling_factor <= 0.0 || cfg.cooling_factor >= 1.0)
    throw std::invalid_argument("simulated_annealing: cooling factor must be in (0, 1)");
  const int n = g.vertex_count();
  if (n < 2 || cfg.max_total_steps == 0) return start;

  const double volume_scale =
      1.0 / (static_cast<double>(n) * static_cast<double>(g.total_weight()) + 1.0);
  auto energy_of = [&](const std::vector<int>& order) {
    const auto [value, volume] = detail::scan_value_and_volume(g, order);
    return static_cast<double>(value) + static_cast<double>(volume) * volume_scale;
  };

  Rng rng(cfg.seed);
  std::vector<int> order = start.order;
  double energy = energy_of(order);
  std::vector<int> best_order = order;
  double best_energy = energy;

  // Swapping positions i, i+1 is legal iff no arc joins the two vertices
  // (the later one can never be the head: `order` is an extension).
  auto swappable = [&](int i) {
    return !g.has_arc(order[static_cast<std::size_t>(i + 1)], order[static_cast<std::size_t>(i)]);
  };

  double temperature = cfg.initial_temperature;
  if (temperature <= 0.0) {
    // Spread of the energy deltas of 100 sampled neighbors of the start.
    std::vector<double> deltas;
    for (int draw = 0; draw < 100; ++draw) {
      const int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 1)));
      if (!swappable(i)) continue;
      std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(i + 1)]);
      deltas.push_back(energy_of(order) - energy);
      std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(i + 1)]);
    }
    double mean = 0;
    for (double d : deltas) mean += d;
    if (!deltas.empty()) mean /= static_cast<double>(deltas.size());
    double variance = 0;
    for (double d : deltas) variance += (d - mean) * (d - mean);
    if (!deltas.empty()) variance /= static_cast<double>(deltas.size());
    temperature = std::sqrt(variance);
    if (temperature <= cfg.floor_temperature) temperature = cfg.floor_temperature;
  }

  const long long batch =
      cfg.steps_per_temperature > 0 ? cfg.steps_per_temperature : 20LL * n;
  long long steps_taken = 0;
  while (temperature >= cfg.floor_temperature) {
    for (long long s = 0; s < batch; ++s) {
      if (cfg.max_total_steps >= 0 && steps_taken >= cfg.max_total_steps) break;
      ++steps_taken;
      const int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 1)));
      if (!swappable(i)) continue;
      std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(i + 1)]);
      const double candidate = energy_of(order);
      const double delta = candidate - energy;
      if (delta <= 0.0 || rng.real01() < std::exp(-delta / temperature)) {
        energy = candidate;
        if (energy < best_energy) {
          best_energy = energy;
          best_order = order;
        }
      } else {
        std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(i + 1)]);
      }
    }
    if (cfg.max_total_steps >= 0 && steps_taken >= cfg.max_total_steps) break;
    temperature *= cfg.cooling_factor;
  }
  return Extension{std::move(best_order)};
}

}  // namespace scanwidth
