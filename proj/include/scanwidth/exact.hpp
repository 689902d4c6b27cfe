#pragma once

// Exact scanwidth solvers.
//
// Three independent algorithms, deliberately kept apart so they can serve as
// cross-checks for one another:
//   - brute_force: branch-and-bound over all extensions (small graphs only);
//   - recursive_solve: divide and conquer that repeatedly splits the "window"
//     of an ordered partition in half along a sinkset, polynomial space;
//   - dp_solve: dynamic programming over weakly connected sinksets with a
//     feasibility threshold k, iterated k = lb, lb+1, ... until feasible
//     (the memo table is shared across thresholds).
// fpt_level_solve wires the DP together with the block decomposition from
// reduce.hpp, which is what makes it practical on rooted networks.
//
// All solvers poll a cooperative Deadline and abort by throwing TimeoutError
// carrying the best lower bound proven so far.

#include <algorithm>
#include <cassert>
#include <chrono>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "scanwidth/digraph.hpp"
#include "scanwidth/layouts.hpp"
#include "scanwidth/reduce.hpp"

namespace scanwidth {

struct TooLarge : std::runtime_error {
  explicit TooLarge(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidPartition : std::runtime_error {
  explicit InvalidPartition(const std::string& what) : std::runtime_error(what) {}
};

struct NotANetwork : std::runtime_error {
  explicit NotANetwork(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a cooperative deadline expires. `lower_bound` is the largest
// scanwidth value the aborted computation had already ruled out plus one
// (0 when nothing was proven).
struct TimeoutError : std::runtime_error {
  explicit TimeoutError(weight_t lb)
      : std::runtime_error("solver deadline expired (proven lower bound " +
                           std::to_string(lb) + ")"),
        lower_bound(lb) {}
  weight_t lower_bound = 0;
};

// Cooperative deadline. `expired` is cheap enough to poll from inner loops:
// it only consults the clock every 256th call.
class Deadline {
 public:
  Deadline() = default;

  static Deadline never() { return Deadline(); }

  static Deadline after(double seconds) {
    Deadline d;
    d.armed_ = true;
    d.at_ = std::chrono::steady_clock::now() +
            std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                std::chrono::duration<double>(seconds));
    return d;
  }

  bool armed() const { return armed_; }

  bool expired() const {
    if (!armed_) return false;
    // Consult the clock on the first poll (so an already-expired deadline
    // takes effect immediately) and every 256th poll thereafter.
    if (poll_count_++ % 256 != 0) return false;
    return std::chrono::steady_clock::now() >= at_;
  }

  // Unconditional clock check (for per-phase boundaries).
  bool expired_now() const {
    return armed_ && std::chrono::steady_clock::now() >= at_;
  }

 private:
  bool armed_ = false;
  std::chrono::steady_clock::time_point at_{};
  mutable std::uint64_t poll_count_ = 0;
};

struct SolveOutcome {
  weight_t value = 0;
  Extension extension;
};

// --------------------------------------------------------------------------
// Ordered partitions and the partial scanwidth they induce.
// --------------------------------------------------------------------------

// (left, window, right): left is already placed, the window is being ordered,
// right comes later.
struct OrderedPartition3 {
  VertexSet left, window, right;
};

// Evaluates the window of an ordered partition: position j of the window
// records the arcs entering the placed weak component of the j-th window
// vertex, where "placed" is left plus the first j window vertices. The
// maximum over the window positions is returned. The relative order inside
// `left` does not matter for these positions, which is what makes the value
// well defined.
inline weight_t partial_scanwidth(const Digraph& g, const OrderedPartition3& p,
                                  const std::vector<int>& window_order) {
  const int n = g.vertex_count();
  if (p.left.capacity() != n || p.window.capacity() != n || p.right.capacity() != n)
    throw InvalidPartition("partial_scanwidth: partition capacity mismatch");
  if (p.left.intersects(p.window) || p.left.intersects(p.right) || p.window.intersects(p.right))
    throw InvalidPartition("partial_scanwidth: parts overlap");
  if ((p.left | p.window | p.right) != VertexSet::full(n))
    throw InvalidPartition("partial_scanwidth: parts do not cover the graph");
  VertexSet seen(n);
  for (int v : window_order) {
    if (!p.window.contains(v) || seen.contains(v))
      throw InvalidPartition("partial_scanwidth: order is not a permutation of the window");
    seen.insert(v);
  }
  if (seen != p.window)
    throw InvalidPartition("partial_scanwidth: order does not cover the window");

  weight_t best = 0;
  VertexSet placed = p.left;
  for (int v : window_order) {
    placed.insert(v);
    VertexSet comp(n);
    for (const auto& c : weakly_connected_components(g, placed))
      if (c.contains(v)) {
        comp = c;
        break;
      }
    best = std::max(best, indegree_of_set(g, comp));
  }
  return best;
}

// --------------------------------------------------------------------------
// Brute force (branch and bound over extensions).
// --------------------------------------------------------------------------

// Exhausts all extensions by growing them left to right; a partial layout is
// abandoned once its running maximum reaches the best complete value found
// so far (any completion could only be as bad). Deterministic: candidates are
// tried in ascending id order, ties keep the first minimum.
inline SolveOutcome brute_force(const Digraph& g, int cap = 10,
                                const Deadline& deadline = Deadline::never()) {
  const int n = g.vertex_count();
  if (n > cap)
    throw TooLarge("brute_force: " + std::to_string(n) + " vertices exceeds the cap of " +
                   std::to_string(cap));
  if (n == 0) return SolveOutcome{0, Extension{}};

  // Seed the bound with a valid extension so pruning can bite immediately.
  Extension seed = reverse_bfs_extension(g);
  weight_t best = scanwidth_of_extension(g, seed).value;
  std::vector<int> best_order = seed.order;

  // Placed-prefix state: per weak component of the placed subgraph, its
  // vertex set (as a mask; cap <= 64 is enforced above via the solver cap
  // being small) and its open in-weight from unplaced vertices.
  static_assert(sizeof(std::uint64_t) * 8 >= 64);
  if (n > 64) throw TooLarge("brute_force: more than 64 vertices");
  struct Comp {
    std::uint64_t mask;
    weight_t open;
  };

  // Remaining out-degree within the unplaced side: a vertex becomes placeable
  // once all heads of its out-arcs are placed.
  std::vector<int> pending_out(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) pending_out[static_cast<std::size_t>(v)] = g.out_degree(v);

  std::vector<int> prefix;
  prefix.reserve(static_cast<std::size_t>(n));

  struct Searcher {
    const Digraph& g;
    const Deadline& deadline;
    int n;
    weight_t best;
    std::vector<int>& best_order;
    std::vector<int>& prefix;
    std::vector<int>& pending_out;

    void dfs(std::uint64_t placed, const std::vector<Comp>& comps, weight_t running_max) {
      if (deadline.expired()) throw TimeoutError(0);
      if (static_cast<int>(prefix.size()) == n) {
        if (running_max < best) {
          best = running_max;
          best_order = prefix;
        }
        return;
      }
      for (int v = 0; v < n; ++v) {
        if ((placed >> v) & 1ULL) continue;
        if (pending_out[static_cast<std::size_t>(v)] != 0) continue;

        // Merge v with the components its out-arcs lead into.
        Comp merged{1ULL << v, g.in_weight(v)};
        std::vector<Comp> next;
        next.reserve(comps.size() + 1);
        for (const auto& c : comps) {
          bool touches = false;
          weight_t closed = 0;
          for (int idx : g.out_arcs(v)) {
            const Arc& a = g.arc(idx);
            if ((c.mask >> a.head) & 1ULL) {
              touches = true;
              closed += a.weight;
            }
          }
          if (touches) {
            merged.mask |= c.mask;
            merged.open += c.open - closed;
          } else {
            next.push_back(c);
          }
        }
        next.push_back(merged);
        const weight_t here = merged.open;
        const weight_t new_max = std::max(running_max, here);
        if (new_max >= best) continue;  // bound: completions only get worse

        prefix.push_back(v);
        for (int idx : g.in_arcs(v)) --pending_out[static_cast<std::size_t>(g.arc(idx).tail)];
        dfs(placed | (1ULL << v), next, new_max);
        for (int idx : g.in_arcs(v)) ++pending_out[static_cast<std::size_t>(g.arc(idx).tail)];
        prefix.pop_back();
      }
    }
  };

  Searcher searcher{g, deadline, n, best, best_order, prefix, pending_out};
  searcher.dfs(0, {}, 0);
  return SolveOutcome{searcher.best, Extension{std::move(best_order)}};
}

// --------------------------------------------------------------------------
// Recursive halving.
// --------------------------------------------------------------------------

namespace detail {

// Enumerates the sinksets of G[window] of exactly `target` vertices, calling
// `emit` with each as a VertexSet. Sinksets are exactly the sets closed
// under out-arcs, i.e. the order ideals of the successor relation; they are
// grown over a children-first topological order of G[window], so membership
// of a vertex only requires its already-decided children.
template <class Emit>
inline void enumerate_sinksets_of_size(const Digraph& g, const VertexSet& window, int target,
                                       Emit&& emit) {
  const std::vector<int> order = [&] {
    std::vector<int> topo = reverse_bfs_order(g, window);  // children-first after reversal
    return topo;
  }();
  const int w = static_cast<int>(order.size());
  VertexSet chosen(g.vertex_count());

  // Recursive include/exclude over `order`; prune when the remaining
  // positions cannot reach the target size.
  auto rec = [&](auto&& self, int i, int count) -> void {
    if (count == target) {
      emit(chosen);
      return;
    }
    if (i >= w || count + (w - i) < target) return;
    const int v = order[static_cast<std::size_t>(i)];
    // Include v if all of its children inside the window are already chosen.
    bool closed = true;
    for (int idx : g.out_arcs(v)) {
      const int h = g.arc(idx).head;
      if (window.contains(h) && !chosen.contains(h)) {
        closed = false;
        break;
      }
    }
    if (closed) {
      chosen.insert(v);
      self(self, i + 1, count + 1);
      chosen.erase(v);
    }
    self(self, i + 1, count);
  };
  rec(rec, 0, 0);
}

}  // namespace detail

// Divide and conquer: the window W of the ordered partition (L, W, R) is
// split into a sinkset W' of G[W] of half the size (placed first) and its
// complement; the value of the split is the max of the two subproblems, and
// the best split is kept. Polynomial space, no memoization.
inline SolveOutcome recursive_solve(const Digraph& g,
                                    const Deadline& deadline = Deadline::never()) {
  const int n = g.vertex_count();
  if (n == 0) return SolveOutcome{0, Extension{}};

  struct Solver {
    const Digraph& g;
    const Deadline& deadline;

    std::pair<weight_t, std::vector<int>> solve(const VertexSet& left, const VertexSet& window,
                                                const VertexSet& /*right*/) {
      if (deadline.expired()) throw TimeoutError(0);
      const int wsize = window.size();
      if (wsize == 1) {
        const int v = window.first();
        VertexSet placed = left;
        placed.insert(v);
        VertexSet comp(g.vertex_count());
        for (const auto& c : weakly_connected_components(g, placed))
          if (c.contains(v)) {
            comp = c;
            break;
          }
        return {indegree_of_set(g, comp), {v}};
      }
      const int half = wsize / 2;
      weight_t best = g.infinite_weight();
      std::vector<int> best_order;
      detail::enumerate_sinksets_of_size(g, window, half, [&](const VertexSet& first_part) {
        VertexSet second_part = window;
        second_part -= first_part;
        auto [v1, o1] = solve(left, first_part, VertexSet() /*unused*/);
        auto [v2, o2] = solve(left | first_part, second_part, VertexSet());
        const weight_t val = std::max(v1, v2);
        if (val < best) {
          best = val;
          best_order = std::move(o1);
          best_order.insert(best_order.end(), o2.begin(), o2.end());
        }
      });
      return {best, std::move(best_order)};
    }
  };

  Solver solver{g, deadline};
  auto [value, order] =
      solver.solve(VertexSet(n), g.all_vertices(), VertexSet(n));
  return SolveOutcome{value, Extension{std::move(order)}};
}

// --------------------------------------------------------------------------
// Sinkset dynamic programming with a feasibility threshold.
// --------------------------------------------------------------------------

struct DpDiagnostics {
  int final_k = 0;
  // Every distinct memoized key (a sinkset of the solved graph).
  std::vector<VertexSet> memo_keys;
};

struct DpKOutcome {
  bool feasible = false;
  weight_t value = 0;
  Extension extension;
};

namespace detail {

struct DpEntry {
  weight_t value = 0;        // exact restricted value when feasible
  bool feasible = false;
  int proven_k = 0;          // infeasible entries: threshold they were proven at
  std::vector<int> order;    // extension of G[W] when feasible
};

using DpMemo = std::unordered_map<VertexSet, DpEntry, VertexSetHash>;

struct DeadlineExpired {};

// One threshold run of the sinkset DP, explicit stack (the recursion can be
// as deep as the vertex count). Results are exchanged through the memo: a
// frame that needs a missing child entry pushes the child and retries the
// same root when it resurfaces. Entries proven infeasible are stamped with
// the threshold; a later run at a larger k recomputes them in place.
class DpCore {
 public:
  DpCore(const Digraph& g, DpMemo& memo, const Deadline& deadline)
      : g_(g), memo_(memo), deadline_(deadline), infinite_(g.infinite_weight()) {}

  const DpEntry& run(weight_t k) {
    k_ = k;
    const VertexSet all = g_.all_vertices();
    if (const DpEntry* hit = lookup(all)) return *hit;
    stack_.clear();
    push_frame(all);
    while (!stack_.empty()) {
      if (deadline_.expired()) throw DeadlineExpired{};
      step();
    }
    const DpEntry* done = lookup(all);
    assert(done != nullptr);
    return *done;
  }

 private:
  struct CompTask {
    VertexSet vertices;
    weight_t indeg = 0;
    std::vector<int> root_ids;  // ascending; empty for singleton components
    std::size_t next_root = 0;
    weight_t best = 0;
    std::vector<int> best_order;
  };

  struct Frame {
    VertexSet key;
    std::vector<CompTask> comps;
    std::size_t current = 0;
    weight_t value = 0;
    std::vector<int> order;
    bool infeasible = false;
  };

  const DpEntry* lookup(const VertexSet& key) const {
    auto it = memo_.find(key);
    if (it == memo_.end()) return nullptr;
    // Feasible values are exact and stay valid; infeasibility only holds up
    // to the threshold it was proven at.
    if (!it->second.feasible && it->second.proven_k < k_) return nullptr;
    return &it->second;
  }

  void push_frame(const VertexSet& key) {
    Frame frame;
    frame.key = key;
    for (auto& comp : weakly_connected_components(g_, key)) {
      CompTask task;
      task.indeg = indegree_of_set(g_, comp);
      task.best = infinite_;
      if (comp.size() > 1 && task.indeg <= k_) task.root_ids = roots(g_, comp).to_vector();
      task.vertices = std::move(comp);
      frame.comps.push_back(std::move(task));
    }
    stack_.push_back(std::move(frame));
  }

  void step() {
    Frame& f = stack_.back();
    while (f.current < f.comps.size()) {
      CompTask& task = f.comps[f.current];
      if (task.vertices.size() == 1) {
        if (task.indeg <= k_) {
          task.best = task.indeg;
          task.best_order = {task.vertices.first()};
        }
        if (!finish_component(f, task)) return;  // never suspends, but keep shape
        continue;
      }
      if (task.indeg > k_) {
        // Component too heavy to ever be scanned within the threshold.
        if (!finish_component(f, task)) return;
        continue;
      }
      bool suspended = false;
      while (task.next_root < task.root_ids.size()) {
        const int root = task.root_ids[task.next_root];
        VertexSet child = task.vertices;
        child.erase(root);
        if (child.empty()) {
          // |U| > 1 guarantees a non-empty child; defensive only.
          ++task.next_root;
          continue;
        }
        const DpEntry* entry = lookup(child);
        if (entry == nullptr) {
          push_frame(child);
          suspended = true;
          break;
        }
        if (entry->feasible) {
          const weight_t candidate = std::max(entry->value, task.indeg);
          if (candidate < task.best) {
            task.best = candidate;
            task.best_order = entry->order;
            task.best_order.push_back(root);
          }
        }
        ++task.next_root;
      }
      if (suspended) return;
      if (!finish_component(f, task)) return;
    }
    // All components resolved (or the frame short-circuited to infeasible).
    DpEntry entry;
    entry.proven_k = static_cast<int>(k_);
    if (f.infeasible) {
      entry.feasible = false;
      entry.value = infinite_;
    } else {
      entry.feasible = true;
      entry.value = f.value;
      entry.order = std::move(f.order);
    }
    memo_[f.key] = std::move(entry);
    stack_.pop_back();
  }

  // Folds a finished component into the frame. Returns true to continue with
  // the next component (always, in the current control flow).
  bool finish_component(Frame& f, CompTask& task) {
    if (task.best > k_) {
      // Either no root branch was feasible or the cheapest one still exceeds
      // the threshold; in both cases the whole window is infeasible at k.
      f.infeasible = true;
      f.current = f.comps.size();
      return true;
    }
    f.value = std::max(f.value, task.best);
    f.order.insert(f.order.end(), task.best_order.begin(), task.best_order.end());
    ++f.current;
    return true;
  }

  const Digraph& g_;
  DpMemo& memo_;
  const Deadline& deadline_;
  weight_t infinite_;
  weight_t k_ = 0;
  std::vector<Frame> stack_;
};

inline void snapshot_diagnostics(const DpMemo& memo, int final_k, DpDiagnostics* diag) {
  if (diag == nullptr) return;
  diag->final_k = final_k;
  diag->memo_keys.clear();
  diag->memo_keys.reserve(memo.size());
  for (const auto& [key, entry] : memo) diag->memo_keys.push_back(key);
}

}  // namespace detail

// Number of distinct memoized keys of a DP run.
inline std::size_t count_memo_entries(const DpDiagnostics& diag) {
  return diag.memo_keys.size();
}

// Single-threshold question: does g admit an extension of scanwidth <= k?
// Feasible answers carry the exact optimal value (which may be smaller than
// k) and a witnessing extension.
inline DpKOutcome dp_k_scanwidth(const Digraph& g, weight_t k,
                                 const Deadline& deadline = Deadline::never(),
                                 DpDiagnostics* diag = nullptr) {
  const int n = g.vertex_count();
  if (n == 0) return DpKOutcome{true, 0, Extension{}};
  detail::DpMemo memo;
  detail::DpCore core(g, memo, deadline);
  try {
    const detail::DpEntry& entry = core.run(k);
    detail::snapshot_diagnostics(memo, static_cast<int>(k), diag);
    if (!entry.feasible) return DpKOutcome{false, 0, Extension{}};
    return DpKOutcome{true, entry.value, Extension{entry.order}};
  } catch (const detail::DeadlineExpired&) {
    throw TimeoutError(0);
  }
}

// Iterative deepening over the threshold, starting from the weighted
// in-degree of the heaviest leaf (every extension pays that much at the
// moment the leaf is placed), sharing the memo across thresholds.
inline SolveOutcome dp_solve(const Digraph& g, const Deadline& deadline = Deadline::never(),
                             DpDiagnostics* diag = nullptr) {
  const int n = g.vertex_count();
  if (n == 0) return SolveOutcome{0, Extension{}};

  weight_t k = 1;
  leaves(g).for_each([&](int v) { k = std::max(k, g.in_weight(v)); });

  detail::DpMemo memo;
  detail::DpCore core(g, memo, deadline);
  for (;; ++k) {
    if (deadline.expired_now()) {
      detail::snapshot_diagnostics(memo, static_cast<int>(k) - 1, diag);
      throw TimeoutError(k);  // thresholds below k are already ruled out
    }
    try {
      const detail::DpEntry& entry = core.run(k);
      if (entry.feasible) {
        SolveOutcome out{entry.value, Extension{entry.order}};
        detail::snapshot_diagnostics(memo, static_cast<int>(k), diag);
        return out;
      }
    } catch (const detail::DeadlineExpired&) {
      detail::snapshot_diagnostics(memo, static_cast<int>(k) - 1, diag);
      throw TimeoutError(k);
    }
  }
}

// --------------------------------------------------------------------------
// Level-parameterized pipeline: decompose, reduce, DP per block, reassemble.
// --------------------------------------------------------------------------

// Per-block record kept for inspection: the reduced block graph the DP ran
// on and the diagnostics of that run.
struct BlockDpRun {
  Digraph reduced_graph;
  DpDiagnostics diagnostics;
};

// Exact scanwidth of a rooted network via the block decomposition: single
// arcs and rooted cycles are closed forms, every other block is suppressed
// and solved by the sinkset DP; the block layouts are reassembled into one
// extension of g whose evaluation is returned as the value.
inline SolveOutcome fpt_level_solve(const Digraph& g,
                                    const Deadline& deadline = Deadline::never(),
                                    std::vector<BlockDpRun>* block_runs = nullptr,
                                    DecompositionPlan* plan_out = nullptr) {
  std::string why;
  if (!is_rooted_network(g, &why)) throw NotANetwork("fpt_level_solve: " + why);

  DecompositionPlan plan = decompose(g);
  std::vector<std::optional<Extension>> block_exts(plan.blocks.size());
  weight_t proven_lb = 0;
  for (std::size_t b = 0; b < plan.blocks.size(); ++b) {
    const SBlock& block = plan.blocks[b];
    if (block.kind != SBlockKind::general) continue;
    try {
      DpDiagnostics diag;
      SolveOutcome sub = dp_solve(block.reduced.graph, deadline,
                                  block_runs != nullptr ? &diag : nullptr);
      proven_lb = std::max(proven_lb, sub.value);
      if (block_runs != nullptr)
        block_runs->push_back(BlockDpRun{block.reduced.graph, std::move(diag)});
      block_exts[b] = std::move(sub.extension);
    } catch (TimeoutError& t) {
      // Lower bound: the best finished block, or what the aborted run proved.
      throw TimeoutError(std::max(proven_lb, t.lower_bound));
    }
  }
  Extension full = reassemble(g, plan, block_exts);
  const weight_t value = scanwidth_of_extension(g, full).value;
  if (plan_out != nullptr) *plan_out = std::move(plan);
  return SolveOutcome{value, std::move(full)};
}

}  // namespace scanwidth
