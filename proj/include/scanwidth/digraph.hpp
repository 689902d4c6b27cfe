#pragma once

// Core digraph representation shared by every other header in the library.
//
// Vertices are dense integer ids 0..n-1 with an attached display label; arcs
// are simple (at most one per ordered pair) and carry a positive integer
// weight, so multigraphs are represented by merged weights. All algorithms
// in the library work on weakly connected DAGs; `validate` is the gatekeeper
// that checks those properties and hands out a certified topological order.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <queue>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace scanwidth {

using weight_t = std::int64_t;

// --------------------------------------------------------------------------
// VertexSet: a fixed-capacity dynamic bitset over vertex ids.
//
// Used pervasively: induced-subgraph restrictions, DP memo keys, block
// membership. Equality and hashing are exact (whole bit pattern), which is
// what makes it safe as a memoization key.
// --------------------------------------------------------------------------
class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(int capacity)
      : capacity_(capacity), words_((capacity + 63) / 64, 0) {}

  static VertexSet full(int capacity) {
    VertexSet s(capacity);
    for (auto& w : s.words_) w = ~0ULL;
    s.mask_tail();
    return s;
  }

  static VertexSet of(int capacity, std::initializer_list<int> ids) {
    VertexSet s(capacity);
    for (int v : ids) s.insert(v);
    return s;
  }

  int capacity() const { return capacity_; }

  bool contains(int v) const {
    if (v < 0 || v >= capacity_) return false;
    return (words_[static_cast<std::size_t>(v) >> 6] >> (v & 63)) & 1ULL;
  }

  void insert(int v) {
    check_range(v);
    words_[static_cast<std::size_t>(v) >> 6] |= 1ULL << (v & 63);
  }

  void erase(int v) {
    check_range(v);
    words_[static_cast<std::size_t>(v) >> 6] &= ~(1ULL << (v & 63));
  }

  int size() const {
    int total = 0;
    for (auto w : words_) total += std::popcount(w);
    return total;
  }

  bool empty() const {
    for (auto w : words_)
      if (w) return false;
    return true;
  }

  // Smallest contained id, or -1 when empty.
  int first() const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i]) return static_cast<int>(i * 64 + std::countr_zero(words_[i]));
    return -1;
  }

  VertexSet& operator|=(const VertexSet& o) {
    require_same_capacity(o);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }

  VertexSet& operator&=(const VertexSet& o) {
    require_same_capacity(o);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }

  // Set difference.
  VertexSet& operator-=(const VertexSet& o) {
    require_same_capacity(o);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
    return *this;
  }

  friend VertexSet operator|(VertexSet a, const VertexSet& b) { return a |= b; }
  friend VertexSet operator&(VertexSet a, const VertexSet& b) { return a &= b; }
  friend VertexSet operator-(VertexSet a, const VertexSet& b) { return a -= b; }

  bool operator==(const VertexSet& o) const {
    return capacity_ == o.capacity_ && words_ == o.words_;
  }
  bool operator!=(const VertexSet& o) const { return !(*this == o); }

  bool intersects(const VertexSet& o) const {
    require_same_capacity(o);
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & o.words_[i]) return true;
    return false;
  }

  bool is_subset_of(const VertexSet& o) const {
    require_same_capacity(o);
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~o.words_[i]) return false;
    return true;
  }

  std::vector<int> to_vector() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(size()));
    for_each([&](int v) { out.push_back(v); });
    return out;
  }

  // Calls f(v) for every contained id in ascending order.
  template <class F>
  void for_each(F&& f) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t w = words_[i];
      while (w) {
        const int v = static_cast<int>(i * 64 + std::countr_zero(w));
        f(v);
        w &= w - 1;
      }
    }
  }

  std::size_t hash() const {
    // splitmix64-style mixing over the words; good avalanche, cheap.
    std::uint64_t h = 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(capacity_) + 1);
    for (auto w : words_) {
      std::uint64_t z = h ^ w;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
      h = z ^ (z >> 31);
    }
    return static_cast<std::size_t>(h);
  }

 private:
  void check_range(int v) const {
    if (v < 0 || v >= capacity_)
      throw std::out_of_range("VertexSet: id " + std::to_string(v) +
                              " outside capacity " + std::to_string(capacity_));
  }
  void require_same_capacity(const VertexSet& o) const {
    if (capacity_ != o.capacity_)
      throw std::invalid_argument("VertexSet: capacity mismatch");
  }
  void mask_tail() {
    const int tail = capacity_ & 63;
    if (tail != 0 && !words_.empty()) words_.back() &= (1ULL << tail) - 1;
  }

  int capacity_ = 0;
  std::vector<std::uint64_t> words_;
};

struct VertexSetHash {
  std::size_t operator()(const VertexSet& s) const { return s.hash(); }
};

// --------------------------------------------------------------------------
// Digraph
// --------------------------------------------------------------------------
struct Arc {
  int tail = -1;
  int head = -1;
  weight_t weight = 1;
};

class Digraph {
 public:
  // Returns the new vertex id. An empty label defaults to "v<id>".
  int add_vertex(std::string label = "") {
    const int id = static_cast<int>(verts_.size());
    if (label.empty()) label = "v" + std::to_string(id);
    verts_.push_back(VertexRec{std::move(label), {}, {}});
    return id;
  }

  // Adds the arc tail->head, merging the weight into an existing arc for the
  // same ordered pair (the multigraph-as-weights convention). Self-loops and
  // non-positive weights are rejected.
  void add_arc(int tail, int head, weight_t weight = 1) {
    check_vertex(tail);
    check_vertex(head);
    if (tail == head)
      throw std::invalid_argument("self-loop at vertex " + label(tail));
    if (weight <= 0) throw std::invalid_argument("arc weight must be positive");
    if (const int idx = find_arc(tail, head); idx >= 0) {
      arcs_[static_cast<std::size_t>(idx)].weight += weight;
      return;
    }
    const int idx = static_cast<int>(arcs_.size());
    arcs_.push_back(Arc{tail, head, weight});
    verts_[static_cast<std::size_t>(tail)].out.push_back(idx);
    verts_[static_cast<std::size_t>(head)].in.push_back(idx);
  }

  int vertex_count() const { return static_cast<int>(verts_.size()); }
  int arc_count() const { return static_cast<int>(arcs_.size()); }

  const std::vector<Arc>& arcs() const { return arcs_; }
  const Arc& arc(int idx) const { return arcs_[static_cast<std::size_t>(idx)]; }

  // Arc-index lists (stable insertion order).
  const std::vector<int>& out_arcs(int v) const { check_vertex(v); return verts_[static_cast<std::size_t>(v)].out; }
  const std::vector<int>& in_arcs(int v) const { check_vertex(v); return verts_[static_cast<std::size_t>(v)].in; }

  int out_degree(int v) const { return static_cast<int>(out_arcs(v).size()); }
  int in_degree(int v) const { return static_cast<int>(in_arcs(v).size()); }

  weight_t out_weight(int v) const {
    weight_t s = 0;
    for (int i : out_arcs(v)) s += arcs_[static_cast<std::size_t>(i)].weight;
    return s;
  }
  weight_t in_weight(int v) const {
    weight_t s = 0;
    for (int i : in_arcs(v)) s += arcs_[static_cast<std::size_t>(i)].weight;
    return s;
  }

  bool has_arc(int tail, int head) const { return find_arc(tail, head) >= 0; }

  weight_t arc_weight(int tail, int head) const {
    const int idx = find_arc(tail, head);
    if (idx < 0) throw std::invalid_argument("no such arc");
    return arcs_[static_cast<std::size_t>(idx)].weight;
  }

  weight_t total_weight() const {
    weight_t s = 0;
    for (const auto& a : arcs_) s += a.weight;
    return s;
  }

  // Sentinel standing in for "infinite" weight: strictly heavier than any
  // set of real arcs combined.
  weight_t infinite_weight() const { return total_weight() + 1; }

  const std::string& label(int v) const { check_vertex(v); return verts_[static_cast<std::size_t>(v)].label; }

  void set_label(int v, std::string label) {
    check_vertex(v);
    verts_[static_cast<std::size_t>(v)].label = std::move(label);
  }

  // Linear scan; bulk callers should build their own map.
  int find_vertex(std::string_view label) const {
    for (int v = 0; v < vertex_count(); ++v)
      if (verts_[static_cast<std::size_t>(v)].label == label) return v;
    return -1;
  }

  VertexSet all_vertices() const { return VertexSet::full(vertex_count()); }

 private:
  struct VertexRec {
    std::string label;
    std::vector<int> out;  // arc indices with this vertex as tail
    std::vector<int> in;   // arc indices with this vertex as head
  };

  void check_vertex(int v) const {
    if (v < 0 || v >= vertex_count())
      throw std::invalid_argument("vertex id " + std::to_string(v) + " out of range");
  }

  int find_arc(int tail, int head) const {
    if (tail < 0 || tail >= vertex_count()) return -1;
    for (int i : verts_[static_cast<std::size_t>(tail)].out)
      if (arcs_[static_cast<std::size_t>(i)].head == head) return i;
    return -1;
  }

  std::vector<VertexRec> verts_;
  std::vector<Arc> arcs_;
};

// --------------------------------------------------------------------------
// Structural queries. Functions taking a `restrict` set operate on the
// induced subgraph G[restrict] without materializing it.
// --------------------------------------------------------------------------

struct ValidationReport {
  bool acyclic = false;
  bool weakly_connected = false;
  // Non-empty iff acyclic: ancestors before descendants.
  std::vector<int> topological_order;
  // Non-empty iff cyclic: vertex ids of one directed cycle, in arc order.
  std::vector<int> cycle;

  bool ok() const { return acyclic && weakly_connected; }
};

// Weakly connected components of G[restrict], each a VertexSet, ordered by
// their smallest vertex id.
inline std::vector<VertexSet> weakly_connected_components(const Digraph& g,
                                                          const VertexSet& restrict_set) {
  const int n = g.vertex_count();
  std::vector<VertexSet> comps;
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  restrict_set.for_each([&](int start) {
    if (seen[static_cast<std::size_t>(start)]) return;
    VertexSet comp(n);
    std::vector<int> stack{start};
    seen[static_cast<std::size_t>(start)] = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      comp.insert(v);
      auto visit = [&](int u) {
        if (restrict_set.contains(u) && !seen[static_cast<std::size_t>(u)]) {
          seen[static_cast<std::size_t>(u)] = 1;
          stack.push_back(u);
        }
      };
      for (int i : g.out_arcs(v)) visit(g.arc(i).head);
      for (int i : g.in_arcs(v)) visit(g.arc(i).tail);
    }
    comps.push_back(std::move(comp));
  });
  return comps;
}

// Vertices of restrict with no in-arc from inside restrict.
inline VertexSet roots(const Digraph& g, const VertexSet& restrict_set) {
  VertexSet out(g.vertex_count());
  restrict_set.for_each([&](int v) {
    for (int i : g.in_arcs(v))
      if (restrict_set.contains(g.arc(i).tail)) return;
    out.insert(v);
  });
  return out;
}

inline VertexSet roots(const Digraph& g) { return roots(g, g.all_vertices()); }

// Vertices of restrict with no out-arc into restrict.
inline VertexSet leaves(const Digraph& g, const VertexSet& restrict_set) {
  VertexSet out(g.vertex_count());
  restrict_set.for_each([&](int v) {
    for (int i : g.out_arcs(v))
      if (restrict_set.contains(g.arc(i).head)) return;
    out.insert(v);
  });
  return out;
}

inline VertexSet leaves(const Digraph& g) { return leaves(g, g.all_vertices()); }

// A sinkset is closed under out-arcs: no arc leaves the set.
inline bool is_sinkset(const Digraph& g, const VertexSet& s) {
  for (const auto& a : g.arcs())
    if (s.contains(a.tail) && !s.contains(a.head)) return false;
  return true;
}

// Total weight of arcs entering the set from outside.
inline weight_t indegree_of_set(const Digraph& g, const VertexSet& s) {
  weight_t total = 0;
  for (const auto& a : g.arcs())
    if (!s.contains(a.tail) && s.contains(a.head)) total += a.weight;
  return total;
}

inline ValidationReport validate(const Digraph& g) {
  ValidationReport report;
  const int n = g.vertex_count();

  // Kahn's algorithm; FIFO queue seeded with all in-degree-0 vertices in
  // ascending id order, so the certified order is deterministic.
  std::vector<int> indeg(static_cast<std::size_t>(n), 0);
  for (const auto& a : g.arcs()) ++indeg[static_cast<std::size_t>(a.head)];
  std::queue<int> queue;
  for (int v = 0; v < n; ++v)
    if (indeg[static_cast<std::size_t>(v)] == 0) queue.push(v);
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(n));
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop();
    order.push_back(v);
    for (int i : g.out_arcs(v)) {
      const int h = g.arc(i).head;
      if (--indeg[static_cast<std::size_t>(h)] == 0) queue.push(h);
    }
  }
  report.acyclic = static_cast<int>(order.size()) == n;
  if (report.acyclic) {
    report.topological_order = std::move(order);
  } else {
    // Recover one directed cycle for diagnostics: walk in-arcs from any
    // still-unprocessed vertex, restricted to unprocessed vertices, until a
    // vertex repeats.
    std::vector<char> removed(static_cast<std::size_t>(n), 0);
    for (int v : order) removed[static_cast<std::size_t>(v)] = 1;
    int v = 0;
    while (removed[static_cast<std::size_t>(v)]) ++v;
    std::vector<int> path;
    std::vector<int> pos_in_path(static_cast<std::size_t>(n), -1);
    for (;;) {
      if (pos_in_path[static_cast<std::size_t>(v)] >= 0) {
        path.erase(path.begin(), path.begin() + pos_in_path[static_cast<std::size_t>(v)]);
        std::reverse(path.begin(), path.end());  // arc order, not walk order
        report.cycle = std::move(path);
        break;
      }
      pos_in_path[static_cast<std::size_t>(v)] = static_cast<int>(path.size());
      path.push_back(v);
      for (int i : g.in_arcs(v)) {
        const int t = g.arc(i).tail;
        if (!removed[static_cast<std::size_t>(t)]) {
          v = t;
          break;
        }
      }
    }
  }

  report.weakly_connected =
      n == 0 || static_cast<int>(weakly_connected_components(g, g.all_vertices()).size()) == 1;
  return report;
}

// Strict descendants of every vertex, as bitsets. Requires a DAG.
inline std::vector<VertexSet> descendant_sets(const Digraph& g) {
  const auto report = validate(g);
  if (!report.acyclic)
    throw std::invalid_argument("descendant_sets requires an acyclic graph");
  const int n = g.vertex_count();
  std::vector<VertexSet> desc(static_cast<std::size_t>(n), VertexSet(n));
  for (auto it = report.topological_order.rbegin(); it != report.topological_order.rend(); ++it) {
    const int v = *it;
    for (int i : g.out_arcs(v)) {
      const int c = g.arc(i).head;
      desc[static_cast<std::size_t>(v)].insert(c);
      desc[static_cast<std::size_t>(v)] |= desc[static_cast<std::size_t>(c)];
    }
  }
  return desc;
}

// Rooted phylogenetic network shape check: weakly connected DAG with exactly
// one root, where every other vertex is a leaf (in 1, out 0), a tree vertex
// (in 1, out >= 2), or a reticulation (in >= 2, out 1). When `why` is given
// it receives a human-readable reason for rejection.
inline bool is_rooted_network(const Digraph& g, std::string* why = nullptr) {
  auto fail = [&](std::string reason) {
    if (why != nullptr) *why = std::move(reason);
    return false;
  };
  if (g.vertex_count() < 2) return fail("a network needs a root and at least one leaf");
  const auto report = validate(g);
  if (!report.acyclic) return fail("graph contains a directed cycle");
  if (!report.weakly_connected) return fail("graph is not weakly connected");
  const VertexSet root_set = roots(g);
  if (root_set.size() != 1)
    return fail("expected exactly one root, found " + std::to_string(root_set.size()));
  const int root = root_set.first();
  for (int v = 0; v < g.vertex_count(); ++v) {
    if (v == root) continue;
    const int din = g.in_degree(v);
    const int dout = g.out_degree(v);
    const bool leaf = din == 1 && dout == 0;
    const bool tree = din == 1 && dout >= 2;
    const bool reticulation = din >= 2 && dout == 1;
    if (!leaf && !tree && !reticulation)
      return fail("vertex " + g.label(v) + " has in-degree " + std::to_string(din) +
                  " and out-degree " + std::to_string(dout) +
                  ", which fits no network vertex type");
  }
  return true;
}

// Removes every arc u->v for which a longer directed path u ~> v exists.
// Vertex ids, labels and the weights of surviving arcs are preserved.
inline Digraph transitive_reduction(const Digraph& g) {
  const auto desc = descendant_sets(g);  // throws on cycles
  Digraph out;
  for (int v = 0; v < g.vertex_count(); ++v) out.add_vertex(g.label(v));
  for (const auto& a : g.arcs()) {
    bool redundant = false;
    for (int i : g.out_arcs(a.tail)) {
      const int c = g.arc(i).head;
      if (c != a.head && desc[static_cast<std::size_t>(c)].contains(a.head)) {
        redundant = true;
        break;
      }
    }
    if (!redundant) out.add_arc(a.tail, a.head, a.weight);
  }
  return out;
}

}  // namespace scanwidth
