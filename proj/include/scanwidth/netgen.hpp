#pragma once

// Random generation of rooted binary phylogenetic networks via a
// birth-hybridization process.
//
// The simulation grows a set of "lineages": dangling arcs whose parent vertex
// already exists but whose child vertex has not been materialized yet.  At
// every step one event happens, chosen with probability proportional to the
// process rates (speciation lambda per lineage, hybridization nu per lineage
// pair).  Speciation materializes the chosen lineage's child as a tree vertex
// with two fresh lineages; hybridization fuses two lineages with distinct
// parents into a reticulation vertex with one fresh lineage.  The simulation
// stops the first time the lineage count reaches the requested number of
// leaves; attempts whose reticulation count misses the target are rejected
// and retried.  Event waiting times are irrelevant to the resulting topology
// and are not sampled.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "scanwidth/digraph.hpp"
#include "scanwidth/reduce.hpp"
#include "scanwidth/rng.hpp"

namespace scanwidth {

struct GenConfig {
  double lambda = 1.0;                  // speciation rate per lineage
  std::optional<double> nu;             // hybridization rate per lineage pair;
                                        // unset: redrawn per attempt from U[0.0001, 0.4]
  int target_leaves = 0;
  int target_reticulations = 0;
  std::uint64_t seed = 0;
  int max_attempts = 10000;
};

class GenerationExhausted : public std::runtime_error {
 public:
  explicit GenerationExhausted(const std::string& what) : std::runtime_error(what) {}
};

struct GenResult {
  Digraph graph;
  double nu = 0.0;   // the rate the successful attempt used
  int attempts = 0;  // attempts consumed, including the successful one
  int level = 0;
};

namespace detail {

// One simulation attempt.  Returns the network on success, nullopt when the
// attempt missed the reticulation target or ran away.
inline std::optional<Digraph> birth_hyb_attempt(const GenConfig& cfg, double nu, Rng& rng) {
  Digraph g;
  // Parent vertex of each dangling lineage; -1 marks the not-yet-created root.
  std::vector<int> lineage_parent{-1};
  int reticulations = 0;
  // A runaway attempt (hybridizations keep outpacing extinction-free growth)
  // cannot happen under these rates, but guard against pathological configs.
  long long event_guard = 0;

  while (static_cast<int>(lineage_parent.size()) != cfg.target_leaves) {
    if (++event_guard > 200000) return std::nullopt;
    const int lineage_count = static_cast<int>(lineage_parent.size());
    const double speciation_rate = cfg.lambda * lineage_count;
    const double pair_count = lineage_count >= 2
                                  ? 0.5 * static_cast<double>(lineage_count) *
                                        static_cast<double>(lineage_count - 1)
                                  : 0.0;
    const double hybridization_rate = nu * pair_count;

    bool hybridize = false;
    if (hybridization_rate > 0.0) {
      hybridize = rng.real01() < hybridization_rate / (speciation_rate + hybridization_rate);
    }

    if (hybridize) {
      if (reticulations + 1 > cfg.target_reticulations) return std::nullopt;
      // Lineages sharing a parent would create parallel arcs; such pairs are
      // not eligible.  If no eligible pair exists, fall through to speciation.
      std::vector<std::pair<int, int>> eligible;
      for (int i = 0; i < lineage_count; ++i) {
        for (int j = i + 1; j < lineage_count; ++j) {
          if (lineage_parent[i] != lineage_parent[j]) eligible.emplace_back(i, j);
        }
      }
      if (eligible.empty()) {
        hybridize = false;
      } else {
        const auto [i, j] = eligible[static_cast<std::size_t>(rng.below(eligible.size()))];
        const int h = g.add_vertex();
        g.add_arc(lineage_parent[i], h);
        g.add_arc(lineage_parent[j], h);
        ++reticulations;
        lineage_parent.erase(lineage_parent.begin() + j);  // j > i: erase back first
        lineage_parent.erase(lineage_parent.begin() + i);
        lineage_parent.push_back(h);
      }
    }

    if (!hybridize) {
      const int pick = static_cast<int>(rng.below(static_cast<std::uint64_t>(lineage_count)));
      const int parent = lineage_parent[pick];
      const int v = g.add_vertex();
      if (parent >= 0) g.add_arc(parent, v);
      lineage_parent.erase(lineage_parent.begin() + pick);
      lineage_parent.push_back(v);
      lineage_parent.push_back(v);
    }
  }

  if (reticulations != cfg.target_reticulations) return std::nullopt;
  if (g.vertex_count() == 0) return std::nullopt;  // target_leaves <= 1: no event ever fired

  // Materialize the surviving lineages as labeled leaves.
  for (const int parent : lineage_parent) {
    const int v = g.add_vertex();
    g.add_arc(parent, v);
  }
  return g;
}

}  // namespace detail

// Generates one rooted binary network with exactly cfg.target_leaves leaves
// and cfg.target_reticulations reticulations.  Deterministic per seed.
// Throws GenerationExhausted when cfg.max_attempts attempts all miss, and
// std::invalid_argument on nonsensical parameters.
inline GenResult generate_network(const GenConfig& cfg) {
  if (cfg.lambda <= 0.0) throw std::invalid_argument("generate_network: lambda must be positive");
  if (cfg.nu && *cfg.nu < 0.0) throw std::invalid_argument("generate_network: nu must be nonnegative");
  if (cfg.target_leaves < 1) throw std::invalid_argument("generate_network: target_leaves must be at least 1");
  if (cfg.target_reticulations < 0) {
    throw std::invalid_argument("generate_network: target_reticulations must be nonnegative");
  }
  if (cfg.max_attempts < 1) throw std::invalid_argument("generate_network: max_attempts must be at least 1");

  Rng rng(cfg.seed);
  for (int attempt = 1; attempt <= cfg.max_attempts; ++attempt) {
    const double nu = cfg.nu ? *cfg.nu : rng.real(0.0001, 0.4);
    std::optional<Digraph> g = detail::birth_hyb_attempt(cfg, nu, rng);
    if (!g) continue;
    std::string why;
    if (!is_rooted_network(*g, &why)) continue;  // paranoia; construction guarantees this
    GenResult result;
    result.nu = nu;
    result.attempts = attempt;
    result.level = level(*g);
    result.graph = std::move(*g);
    return result;
  }
  throw GenerationExhausted(
      "generate_network: no attempt out of " + std::to_string(cfg.max_attempts) +
      " hit " + std::to_string(cfg.target_leaves) + " leaves with " +
      std::to_string(cfg.target_reticulations) + " reticulations");
}

}  // namespace scanwidth
