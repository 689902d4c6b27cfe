#pragma once

// Command-line front end: compute / eval / heuristic / generate / bench.
// Kept in a header so the tool binary stays a one-line main and the tests can
// exercise run_main in process where useful.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "scanwidth/digraph.hpp"
#include "scanwidth/exact.hpp"
#include "scanwidth/heuristics.hpp"
#include "scanwidth/io.hpp"
#include "scanwidth/layouts.hpp"
#include "scanwidth/netgen.hpp"
#include "scanwidth/reduce.hpp"
#include "scanwidth/rng.hpp"

namespace scanwidth {
namespace cli {

// A user-facing failure: message goes to stderr, code becomes the exit code.
class CliError : public std::runtime_error {
 public:
  explicit CliError(const std::string& what, int code = 1) : std::runtime_error(what), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

// ---------------------------------------------------------------------------
// Logging (SCANWIDTH_LOG=error|info|debug, default error)

enum class LogLevel { error = 0, info = 1, debug = 2 };

inline LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("SCANWIDTH_LOG");
    if (env == nullptr) return LogLevel::error;
    const std::string s(env);
    if (s == "debug") return LogLevel::debug;
    if (s == "info") return LogLevel::info;
    return LogLevel::error;
  }();
  return level;
}

inline std::mutex& log_mutex() {
  static std::mutex m;
  return m;
}

inline void log_at(LogLevel level, const char* tag, const std::string& msg) {
  if (log_level() < level) return;
  const std::lock_guard<std::mutex> lock(log_mutex());
  std::fprintf(stderr, "[%s] %s\n", tag, msg.c_str());
}

inline void log_info(const std::string& msg) { log_at(LogLevel::info, "info", msg); }
inline void log_debug(const std::string& msg) { log_at(LogLevel::debug, "debug", msg); }

// ---------------------------------------------------------------------------
// Small helpers

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError("cannot open \"" + path + "\" for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CliError("cannot open \"" + path + "\" for writing");
  out << content;
  if (!out) throw CliError("failed writing \"" + path + "\"");
}

struct LoadedGraph {
  Digraph g;
  std::vector<int> arc_lines;  // per-arc input line; empty for eNewick input
};

inline LoadedGraph load_graph(const std::string& path, const std::string& format) {
  const std::string text = read_file(path);
  LoadedGraph loaded;
  if (format == "enewick") {
    loaded.g = parse_enewick(text);
  } else {
    loaded.g = parse_edge_list(text, &loaded.arc_lines);
  }
  return loaded;
}

// Requires an acyclic, weakly connected input.  A cycle is reported through
// one of its arcs, with the arc's input line when the format provides one.
inline void require_weakly_connected_dag(const Digraph& g, const std::vector<int>& arc_lines) {
  const ValidationReport report = validate(g);
  if (!report.acyclic) {
    const std::vector<int>& cyc = report.cycle;
    std::string walk;
    for (std::size_t i = 0; i < cyc.size(); ++i) {
      if (i > 0) walk += " -> ";
      walk += g.label(cyc[i]);
    }
    walk += " -> " + g.label(cyc.front());
    std::string arc_note;
    if (!arc_lines.empty() && cyc.size() >= 2) {
      for (std::size_t i = 0; i < g.arcs().size(); ++i) {
        const Arc& a = g.arc(static_cast<int>(i));
        if (a.tail == cyc[0] && a.head == cyc[1]) {
          arc_note = " (arc \"" + g.label(a.tail) + " " + g.label(a.head) + "\" at line " +
                     std::to_string(arc_lines[i]) + ")";
          break;
        }
      }
    }
    throw CliError("input is cyclic: " + walk + arc_note);
  }
  if (!report.weakly_connected) {
    const auto comps = weakly_connected_components(g, g.all_vertices());
    throw CliError("input is not weakly connected (" + std::to_string(comps.size()) +
                   " components)");
  }
}

inline ReductionSummary summarize_plan(const DecompositionPlan& plan) {
  ReductionSummary s;
  s.blocks = static_cast<int>(plan.blocks.size());
  for (const SBlock& b : plan.blocks) {
    if (b.kind != SBlockKind::general) continue;
    s.suppressed += static_cast<int>(b.reduced.log.size());
    s.largest_block = std::max(s.largest_block, b.reduced.graph.vertex_count());
  }
  return s;
}

// ---------------------------------------------------------------------------
// Shared solver plumbing

inline bool is_exact_algorithm(const std::string& algo) {
  return algo == "brute" || algo == "recursive" || algo == "dp" || algo == "fpt-level";
}

// Exact solve, by default through the block decomposition.  fpt-level always
// decomposes (that is the algorithm).
inline SolveOutcome run_exact(const Digraph& g, const std::string& algo, int brute_cap,
                              const Deadline& deadline, bool reduce,
                              std::optional<ReductionSummary>* summary_out) {
  if (algo == "fpt-level") {
    DecompositionPlan plan;
    SolveOutcome out = fpt_level_solve(g, deadline, nullptr, &plan);
    if (summary_out != nullptr) *summary_out = summarize_plan(plan);
    return out;
  }
  const auto solve_one = [&](const Digraph& h) -> SolveOutcome {
    if (algo == "brute") return brute_force(h, brute_cap, deadline);
    if (algo == "recursive") return recursive_solve(h, deadline);
    if (algo == "dp") return dp_solve(h, deadline);
    throw CliError("unknown algorithm \"" + algo + "\"");
  };
  if (!reduce) return solve_one(g);

  const DecompositionPlan plan = decompose(g);
  std::vector<std::optional<Extension>> block_exts(plan.blocks.size());
  weight_t proven_lb = 0;
  for (std::size_t b = 0; b < plan.blocks.size(); ++b) {
    if (plan.blocks[b].kind != SBlockKind::general) continue;
    try {
      SolveOutcome sub = solve_one(plan.blocks[b].reduced.graph);
      proven_lb = std::max(proven_lb, sub.value);
      block_exts[b] = std::move(sub.extension);
    } catch (const TimeoutError& t) {
      throw TimeoutError(std::max(proven_lb, t.lower_bound));
    }
  }
  Extension full = reassemble(g, plan, block_exts);
  const weight_t value = scanwidth_of_extension(g, full).value;
  if (summary_out != nullptr) *summary_out = summarize_plan(plan);
  return SolveOutcome{value, std::move(full)};
}

inline Extension base_heuristic(const Digraph& h, const std::string& method) {
  if (method == "cutsplit") return cut_split_heuristic(h);
  if (method == "greedy") return greedy_heuristic(h);
  throw CliError("unknown heuristic method \"" + method + "\"");
}

// Heuristic layout, by default per general block of the decomposition, with
// optional simulated-annealing refinement.  Per-block seeds are derived from
// sa_cfg.seed so block count and order do not couple the random streams.
inline SolveOutcome run_heuristic(const Digraph& g, const std::string& method, bool sa,
                                  const SaConfig& sa_cfg, bool reduce,
                                  std::optional<ReductionSummary>* summary_out) {
  const auto solve_block = [&](const Digraph& h, std::uint64_t block_seed) -> Extension {
    Extension e = base_heuristic(h, method);
    if (sa) {
      SaConfig cfg = sa_cfg;
      cfg.seed = block_seed;
      e = simulated_annealing(h, e, cfg);
    }
    return e;
  };
  if (!reduce) {
    Extension e = solve_block(g, Rng::derive_seed(sa_cfg.seed, 0));
    const weight_t value = scanwidth_of_extension(g, e).value;
    return SolveOutcome{value, std::move(e)};
  }
  const DecompositionPlan plan = decompose(g);
  std::vector<std::optional<Extension>> block_exts(plan.blocks.size());
  for (std::size_t b = 0; b < plan.blocks.size(); ++b) {
    if (plan.blocks[b].kind != SBlockKind::general) continue;
    block_exts[b] = solve_block(plan.blocks[b].reduced.graph,
                                Rng::derive_seed(sa_cfg.seed, static_cast<std::uint64_t>(b)));
  }
  Extension full = reassemble(g, plan, block_exts);
  const weight_t value = scanwidth_of_extension(g, full).value;
  if (summary_out != nullptr) *summary_out = summarize_plan(plan);
  return SolveOutcome{value, std::move(full)};
}

inline std::vector<std::string> extension_labels(const Digraph& g, const Extension& e) {
  std::vector<std::string> labels;
  labels.reserve(e.order.size());
  for (const int v : e.order) labels.push_back(g.label(v));
  return labels;
}

inline std::vector<std::pair<std::string, std::string>> tree_extension_pairs(
    const Digraph& g, const TreeExtension& t) {
  std::vector<std::pair<std::string, std::string>> pairs;
  pairs.reserve(t.parent.size());
  for (int v = 0; v < g.vertex_count(); ++v) {
    const int p = t.parent[static_cast<std::size_t>(v)];
    pairs.emplace_back(g.label(v), p < 0 ? std::string("-") : g.label(p));
  }
  return pairs;
}

inline void print_record(const ResultRecord& record, const std::string& output) {
  if (output == "tsv") {
    std::printf("%s\n%s\n", record_tsv_header().c_str(), record_to_tsv_row(record).c_str());
  } else {
    std::printf("%s\n", record_to_json(record).dump().c_str());
  }
}

// ---------------------------------------------------------------------------
// compute

struct ComputeOptions {
  std::string input;
  std::string format = "edgelist";
  std::string algo = "dp";
  bool no_reduce = false;
  double timeout = 0.0;
  std::string output = "json";
  bool emit_tree_extension = false;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int brute_cap = 10;
};

inline int cmd_compute(const ComputeOptions& opt) {
  const LoadedGraph loaded = load_graph(opt.input, opt.format);
  const Digraph& g = loaded.g;
  require_weakly_connected_dag(g, loaded.arc_lines);
  log_info("parsed " + std::to_string(g.vertex_count()) + " vertices, " +
           std::to_string(g.arc_count()) + " arcs");

  ResultRecord record;
  record.input_id = opt.input;
  record.algorithm = opt.algo;
  record.vertices = g.vertex_count();
  record.arcs = g.arc_count();
  if (opt.seed_set) record.seed = opt.seed;

  const Deadline deadline = opt.timeout > 0.0 ? Deadline::after(opt.timeout) : Deadline::never();
  std::optional<ReductionSummary> reduction;
  const Stopwatch watch;
  try {
    SolveOutcome out = run_exact(g, opt.algo, opt.brute_cap, deadline, !opt.no_reduce, &reduction);
    record.wall_time_s = watch.seconds();
    record.status = "ok";
    record.scanwidth = out.value;
    record.lower_bound = out.value;
    record.extension = extension_labels(g, out.extension);
    if (opt.emit_tree_extension)
      record.tree_extension = tree_extension_pairs(g, canonical_tree_extension(g, out.extension));
    record.reduction = reduction;
    log_info("scanwidth " + std::to_string(out.value) + " in " +
             std::to_string(record.wall_time_s) + "s");
    print_record(record, opt.output);
    return 0;
  } catch (const TimeoutError& t) {
    record.wall_time_s = watch.seconds();
    record.status = "timeout";
    if (t.lower_bound > 0) record.lower_bound = t.lower_bound;
    record.reduction = reduction;
    print_record(record, opt.output);
    return 2;
  }
}

// ---------------------------------------------------------------------------
// eval

struct EvalOptions {
  std::string input;
  std::string format = "edgelist";
  std::string extension_file;
  std::string tree_extension_file;
  std::string measure = "sw";
  bool canonicalize = false;
};

inline int cmd_eval(const EvalOptions& opt) {
  if (opt.extension_file.empty() == opt.tree_extension_file.empty())
    throw CliError("pass exactly one of --extension and --tree-extension");
  const LoadedGraph loaded = load_graph(opt.input, opt.format);
  const Digraph& g = loaded.g;
  require_weakly_connected_dag(g, loaded.arc_lines);

  nlohmann::ordered_json j;
  j["input"] = opt.input;
  j["measure"] = opt.measure;

  WidthReport report;
  if (!opt.extension_file.empty()) {
    const Extension e = parse_extension_file(read_file(opt.extension_file), g);
    if (!is_extension(g, e))
      throw CliError("layout is not an extension of the input graph (every arc's head must "
                     "precede its tail)");
    if (opt.canonicalize) {
      const TreeExtension t = canonical_tree_extension(g, e);
      j["layout"] = "tree";
      if (opt.measure == "sw") {
        report = scanwidth_of_tree_extension(g, t);
      } else if (opt.measure == "tw-layout") {
        report = treewidth_of_tree_layout(g, t);
      } else {
        throw CliError("cutwidth is a linear-layout measure; drop --canonicalize");
      }
    } else {
      j["layout"] = "linear";
      if (opt.measure == "sw") {
        report = scanwidth_of_extension(g, e);
      } else if (opt.measure == "cw") {
        report = cutwidth_of_extension(g, e);
      } else {
        throw CliError("tw-layout needs a tree layout; pass --tree-extension or --canonicalize");
      }
    }
  } else {
    if (opt.canonicalize) throw CliError("--canonicalize applies to linear extensions only");
    const TreeExtension t = parse_tree_extension_file(read_file(opt.tree_extension_file), g);
    if (!is_tree_extension(g, t))
      throw CliError("layout is not a tree extension of the input graph (every arc's tail must "
                     "be an ancestor of its head)");
    j["layout"] = "tree";
    if (opt.measure == "sw") {
      report = scanwidth_of_tree_extension(g, t);
    } else if (opt.measure == "tw-layout") {
      report = treewidth_of_tree_layout(g, t);
    } else {
      throw CliError("cutwidth is a linear-layout measure; pass --extension");
    }
  }
  j["value"] = report.value;
  j["argmax"] = g.label(report.argmax_vertex);
  std::printf("%s\n", j.dump().c_str());
  return 0;
}

// ---------------------------------------------------------------------------
// heuristic

struct HeuristicOptions {
  std::string input;
  std::string format = "edgelist";
  std::string method = "cutsplit";
  bool sa = false;
  double sa_initial_temp = 0.0;
  double sa_cooling = 0.99;
  long long sa_steps = 0;
  double sa_floor = 1e-3;
  long long sa_max_steps = -1;
  std::uint64_t seed = 0;
  bool no_reduce = false;
  std::string output = "json";
  bool emit_tree_extension = false;
};

inline int cmd_heuristic(const HeuristicOptions& opt) {
  const LoadedGraph loaded = load_graph(opt.input, opt.format);
  const Digraph& g = loaded.g;
  require_weakly_connected_dag(g, loaded.arc_lines);

  SaConfig cfg;
  cfg.initial_temperature = opt.sa_initial_temp;
  cfg.cooling_factor = opt.sa_cooling;
  cfg.steps_per_temperature = opt.sa_steps;
  cfg.floor_temperature = opt.sa_floor;
  cfg.max_total_steps = opt.sa_max_steps;
  cfg.seed = opt.seed;

  ResultRecord record;
  record.input_id = opt.input;
  record.algorithm = opt.method + (opt.sa ? "+sa" : "");
  record.vertices = g.vertex_count();
  record.arcs = g.arc_count();
  record.seed = opt.seed;

  std::optional<ReductionSummary> reduction;
  const Stopwatch watch;
  SolveOutcome out = run_heuristic(g, opt.method, opt.sa, cfg, !opt.no_reduce, &reduction);
  record.wall_time_s = watch.seconds();
  record.status = "ok";
  record.scanwidth = out.value;
  record.extension = extension_labels(g, out.extension);
  if (opt.emit_tree_extension)
    record.tree_extension = tree_extension_pairs(g, canonical_tree_extension(g, out.extension));
  record.reduction = reduction;
  print_record(record, opt.output);
  return 0;
}

// ---------------------------------------------------------------------------
// generate

struct GenerateOptions {
  int leaves = 0;
  int reticulations = 0;
  int count = 1;
  std::uint64_t seed = 1;
  std::string nu = "sample";
  double lambda = 1.0;
  int max_attempts = 10000;
  std::string out = "-";
};

inline std::vector<std::string> network_metadata(const GenConfig& cfg, const GenResult& result,
                                                 int leaves, int reticulations) {
  char nu_buf[32];
  std::snprintf(nu_buf, sizeof(nu_buf), "%.6g", result.nu);
  char lambda_buf[32];
  std::snprintf(lambda_buf, sizeof(lambda_buf), "%.6g", cfg.lambda);
  return {
      "generator: birth-hyb-v1",
      "rng: " + std::string(Rng::algorithm_id()),
      "seed: " + std::to_string(cfg.seed),
      "nu: " + std::string(nu_buf),
      "lambda: " + std::string(lambda_buf),
      "leaves: " + std::to_string(leaves),
      "reticulations: " + std::to_string(reticulations),
      "level: " + std::to_string(result.level),
  };
}

inline std::optional<double> parse_nu_option(const std::string& nu) {
  if (nu == "sample") return std::nullopt;
  try {
    std::size_t used = 0;
    const double value = std::stod(nu, &used);
    if (used != nu.size() || value < 0.0) throw std::invalid_argument(nu);
    return value;
  } catch (const std::exception&) {
    throw CliError("--nu expects a nonnegative number or \"sample\", got \"" + nu + "\"");
  }
}

inline int cmd_generate(const GenerateOptions& opt) {
  const std::optional<double> fixed_nu = parse_nu_option(opt.nu);
  if (opt.count < 1) throw CliError("--count must be at least 1");
  const bool to_stdout = opt.out == "-";
  if (!to_stdout) std::filesystem::create_directories(opt.out);

  for (int i = 0; i < opt.count; ++i) {
    GenConfig cfg;
    cfg.lambda = opt.lambda;
    cfg.nu = fixed_nu;
    cfg.target_leaves = opt.leaves;
    cfg.target_reticulations = opt.reticulations;
    cfg.seed = Rng::derive_seed(opt.seed, static_cast<std::uint64_t>(i));
    cfg.max_attempts = opt.max_attempts;
    const GenResult result = generate_network(cfg);
    log_info("instance " + std::to_string(i) + ": " + std::to_string(result.attempts) +
             " attempt(s), level " + std::to_string(result.level));
    const std::string text = serialize_edge_list(
        result.graph, network_metadata(cfg, result, opt.leaves, opt.reticulations));
    if (to_stdout) {
      std::fputs(text.c_str(), stdout);
    } else {
      const std::string name = "net_r" + std::to_string(opt.reticulations) + "_l" +
                               std::to_string(opt.leaves) + "_" + std::to_string(i) + ".edgelist";
      const std::string path = (std::filesystem::path(opt.out) / name).string();
      write_file(path, text);
      std::printf("%s\n", path.c_str());
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// bench

struct BenchOptions {
  std::string grid;  // "r1,r2:l1,l2"
  int count = 5;
  std::string algos = "fpt-level,cutsplit,greedy";
  double timeout = 60.0;
  std::uint64_t seed = 1;
  std::string out = "bench-out";
  int jobs = 1;
  std::string nu = "sample";
  double lambda = 1.0;
  int max_attempts = 10000;
  int brute_cap = 10;
};

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (const char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

inline std::vector<int> parse_int_list(const std::string& s, const std::string& what) {
  std::vector<int> values;
  for (const std::string& part : split(s, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(part, &used);
      if (used != part.size() || v < 0) throw std::invalid_argument(part);
      values.push_back(v);
    } catch (const std::exception&) {
      throw CliError("malformed " + what + " list \"" + s + "\"");
    }
  }
  return values;
}

struct BenchInstance {
  std::string name;
  int reticulations = 0;
  int leaves = 0;
  std::uint64_t seed = 0;
  Digraph graph;
};

}  // namespace detail

inline int cmd_bench(const BenchOptions& opt) {
  const auto grid_parts = detail::split(opt.grid, ':');
  if (grid_parts.size() != 2)
    throw CliError("--grid expects \"r1,r2,..:l1,l2,..\" (reticulations : leaves)");
  const std::vector<int> retic_list = detail::parse_int_list(grid_parts[0], "reticulation");
  const std::vector<int> leaf_list = detail::parse_int_list(grid_parts[1], "leaf");
  const std::vector<std::string> algos = detail::split(opt.algos, ',');
  for (const std::string& a : algos) {
    const bool heuristic = a == "cutsplit" || a == "greedy" || a == "cutsplit+sa" || a == "greedy+sa";
    if (!is_exact_algorithm(a) && !heuristic) throw CliError("unknown algorithm \"" + a + "\" in --algos");
  }
  if (opt.count < 1) throw CliError("--count must be at least 1");
  const std::optional<double> fixed_nu = parse_nu_option(opt.nu);
  std::filesystem::create_directories(opt.out);

  // Generation is sequential and seed-derived, so the instance list does not
  // depend on --jobs.
  std::vector<detail::BenchInstance> instances;
  int generation_failures = 0;
  std::uint64_t instance_index = 0;
  for (const int r : retic_list) {
    for (const int l : leaf_list) {
      for (int i = 0; i < opt.count; ++i, ++instance_index) {
        GenConfig cfg;
        cfg.lambda = opt.lambda;
        cfg.nu = fixed_nu;
        cfg.target_leaves = l;
        cfg.target_reticulations = r;
        cfg.seed = Rng::derive_seed(opt.seed, instance_index);
        cfg.max_attempts = opt.max_attempts;
        detail::BenchInstance inst;
        inst.name = "net_r" + std::to_string(r) + "_l" + std::to_string(l) + "_" + std::to_string(i);
        inst.reticulations = r;
        inst.leaves = l;
        inst.seed = cfg.seed;
        try {
          inst.graph = generate_network(cfg).graph;
        } catch (const GenerationExhausted& e) {
          ++generation_failures;
          const std::lock_guard<std::mutex> lock(log_mutex());
          std::fprintf(stderr, "[warn] skipping %s: %s\n", inst.name.c_str(), e.what());
          continue;
        }
        instances.push_back(std::move(inst));
      }
    }
  }
  if (instances.empty()) throw CliError("no benchmark instance could be generated");
  log_info("generated " + std::to_string(instances.size()) + " instance(s), " +
           std::to_string(generation_failures) + " failure(s)");

  const auto run_one = [&](const detail::BenchInstance& inst, const std::string& algo) {
    ResultRecord record;
    record.input_id = inst.name;
    record.algorithm = algo;
    record.vertices = inst.graph.vertex_count();
    record.arcs = inst.graph.arc_count();
    record.seed = inst.seed;
    const Deadline deadline = opt.timeout > 0.0 ? Deadline::after(opt.timeout) : Deadline::never();
    const Stopwatch watch;
    try {
      if (is_exact_algorithm(algo)) {
        const SolveOutcome out = run_exact(inst.graph, algo, opt.brute_cap, deadline, true, nullptr);
        record.scanwidth = out.value;
        record.lower_bound = out.value;
      } else {
        const bool sa = algo.size() > 3 && algo.substr(algo.size() - 3) == "+sa";
        const std::string method = sa ? algo.substr(0, algo.size() - 3) : algo;
        SaConfig cfg;
        cfg.seed = inst.seed;
        const SolveOutcome out = run_heuristic(inst.graph, method, sa, cfg, true, nullptr);
        record.scanwidth = out.value;
      }
      record.status = "ok";
    } catch (const TimeoutError& t) {
      record.status = "timeout";
      if (t.lower_bound > 0) record.lower_bound = t.lower_bound;
    } catch (const std::exception& e) {
      record.status = "error";
      const std::lock_guard<std::mutex> lock(log_mutex());
      std::fprintf(stderr, "[warn] %s/%s failed: %s\n", inst.name.c_str(), algo.c_str(), e.what());
    }
    record.wall_time_s = watch.seconds();
    return record;
  };

  // One slot per instance keeps the output order independent of scheduling.
  std::vector<std::vector<ResultRecord>> per_instance(instances.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= instances.size()) return;
      std::vector<ResultRecord> records;
      records.reserve(algos.size());
      for (const std::string& algo : algos) records.push_back(run_one(instances[i], algo));
      per_instance[i] = std::move(records);
    }
  };
  const int jobs = std::max(1, opt.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    const std::size_t thread_count = std::min<std::size_t>(static_cast<std::size_t>(jobs), instances.size());
    pool.reserve(thread_count);
    for (std::size_t t = 0; t < thread_count; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  // results.jsonl: records in instance order, algorithms in --algos order.
  std::string jsonl;
  for (const auto& records : per_instance)
    for (const ResultRecord& r : records) jsonl += record_to_json(r).dump() + "\n";
  const std::string jsonl_path = (std::filesystem::path(opt.out) / "results.jsonl").string();
  write_file(jsonl_path, jsonl);

  // summary.tsv: one row per (reticulations, leaves, algorithm) cell.
  // mean_ratio compares against the best exact value obtained on the same
  // instance; rows without any exact reference show "-".
  std::string tsv =
      "reticulations\tleaves\talgorithm\truns\tok\tcompletion_rate\tmean_time_s\tmean_ratio\n";
  for (const int r : retic_list) {
    for (const int l : leaf_list) {
      std::vector<std::size_t> cell;
      for (std::size_t i = 0; i < instances.size(); ++i)
        if (instances[i].reticulations == r && instances[i].leaves == l) cell.push_back(i);
      if (cell.empty()) continue;
      for (std::size_t a = 0; a < algos.size(); ++a) {
        int ok = 0;
        double time_sum = 0.0;
        double ratio_sum = 0.0;
        int ratio_count = 0;
        for (const std::size_t i : cell) {
          const ResultRecord& rec = per_instance[i][a];
          if (rec.status != "ok") continue;
          ++ok;
          time_sum += rec.wall_time_s;
          std::optional<weight_t> reference;
          for (std::size_t b = 0; b < algos.size(); ++b) {
            if (!is_exact_algorithm(algos[b])) continue;
            const ResultRecord& exact_rec = per_instance[i][b];
            if (exact_rec.status != "ok" || !exact_rec.scanwidth) continue;
            if (!reference || *exact_rec.scanwidth < *reference) reference = exact_rec.scanwidth;
          }
          if (reference && rec.scanwidth) {
            ratio_sum += static_cast<double>(*rec.scanwidth) / static_cast<double>(*reference);
            ++ratio_count;
          }
        }
        char row[256];
        std::string rate_s = "-", time_s = "-", ratio_s = "-";
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.3f", static_cast<double>(ok) / static_cast<double>(cell.size()));
        rate_s = buf;
        if (ok > 0) {
          std::snprintf(buf, sizeof(buf), "%.6f", time_sum / ok);
          time_s = buf;
        }
        if (ratio_count > 0) {
          std::snprintf(buf, sizeof(buf), "%.4f", ratio_sum / ratio_count);
          ratio_s = buf;
        }
        std::snprintf(row, sizeof(row), "%d\t%d\t%s\t%zu\t%d\t%s\t%s\t%s\n", r, l,
                      algos[a].c_str(), cell.size(), ok, rate_s.c_str(), time_s.c_str(),
                      ratio_s.c_str());
        tsv += row;
      }
    }
  }
  const std::string tsv_path = (std::filesystem::path(opt.out) / "summary.tsv").string();
  write_file(tsv_path, tsv);
  std::fputs(tsv.c_str(), stdout);
  log_info("wrote " + jsonl_path + " and " + tsv_path);
  return 0;
}

// ---------------------------------------------------------------------------
// entry point

inline int run_main(int argc, const char* const* argv) {
  CLI::App app{"scanwidth: exact solvers, heuristics and generators for extension-based "
               "width measures of DAGs and rooted networks"};
  app.require_subcommand(1);

  ComputeOptions compute;
  CLI::App* compute_cmd = app.add_subcommand("compute", "exact scanwidth of a weakly connected DAG");
  compute_cmd->add_option("--input", compute.input, "input graph file")->required();
  compute_cmd->add_option("--format", compute.format, "input format")
      ->check(CLI::IsMember({"edgelist", "enewick"}));
  compute_cmd->add_option("--algo", compute.algo, "exact algorithm")
      ->check(CLI::IsMember({"brute", "recursive", "dp", "fpt-level"}));
  compute_cmd->add_flag("--no-reduce", compute.no_reduce,
                        "solve the input whole instead of per block (fpt-level always reduces)");
  compute_cmd->add_option("--timeout", compute.timeout, "wall-clock limit in seconds (0 = none)");
  compute_cmd->add_option("--output", compute.output, "record format")
      ->check(CLI::IsMember({"json", "tsv"}));
  compute_cmd->add_flag("--emit-tree-extension", compute.emit_tree_extension,
                        "include the canonical tree extension in the record");
  CLI::Option* compute_seed =
      compute_cmd->add_option("--seed", compute.seed, "seed echoed into the record");
  compute_cmd->add_option("--brute-cap", compute.brute_cap,
                          "largest graph the brute-force solver accepts");

  EvalOptions eval;
  CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate a layout file against a graph");
  eval_cmd->add_option("--input", eval.input, "input graph file")->required();
  eval_cmd->add_option("--format", eval.format, "input format")
      ->check(CLI::IsMember({"edgelist", "enewick"}));
  eval_cmd->add_option("--extension", eval.extension_file, "linear extension file (one label per line)");
  eval_cmd->add_option("--tree-extension", eval.tree_extension_file,
                       "tree extension file (\"child parent\" per line, \"-\" for the root)");
  eval_cmd->add_option("--measure", eval.measure, "width measure")
      ->check(CLI::IsMember({"sw", "cw", "tw-layout"}));
  eval_cmd->add_flag("--canonicalize", eval.canonicalize,
                     "turn the linear extension into its canonical tree extension first");

  HeuristicOptions heuristic;
  CLI::App* heuristic_cmd = app.add_subcommand("heuristic", "heuristic scanwidth layouts");
  heuristic_cmd->add_option("--input", heuristic.input, "input graph file")->required();
  heuristic_cmd->add_option("--format", heuristic.format, "input format")
      ->check(CLI::IsMember({"edgelist", "enewick"}));
  heuristic_cmd->add_option("--method", heuristic.method, "base heuristic")
      ->check(CLI::IsMember({"cutsplit", "greedy"}));
  heuristic_cmd->add_flag("--sa", heuristic.sa, "refine with simulated annealing");
  heuristic_cmd->add_option("--sa-initial-temp", heuristic.sa_initial_temp,
                            "starting temperature (0 = derive from sampled moves)");
  heuristic_cmd->add_option("--sa-cooling", heuristic.sa_cooling, "geometric cooling factor");
  heuristic_cmd->add_option("--sa-steps", heuristic.sa_steps,
                            "steps per temperature (0 = 20 * vertex count)");
  heuristic_cmd->add_option("--sa-floor", heuristic.sa_floor, "stop temperature");
  heuristic_cmd->add_option("--sa-max-steps", heuristic.sa_max_steps,
                            "total step budget (-1 = until cooled)");
  heuristic_cmd->add_option("--seed", heuristic.seed, "random seed");
  heuristic_cmd->add_flag("--no-reduce", heuristic.no_reduce,
                          "lay out the input whole instead of per block");
  heuristic_cmd->add_option("--output", heuristic.output, "record format")
      ->check(CLI::IsMember({"json", "tsv"}));
  heuristic_cmd->add_flag("--emit-tree-extension", heuristic.emit_tree_extension,
                          "include the canonical tree extension in the record");

  GenerateOptions generate;
  CLI::App* generate_cmd =
      app.add_subcommand("generate", "generate random rooted binary networks");
  generate_cmd->add_option("--leaves", generate.leaves, "number of leaves")->required();
  generate_cmd->add_option("--reticulations", generate.reticulations, "number of reticulations")
      ->required();
  generate_cmd->add_option("--count", generate.count, "instances to generate");
  generate_cmd->add_option("--seed", generate.seed, "master seed");
  generate_cmd->add_option("--nu", generate.nu,
                           "hybridization rate, or \"sample\" to redraw per attempt");
  generate_cmd->add_option("--lambda", generate.lambda, "speciation rate");
  generate_cmd->add_option("--max-attempts", generate.max_attempts,
                           "simulation attempts per instance before giving up");
  generate_cmd->add_option("--out", generate.out, "output directory, or \"-\" for stdout");

  BenchOptions bench;
  CLI::App* bench_cmd = app.add_subcommand("bench", "benchmark solvers on generated networks");
  bench_cmd->add_option("--grid", bench.grid, "\"r1,r2,..:l1,l2,..\" reticulation and leaf counts")
      ->required();
  bench_cmd->add_option("--count", bench.count, "instances per grid cell");
  bench_cmd->add_option("--algos", bench.algos, "comma-separated algorithms");
  bench_cmd->add_option("--timeout", bench.timeout, "per-run limit in seconds (0 = none)");
  bench_cmd->add_option("--seed", bench.seed, "master seed");
  bench_cmd->add_option("--out", bench.out, "output directory");
  bench_cmd->add_option("--jobs", bench.jobs, "worker threads");
  bench_cmd->add_option("--nu", bench.nu, "hybridization rate, or \"sample\"");
  bench_cmd->add_option("--lambda", bench.lambda, "speciation rate");
  bench_cmd->add_option("--max-attempts", bench.max_attempts,
                        "simulation attempts per instance before skipping it");
  bench_cmd->add_option("--brute-cap", bench.brute_cap,
                        "largest graph the brute-force solver accepts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (compute_cmd->parsed()) {
      compute.seed_set = compute_seed->count() > 0;
      return cmd_compute(compute);
    }
    if (eval_cmd->parsed()) return cmd_eval(eval);
    if (heuristic_cmd->parsed()) return cmd_heuristic(heuristic);
    if (generate_cmd->parsed()) return cmd_generate(generate);
    if (bench_cmd->parsed()) return cmd_bench(bench);
    return 1;  // unreachable: require_subcommand(1)
  } catch (const CliError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.code();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

}  // namespace cli
}  // namespace scanwidth
