#pragma once

// Input/output: edge-list and extended-Newick parsers, edge-list
// serialization, layout files, and the result-record serialization shared by
// the command-line tools.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "json.hpp"
#include "scanwidth/digraph.hpp"
#include "scanwidth/layouts.hpp"

namespace scanwidth {

// All parse failures carry the 1-based input line they were detected on
// (0 when the failure concerns the input as a whole).
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class SelfLoopError : public ParseError {
 public:
  SelfLoopError(int line, const std::string& label)
      : ParseError(line, "self-loop on vertex \"" + label + "\"") {}
};

class DuplicateArcError : public ParseError {
 public:
  DuplicateArcError(int line, const std::string& tail, const std::string& head)
      : ParseError(line, "duplicate arc \"" + tail + " " + head + "\"") {}
};

// ---------------------------------------------------------------------------
// Edge lists
//
// One arc per line: "tail head [weight]", whitespace-separated labels, weight
// a positive integer defaulting to 1.  '#' starts a comment anywhere on a
// line; blank lines are skipped.  Vertices get ids in order of first
// appearance.

inline Digraph parse_edge_list(const std::string& text, std::vector<int>* arc_lines = nullptr) {
  Digraph g;
  std::unordered_map<std::string, int> ids;
  const auto vertex_of = [&](const std::string& label) {
    auto it = ids.find(label);
    if (it != ids.end()) return it->second;
    const int v = g.add_vertex(label);
    ids.emplace(label, v);
    return v;
  };

  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream tokens(line);
    std::string tail, head, weight_token, extra;
    if (!(tokens >> tail)) continue;
    if (!(tokens >> head)) throw ParseError(line_no, "expected \"tail head [weight]\"");
    weight_t weight = 1;
    if (tokens >> weight_token) {
      const char* first = weight_token.data();
      const char* last = first + weight_token.size();
      const auto [ptr, ec] = std::from_chars(first, last, weight);
      if (ec != std::errc{} || ptr != last || weight <= 0)
        throw ParseError(line_no, "arc weight must be a positive integer, got \"" + weight_token + "\"");
      if (tokens >> extra) throw ParseError(line_no, "unexpected trailing token \"" + extra + "\"");
    }
    if (tail == head) throw SelfLoopError(line_no, tail);
    const int u = vertex_of(tail);
    const int v = vertex_of(head);
    if (g.has_arc(u, v)) throw DuplicateArcError(line_no, tail, head);
    g.add_arc(u, v, weight);
    if (arc_lines != nullptr) arc_lines->push_back(line_no);
  }
  if (g.arc_count() == 0) throw ParseError(0, "input contains no arcs");
  return g;
}

// Serializes in arc insertion order; weight 1 is left implicit.  Each comment
// string becomes one leading '#' line.
inline std::string serialize_edge_list(const Digraph& g,
                                       const std::vector<std::string>& comments = {}) {
  std::string out;
  for (const std::string& c : comments) out += "# " + c + "\n";
  for (const Arc& a : g.arcs()) {
    out += g.label(a.tail);
    out += ' ';
    out += g.label(a.head);
    if (a.weight != 1) {
      out += ' ';
      out += std::to_string(a.weight);
    }
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Extended Newick
//
// A single statement terminated by ';'.  Hybrid vertices are written as
// several tree nodes sharing one "#<type><number>" tag (types H, LGT, R) and
// are merged into a single vertex; at most one occurrence may carry children.
// Branch lengths after ':' are parsed and discarded.  Unlabeled vertices get
// synthetic "_<k>" labels; unlabeled hybrid vertices keep their tag as label.

namespace detail {

class EnewickParser {
 public:
  explicit EnewickParser(std::string_view text) : text_(text) {}

  Digraph parse() {
    skip_ws();
    parse_node();
    skip_ws();
    if (!eat(';')) throw ParseError(line(), "expected ';' at end of statement");
    skip_ws();
    if (pos_ != text_.size())
      throw ParseError(line(), "unexpected content after ';'");
    for (const auto& [tag, info] : hybrids_) {
      if (info.occurrences < 2)
        throw ParseError(info.first_line,
                         "dangling hybrid tag \"" + tag + "\" (appears only once)");
    }
    check_unique_labels();
    if (g_.vertex_count() < 2) throw ParseError(0, "input contains no arcs");
    return std::move(g_);
  }

 private:
  struct HybridInfo {
    int vertex = -1;
    int occurrences = 0;
    int first_line = 0;
    bool has_children = false;
    bool labeled = false;
  };

  int line() const {
    return 1 + static_cast<int>(std::count(text_.begin(), text_.begin() + static_cast<std::ptrdiff_t>(pos_), '\n'));
  }
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  bool eat(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }
  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' ||
                                   text_[pos_] == '\n' || text_[pos_] == '\r'))
      ++pos_;
  }
  static bool is_label_char(char c) {
    return c != '\0' && c != '(' && c != ')' && c != ',' && c != ';' && c != ':' && c != '#' &&
           c != ' ' && c != '\t' && c != '\n' && c != '\r';
  }
  std::string read_label_chars() {
    std::string s;
    while (is_label_char(peek())) s += text_[pos_++];
    return s;
  }

  int parse_node() {
    skip_ws();
    std::vector<int> children;
    bool has_children = false;
    if (eat('(')) {
      has_children = true;
      children.push_back(parse_node());
      skip_ws();
      while (eat(',')) {
        children.push_back(parse_node());
        skip_ws();
      }
      if (!eat(')')) throw ParseError(line(), "expected ')' or ','");
    }
    skip_ws();
    const std::string label = read_label_chars();
    std::string tag;
    if (peek() == '#') {
      const int tag_line = line();
      ++pos_;
      const std::string body = read_label_chars();
      if (body.empty()) throw ParseError(tag_line, "empty hybrid tag after '#'");
      tag = "#" + body;
    }
    if (eat(':')) {
      const int len_line = line();
      std::string len;
      while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(peek())) ||
                                     peek() == '.' || peek() == '-' || peek() == '+' ||
                                     peek() == 'e' || peek() == 'E'))
        len += text_[pos_++];
      if (len.empty()) throw ParseError(len_line, "expected a branch length after ':'");
      // Branch lengths carry no topological information and are discarded.
    }

    int v;
    if (!tag.empty()) {
      const int here = line();
      HybridInfo& info = hybrids_[tag];
      if (info.occurrences == 0) {
        info.vertex = g_.add_vertex(label.empty() ? tag : label);
        info.first_line = here;
        info.labeled = !label.empty();
      } else if (!label.empty()) {
        if (info.labeled && g_.label(info.vertex) != label)
          throw ParseError(here, "hybrid tag \"" + tag + "\" carries conflicting labels \"" +
                                     g_.label(info.vertex) + "\" and \"" + label + "\"");
        g_.set_label(info.vertex, label);
        info.labeled = true;
      }
      ++info.occurrences;
      if (has_children) {
        if (info.has_children)
          throw ParseError(here, "hybrid tag \"" + tag + "\" defines children more than once");
        info.has_children = true;
      }
      v = info.vertex;
    } else {
      v = g_.add_vertex(label.empty() ? "_" + std::to_string(++auto_labels_) : label);
    }

    for (const int c : children) {
      const int here = line();
      if (c == v) throw SelfLoopError(here, g_.label(v));
      if (g_.has_arc(v, c)) throw DuplicateArcError(here, g_.label(v), g_.label(c));
      g_.add_arc(v, c);
    }
    return v;
  }

  void check_unique_labels() {
    std::unordered_set<std::string> seen;
    for (int v = 0; v < g_.vertex_count(); ++v) {
      if (!seen.insert(g_.label(v)).second)
        throw ParseError(0, "duplicate vertex label \"" + g_.label(v) + "\"");
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Digraph g_;
  std::unordered_map<std::string, HybridInfo> hybrids_;
  int auto_labels_ = 0;
};

}  // namespace detail

inline Digraph parse_enewick(const std::string& text) {
  return detail::EnewickParser(text).parse();
}

// ---------------------------------------------------------------------------
// Layout files
//
// Linear extensions: one vertex label per line, first line placed first.
// Tree extensions: one "child parent" pair per line, "-" as the root's
// parent.  '#' comments and blank lines are allowed in both.

namespace detail {

inline std::vector<std::vector<std::string>> layout_file_rows(const std::string& text,
                                                              std::vector<int>& row_lines) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream tokens(line);
    std::vector<std::string> row;
    std::string tok;
    while (tokens >> tok) row.push_back(tok);
    if (row.empty()) continue;
    rows.push_back(std::move(row));
    row_lines.push_back(line_no);
  }
  return rows;
}

inline int vertex_by_label(const Digraph& g, const std::string& label, int line_no) {
  const int v = g.find_vertex(label);
  if (v < 0) throw ParseError(line_no, "unknown vertex label \"" + label + "\"");
  return v;
}

}  // namespace detail

inline Extension parse_extension_file(const std::string& text, const Digraph& g) {
  std::vector<int> row_lines;
  const auto rows = detail::layout_file_rows(text, row_lines);
  Extension e;
  std::vector<bool> used(static_cast<std::size_t>(g.vertex_count()), false);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != 1)
      throw ParseError(row_lines[i], "expected exactly one vertex label per line");
    const int v = detail::vertex_by_label(g, rows[i][0], row_lines[i]);
    if (used[static_cast<std::size_t>(v)])
      throw ParseError(row_lines[i], "vertex \"" + rows[i][0] + "\" listed twice");
    used[static_cast<std::size_t>(v)] = true;
    e.order.push_back(v);
  }
  if (static_cast<int>(e.order.size()) != g.vertex_count())
    throw ParseError(0, "layout lists " + std::to_string(e.order.size()) + " of " +
                            std::to_string(g.vertex_count()) + " vertices");
  return e;
}

inline TreeExtension parse_tree_extension_file(const std::string& text, const Digraph& g) {
  std::vector<int> row_lines;
  const auto rows = detail::layout_file_rows(text, row_lines);
  TreeExtension t;
  t.parent.assign(static_cast<std::size_t>(g.vertex_count()), -2);  // -2: unseen
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != 2)
      throw ParseError(row_lines[i], "expected \"child parent\" per line (\"-\" for the root)");
    const int child = detail::vertex_by_label(g, rows[i][0], row_lines[i]);
    if (t.parent[static_cast<std::size_t>(child)] != -2)
      throw ParseError(row_lines[i], "vertex \"" + rows[i][0] + "\" listed twice");
    if (rows[i][1] == "-") {
      if (t.root >= 0)
        throw ParseError(row_lines[i], "more than one root line");
      t.parent[static_cast<std::size_t>(child)] = -1;
      t.root = child;
    } else {
      t.parent[static_cast<std::size_t>(child)] =
          detail::vertex_by_label(g, rows[i][1], row_lines[i]);
    }
  }
  for (int v = 0; v < g.vertex_count(); ++v) {
    if (t.parent[static_cast<std::size_t>(v)] == -2)
      throw ParseError(0, "vertex \"" + g.label(v) + "\" has no parent line");
  }
  if (t.root < 0) throw ParseError(0, "no root line (parent \"-\") found");
  return t;
}

inline std::string serialize_extension(const Digraph& g, const Extension& e) {
  std::string out;
  for (const int v : e.order) out += g.label(v) + "\n";
  return out;
}

inline std::string serialize_tree_extension(const Digraph& g, const TreeExtension& t) {
  std::string out;
  for (int v = 0; v < g.vertex_count(); ++v) {
    const int p = t.parent[static_cast<std::size_t>(v)];
    out += g.label(v) + "\t" + (p < 0 ? std::string("-") : g.label(p)) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Result records

struct ReductionSummary {
  int blocks = 0;
  int suppressed = 0;
  int largest_block = 0;  // vertex count of the largest reduced general block
};

struct ResultRecord {
  std::string input_id;
  std::string algorithm;
  std::string status = "ok";  // "ok" | "timeout" | "error"
  std::optional<weight_t> scanwidth;
  std::optional<weight_t> lower_bound;
  std::optional<std::vector<std::string>> extension;  // labels, first placed first
  std::optional<std::vector<std::pair<std::string, std::string>>> tree_extension;
  double wall_time_s = 0.0;
  int vertices = 0;
  int arcs = 0;
  std::optional<ReductionSummary> reduction;
  std::optional<std::uint64_t> seed;
};

inline nlohmann::ordered_json record_to_json(const ResultRecord& r) {
  using json = nlohmann::ordered_json;
  json j;
  j["input"] = r.input_id;
  j["algorithm"] = r.algorithm;
  j["status"] = r.status;
  j["scanwidth"] = r.scanwidth ? json(*r.scanwidth) : json(nullptr);
  j["lower_bound"] = r.lower_bound ? json(*r.lower_bound) : json(nullptr);
  j["extension"] = r.extension ? json(*r.extension) : json(nullptr);
  if (r.tree_extension) {
    json pairs = json::array();
    for (const auto& [child, parent] : *r.tree_extension) pairs.push_back({child, parent});
    j["tree_extension"] = std::move(pairs);
  } else {
    j["tree_extension"] = nullptr;
  }
  j["wall_time_s"] = r.wall_time_s;
  j["vertices"] = r.vertices;
  j["arcs"] = r.arcs;
  if (r.reduction) {
    j["reduction"] = {{"blocks", r.reduction->blocks},
                      {"suppressed", r.reduction->suppressed},
                      {"largest_block", r.reduction->largest_block}};
  } else {
    j["reduction"] = nullptr;
  }
  j["seed"] = r.seed ? json(*r.seed) : json(nullptr);
  return j;
}

inline std::string record_tsv_header() {
  return "input\talgorithm\tstatus\tscanwidth\tlower_bound\twall_time_s\tvertices\tarcs\tseed";
}

inline std::string record_to_tsv_row(const ResultRecord& r) {
  const auto opt = [](const auto& o) {
    return o ? std::to_string(*o) : std::string("-");
  };
  char time_buf[32];
  std::snprintf(time_buf, sizeof(time_buf), "%.6f", r.wall_time_s);
  std::string row = r.input_id;
  row += '\t';
  row += r.algorithm;
  row += '\t';
  row += r.status;
  row += '\t';
  row += opt(r.scanwidth);
  row += '\t';
  row += opt(r.lower_bound);
  row += '\t';
  row += time_buf;
  row += '\t';
  row += std::to_string(r.vertices);
  row += '\t';
  row += std::to_string(r.arcs);
  row += '\t';
  row += opt(r.seed);
  return row;
}

}  // namespace scanwidth
