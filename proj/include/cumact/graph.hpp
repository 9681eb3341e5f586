#pragma once
// Directed influence graphs: per-edge activation probabilities, per-node
// activation thresholds, and target sets.
//
// Nodes are dense uint32 ids [0, n) in memory. Edge-list files may name nodes
// with arbitrary whitespace-free tokens; the loader assigns dense ids by
// first appearance and keeps the token table so all output can speak the
// caller's ids.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "cumact/rng.hpp"

namespace cumact {

// Malformed input or violated precondition. The CLI maps it to exit code 2.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Arc {
  std::uint32_t to = 0;  // head on out-arcs, tail on in-arcs
  double p = 0.0;
};

struct Graph {
  std::uint32_t n = 0;
  std::uint64_t m = 0;  // stored arcs; an undirected edge contributes two
  bool directed = true;
  bool has_probs = false;
  std::vector<std::vector<Arc>> out;
  std::vector<std::vector<Arc>> in;
  std::vector<std::string> labels;                     // dense id -> token
  std::unordered_map<std::string, std::uint32_t> ids;  // token -> dense id

  std::uint32_t out_degree(std::uint32_t u) const {
    return static_cast<std::uint32_t>(out[u].size());
  }
  std::uint32_t in_degree(std::uint32_t v) const {
    return static_cast<std::uint32_t>(in[v].size());
  }
  const std::string& label(std::uint32_t u) const { return labels[u]; }

  std::uint32_t add_node(const std::string& token) {
    auto it = ids.find(token);
    if (it != ids.end()) return it->second;
    std::uint32_t id = n++;
    ids.emplace(token, id);
    labels.push_back(token);
    out.emplace_back();
    in.emplace_back();
    return id;
  }

  void add_arc(std::uint32_t u, std::uint32_t v, double p) {
    if (u >= n || v >= n) throw ValidationError("arc endpoint out of range");
    if (u == v) throw ValidationError("self-loop on node '" + labels[u] + "'");
    out[u].push_back({v, p});
    in[v].push_back({u, p});
    ++m;
  }
};

namespace detail {

inline std::vector<std::string> split_tokens(const std::string& line) {
  std::vector<std::string> toks;
  std::istringstream is(line);
  std::string t;
  while (is >> t) toks.push_back(t);
  return toks;
}

inline double parse_prob(const std::string& tok, std::uint64_t line_no) {
  double p = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), p);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ValidationError("line " + std::to_string(line_no) + ": bad probability '" + tok + "'");
  if (!(p >= 0.0 && p <= 1.0))
    throw ValidationError("line " + std::to_string(line_no) + ": probability " + tok +
                          " outside [0,1]");
  return p;
}

// Shortest decimal that round-trips the double exactly.
inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace detail

// Reads "u v" or "u v p" lines; '#' starts a comment. All lines must carry
// the same column count. Rejects self-loops, duplicate arcs, probabilities
// outside [0,1], and empty input. With directed=false each edge is stored as
// two arcs of equal probability.
inline Graph load_edge_list(std::istream& src, bool directed) {
  Graph g;
  g.directed = directed;
  std::unordered_set<std::uint64_t> seen;
  std::string line;
  std::uint64_t line_no = 0;
  int columns = 0;  // 0 until the first edge line fixes it
  while (std::getline(src, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    auto toks = detail::split_tokens(line);
    if (toks.empty()) continue;
    if (toks.size() != 2 && toks.size() != 3)
      throw ValidationError("line " + std::to_string(line_no) + ": expected 'u v' or 'u v p'");
    if (columns == 0) columns = static_cast<int>(toks.size());
    if (static_cast<int>(toks.size()) != columns)
      throw ValidationError("line " + std::to_string(line_no) +
                            ": inconsistent column count (file mixes 'u v' and 'u v p')");
    if (toks[0] == toks[1])
      throw ValidationError("line " + std::to_string(line_no) + ": self-loop on '" + toks[0] + "'");
    double p = columns == 3 ? detail::parse_prob(toks[2], line_no) : 0.0;
    std::uint32_t u = g.add_node(toks[0]);
    std::uint32_t v = g.add_node(toks[1]);
    auto key = [](std::uint32_t a, std::uint32_t b) {
      return (static_cast<std::uint64_t>(a) << 32) | b;
    };
    if (!seen.insert(key(u, v)).second)
      throw ValidationError("line " + std::to_string(line_no) + ": duplicate edge '" + toks[0] +
                            " " + toks[1] + "'");
    g.add_arc(u, v, p);
    if (!directed) {
      if (!seen.insert(key(v, u)).second)
        throw ValidationError("line " + std::to_string(line_no) + ": duplicate edge '" + toks[0] +
                              " " + toks[1] + "' (undirected)");
      g.add_arc(v, u, p);
    }
  }
  if (g.m == 0) throw ValidationError("edge list is empty");
  g.has_probs = columns == 3;
  return g;
}

inline Graph load_edge_list(const std::string& path, bool directed) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot open edge list '" + path + "'");
  return load_edge_list(f, directed);
}

// Writes "u v p" lines in dense-id order using original tokens; output is
// loadable by load_edge_list and byte-stable for a given graph.
inline void write_edge_list(const Graph& g, std::ostream& os) {
  for (std::uint32_t u = 0; u < g.n; ++u)
    for (const Arc& a : g.out[u])
      os << g.labels[u] << ' ' << g.labels[a.to] << ' ' << detail::format_double(a.p) << '\n';
}

struct ProbModel {
  enum class Kind { Constant, WeightedCascade, Trivalency };
  Kind kind = Kind::Constant;
  double p = 0.1;                  // Constant
  std::vector<double> node_count;  // WeightedCascade d(v); empty -> in-degree
  std::unordered_map<std::uint64_t, double> edge_count;  // c(u,v) by (u<<32)|v; missing -> 1

  static ProbModel constant(double p) {
    ProbModel m;
    m.kind = Kind::Constant;
    m.p = p;
    return m;
  }
  static ProbModel weighted_cascade() {
    ProbModel m;
    m.kind = Kind::WeightedCascade;
    return m;
  }
  static ProbModel trivalency() {
    ProbModel m;
    m.kind = Kind::Trivalency;
    return m;
  }
};

namespace detail {
inline void set_in_arcs_from_out(Graph& g) {
  for (auto& v : g.in) v.clear();
  for (std::uint32_t u = 0; u < g.n; ++u)
    for (const Arc& a : g.out[u]) g.in[a.to].push_back({u, a.p});
}
}  // namespace detail

// Fills in edge probabilities on a graph loaded without them.
//   Constant:        p on every arc.
//   WeightedCascade: p(u,v) = c(u,v)/d(v) with d(v) defaulting to in-degree
//                    and c(u,v) to 1.
//   Trivalency:      uniform from {0.1, 0.01, 0.001}, deterministic in seed.
inline void assign_probabilities(Graph& g, const ProbModel& model, std::uint64_t seed) {
  if (g.has_probs) throw ValidationError("graph already carries probabilities");
  if (g.m == 0) throw ValidationError("graph has no edges");
  switch (model.kind) {
    case ProbModel::Kind::Constant: {
      if (!(model.p >= 0.0 && model.p <= 1.0))
        throw ValidationError("constant probability outside [0,1]");
      for (std::uint32_t u = 0; u < g.n; ++u)
        for (Arc& a : g.out[u]) a.p = model.p;
      break;
    }
    case ProbModel::Kind::WeightedCascade: {
      if (!model.node_count.empty() && model.node_count.size() != g.n)
        throw ValidationError("node count table size mismatch");
      for (std::uint32_t u = 0; u < g.n; ++u)
        for (Arc& a : g.out[u]) {
          double d = model.node_count.empty() ? static_cast<double>(g.in_degree(a.to))
                                              : model.node_count[a.to];
          if (d <= 0.0)
            throw ValidationError("weighted cascade: d('" + g.labels[a.to] +
                                  "') is zero but the node has incoming edges");
          double c = 1.0;
          auto it = model.edge_count.find((static_cast<std::uint64_t>(u) << 32) | a.to);
          if (it != model.edge_count.end()) c = it->second;
          a.p = c / d;
          if (!(a.p >= 0.0 && a.p <= 1.0))
            throw ValidationError("weighted cascade: p('" + g.labels[u] + "','" + g.labels[a.to] +
                                  "') = " + detail::format_double(a.p) + " outside [0,1]");
        }
      break;
    }
    case ProbModel::Kind::Trivalency: {
      static constexpr double kLevels[3] = {0.1, 0.01, 0.001};
      Rng rng = substream(seed, stream::kProbs);
      for (std::uint32_t u = 0; u < g.n; ++u)
        for (Arc& a : g.out[u]) a.p = kLevels[rng.next_below(3)];
      break;
    }
  }
  detail::set_in_arcs_from_out(g);
  g.has_probs = true;
}

// Per-node activation thresholds, all in (0, 1].
struct Thresholds {
  std::vector<double> tau;

  static Thresholds uniform(std::uint32_t n, double t) {
    if (!(t > 0.0 && t <= 1.0)) throw ValidationError("threshold must lie in (0,1]");
    Thresholds th;
    th.tau.assign(n, t);
    return th;
  }
  double sum() const {
    double s = 0.0;
    for (double t : tau) s += t;
    return s;
  }
};

// Reads "node tau" lines ('#' comments). Every node of the graph must be
// covered exactly once.
inline Thresholds load_thresholds(std::istream& src, const Graph& g) {
  Thresholds th;
  th.tau.assign(g.n, 0.0);
  std::vector<std::uint8_t> seen(g.n, 0);
  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(src, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    auto toks = detail::split_tokens(line);
    if (toks.empty()) continue;
    if (toks.size() != 2)
      throw ValidationError("line " + std::to_string(line_no) + ": expected 'node tau'");
    auto it = g.ids.find(toks[0]);
    if (it == g.ids.end())
      throw ValidationError("line " + std::to_string(line_no) + ": unknown node '" + toks[0] +
                            "'");
    if (seen[it->second])
      throw ValidationError("line " + std::to_string(line_no) + ": duplicate node '" + toks[0] +
                            "'");
    double t = 0.0;
    auto [ptr, ec] = std::from_chars(toks[1].data(), toks[1].data() + toks[1].size(), t);
    if (ec != std::errc() || ptr != toks[1].data() + toks[1].size() || !(t > 0.0 && t <= 1.0))
      throw ValidationError("line " + std::to_string(line_no) + ": threshold '" + toks[1] +
                            "' must lie in (0,1]");
    seen[it->second] = 1;
    th.tau[it->second] = t;
  }
  for (std::uint32_t v = 0; v < g.n; ++v)
    if (!seen[v]) throw ValidationError("no threshold for node '" + g.labels[v] + "'");
  return th;
}

inline Thresholds load_thresholds(const std::string& path, const Graph& g) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot open threshold file '" + path + "'");
  return load_thresholds(f, g);
}

// Nonempty subset of nodes whose activation the problem counts.
struct TargetSet {
  std::vector<std::uint32_t> members;  // ascending dense ids
  std::vector<std::uint8_t> mask;      // size n

  std::size_t size() const { return members.size(); }
  bool contains(std::uint32_t u) const { return u < mask.size() && mask[u]; }

  static TargetSet all(std::uint32_t n) {
    TargetSet t;
    t.members.resize(n);
    for (std::uint32_t v = 0; v < n; ++v) t.members[v] = v;
    t.mask.assign(n, 1);
    if (n == 0) throw ValidationError("target set is empty");
    return t;
  }

  static TargetSet of(std::vector<std::uint32_t> nodes, std::uint32_t n) {
    if (nodes.empty()) throw ValidationError("target set is empty");
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    TargetSet t;
    t.mask.assign(n, 0);
    for (std::uint32_t v : nodes) {
      if (v >= n) throw ValidationError("target node id out of range");
      t.mask[v] = 1;
    }
    t.members = std::move(nodes);
    return t;
  }
};

// Reads one node token per line ('#' comments).
inline TargetSet load_target_set(std::istream& src, const Graph& g) {
  std::vector<std::uint32_t> nodes;
  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(src, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    auto toks = detail::split_tokens(line);
    if (toks.empty()) continue;
    if (toks.size() != 1)
      throw ValidationError("line " + std::to_string(line_no) + ": expected one node per line");
    auto it = g.ids.find(toks[0]);
    if (it == g.ids.end())
      throw ValidationError("line " + std::to_string(line_no) + ": unknown node '" + toks[0] +
                            "'");
    nodes.push_back(it->second);
  }
  return TargetSet::of(std::move(nodes), g.n);
}

inline TargetSet load_target_set(const std::string& path, const Graph& g) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot open target file '" + path + "'");
  return load_target_set(f, g);
}

struct ValidationReport {
  std::vector<std::string> problems;
  bool ok() const { return problems.empty(); }
};

// Structural checks: probability ranges, in == transpose(out), label table
// consistency, threshold ranges, target sanity. Returns findings instead of
// throwing so callers can report them all at once.
inline ValidationReport validate(const Graph& g, const Thresholds& th, const TargetSet& target) {
  ValidationReport rep;
  auto note = [&rep](std::string msg) { rep.problems.push_back(std::move(msg)); };
  if (g.out.size() != g.n || g.in.size() != g.n) note("adjacency size differs from n");
  if (g.labels.size() != g.n || g.ids.size() != g.n) note("label table size differs from n");
  std::uint64_t arcs = 0;
  std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> fwd, rev;
  for (std::uint32_t u = 0; u < g.n && u < g.out.size(); ++u)
    for (const Arc& a : g.out[u]) {
      ++arcs;
      if (a.to >= g.n) note("out-arc head out of range");
      if (a.to == u) note("self-loop on node '" + g.labels[u] + "'");
      if (!(a.p >= 0.0 && a.p <= 1.0))
        note("p(" + g.labels[u] + "," + g.labels[a.to] + ") outside [0,1]");
      fwd.emplace_back(u, a.to, a.p);
    }
  if (arcs != g.m) note("m differs from stored arc count");
  for (std::uint32_t v = 0; v < g.n && v < g.in.size(); ++v)
    for (const Arc& a : g.in[v]) {
      if (a.to >= g.n) note("in-arc tail out of range");
      rev.emplace_back(a.to, v, a.p);
    }
  std::sort(fwd.begin(), fwd.end());
  std::sort(rev.begin(), rev.end());
  if (fwd != rev) note("in-adjacency is not the transpose of out-adjacency");
  if (th.tau.size() != g.n) note("threshold table size differs from n");
  for (std::size_t v = 0; v < th.tau.size(); ++v)
    if (!(th.tau[v] > 0.0 && th.tau[v] <= 1.0))
      note("threshold of node '" + (v < g.labels.size() ? g.labels[v] : std::to_string(v)) +
           "' outside (0,1]");
  if (target.members.empty()) note("target set is empty");
  if (target.mask.size() != g.n) note("target mask size differs from n");
  for (std::uint32_t u : target.members)
    if (u >= g.n) note("target node id out of range");
  return rep;
}

}  // namespace cumact
