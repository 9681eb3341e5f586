#pragma once
// Experiment harness: a declarative sweep over (algorithm, tau, c, budget)
// grids with held-out Monte-Carlo evaluation and CSV output.
//
// Two rules keep the numbers honest. First, evaluation never reuses solver
// randomness: it draws from its own stream, keyed per row, and can be moved
// to a completely separate seed to show results are not tuned to the
// evaluation draw. Second, each (algorithm, tau, c) cell is solved once at
// the largest budget and smaller budgets are read off as prefixes, which is
// exactly what the greedy solvers and rankers produce anyway — so a budget
// sweep costs one solve, and rows within a cell are mutually consistent.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cumact/baselines.hpp"
#include "cumact/graph.hpp"
#include "cumact/monte_carlo.hpp"
#include "cumact/rng.hpp"
#include "cumact/rr_index.hpp"
#include "cumact/solvers.hpp"

namespace cumact {

struct ExperimentConfig {
  std::string graph_path;               // edge-list file (CLI side)
  bool directed = true;
  std::string prob_model = "given";     // given | constant | wc | tri
  double p = 0.1;                       // constant-model probability
  std::string problem = "im-ca";        // im-ca | sm-ca
  std::vector<std::string> algorithms{"adg"};
  std::vector<double> taus{0.5};        // uniform threshold grid
  std::vector<double> cs{1.0};          // truncation grid (btg only)
  std::vector<std::uint64_t> budgets{1};  // k values (im-ca) or eta values (sm-ca)
  std::uint32_t theta = 1000;
  std::uint64_t runs = 10000;           // evaluation cascades per row
  std::uint64_t master_seed = 1;
  std::uint64_t eval_seed = 0;          // 0 = derive from master_seed
  std::string target_path;              // empty = every node is a target
  std::uint64_t mem_budget = kDefaultMemBudget;
};

inline const char* kCsvHeader =
    "algorithm,tau,c,budget_or_eta,seeds,seed_count,rho_eval,runtime_ms,status,master_seed";

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s, const std::string& key) {
  std::vector<std::string> items;
  std::size_t pos = 0;
  while (true) {
    std::size_t comma = s.find(',', pos);
    std::string item = trim(comma == std::string::npos ? s.substr(pos) : s.substr(pos, comma - pos));
    if (item.empty()) throw ValidationError("config key '" + key + "' has an empty list item");
    items.push_back(item);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return items;
}

inline double parse_double_value(const std::string& s, const std::string& key) {
  const char* begin = s.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end != begin + s.size() || s.empty())
    throw ValidationError("config key '" + key + "' has a malformed number: '" + s + "'");
  return v;
}

inline std::uint64_t parse_u64_value(const std::string& s, const std::string& key) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ValidationError("config key '" + key + "' has a malformed integer: '" + s + "'");
  return v;
}

inline bool parse_bool_value(const std::string& s, const std::string& key) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw ValidationError("config key '" + key + "' must be true or false");
}

inline void set_config_key(ExperimentConfig& cfg, const std::string& key,
                           const std::string& value) {
  if (key == "graph") {
    cfg.graph_path = value;
  } else if (key == "directed") {
    cfg.directed = parse_bool_value(value, key);
  } else if (key == "prob_model") {
    cfg.prob_model = value;
  } else if (key == "p") {
    cfg.p = parse_double_value(value, key);
  } else if (key == "problem") {
    cfg.problem = value;
  } else if (key == "algorithms") {
    cfg.algorithms = split_list(value, key);
  } else if (key == "taus") {
    cfg.taus.clear();
    for (const auto& item : split_list(value, key))
      cfg.taus.push_back(parse_double_value(item, key));
  } else if (key == "cs") {
    cfg.cs.clear();
    for (const auto& item : split_list(value, key))
      cfg.cs.push_back(parse_double_value(item, key));
  } else if (key == "budgets") {
    cfg.budgets.clear();
    for (const auto& item : split_list(value, key))
      cfg.budgets.push_back(parse_u64_value(item, key));
  } else if (key == "theta") {
    const std::uint64_t v = parse_u64_value(value, key);
    if (v == 0 || v > 0xffffffffull) throw ValidationError("theta out of range");
    cfg.theta = static_cast<std::uint32_t>(v);
  } else if (key == "runs") {
    cfg.runs = parse_u64_value(value, key);
  } else if (key == "master_seed") {
    cfg.master_seed = parse_u64_value(value, key);
  } else if (key == "eval_seed") {
    cfg.eval_seed = parse_u64_value(value, key);
  } else if (key == "target") {
    cfg.target_path = value;
  } else if (key == "mem_budget") {
    cfg.mem_budget = parse_u64_value(value, key);
  } else {
    throw ValidationError("unknown config key '" + key + "'");
  }
}

}  // namespace detail

// key=value lines; '#' starts a comment, blank lines are skipped. Every key
// may appear at most once; unknown keys are errors.
inline ExperimentConfig parse_config(std::istream& src) {
  ExperimentConfig cfg;
  std::set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(src, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError("config line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty())
      throw ValidationError("config line " + std::to_string(lineno) + ": empty key");
    if (!seen.insert(key).second)
      throw ValidationError("config line " + std::to_string(lineno) + ": duplicate key '" +
                            key + "'");
    detail::set_config_key(cfg, key, value);
  }
  return cfg;
}

// A single "key=value" override, e.g. from a command-line flag; wins over the
// file value.
inline void apply_override(ExperimentConfig& cfg, const std::string& kv) {
  const std::size_t eq = kv.find('=');
  if (eq == std::string::npos) throw ValidationError("override must look like key=value");
  detail::set_config_key(cfg, detail::trim(kv.substr(0, eq)), detail::trim(kv.substr(eq + 1)));
}

// Echo of the fully resolved configuration, canonical key order. Feeding the
// output back through parse_config reproduces the configuration.
inline void write_config(std::ostream& os, const ExperimentConfig& cfg) {
  auto join_d = [](const std::vector<double>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i)
      s += (i ? "," : "") + detail::format_double(xs[i]);
    return s;
  };
  std::string budgets;
  for (std::size_t i = 0; i < cfg.budgets.size(); ++i)
    budgets += (i ? "," : "") + std::to_string(cfg.budgets[i]);
  std::string algos;
  for (std::size_t i = 0; i < cfg.algorithms.size(); ++i)
    algos += (i ? "," : "") + cfg.algorithms[i];
  os << "graph=" << cfg.graph_path << '\n';
  os << "directed=" << (cfg.directed ? "true" : "false") << '\n';
  os << "prob_model=" << cfg.prob_model << '\n';
  os << "p=" << detail::format_double(cfg.p) << '\n';
  os << "problem=" << cfg.problem << '\n';
  os << "algorithms=" << algos << '\n';
  os << "taus=" << join_d(cfg.taus) << '\n';
  os << "cs=" << join_d(cfg.cs) << '\n';
  os << "budgets=" << budgets << '\n';
  os << "theta=" << cfg.theta << '\n';
  os << "runs=" << cfg.runs << '\n';
  os << "master_seed=" << cfg.master_seed << '\n';
  os << "eval_seed=" << cfg.eval_seed << '\n';
  os << "target=" << cfg.target_path << '\n';
  os << "mem_budget=" << cfg.mem_budget << '\n';
}

inline const std::vector<std::string>& known_algorithms() {
  static const std::vector<std::string> kAlgos{"btg",    "adg",      "coverage",
                                               "degree", "pagerank", "random"};
  return kAlgos;
}

// Grid checks that need no graph. Graph-dependent checks (budgets vs n)
// happen inside run_experiment.
inline void validate_config(const ExperimentConfig& cfg) {
  if (cfg.problem != "im-ca" && cfg.problem != "sm-ca")
    throw ValidationError("problem must be im-ca or sm-ca");
  if (cfg.prob_model != "given" && cfg.prob_model != "constant" && cfg.prob_model != "wc" &&
      cfg.prob_model != "tri")
    throw ValidationError("prob_model must be one of given, constant, wc, tri");
  if (!(cfg.p >= 0.0 && cfg.p <= 1.0)) throw ValidationError("p must lie in [0,1]");
  if (cfg.algorithms.empty()) throw ValidationError("algorithms list is empty");
  const auto& known = known_algorithms();
  for (const auto& a : cfg.algorithms)
    if (std::find(known.begin(), known.end(), a) == known.end())
      throw ValidationError("unknown algorithm '" + a + "'");
  if (cfg.taus.empty()) throw ValidationError("taus list is empty");
  for (double t : cfg.taus)
    if (!(t > 0.0 && t <= 1.0)) throw ValidationError("every tau must lie in (0,1]");
  if (cfg.cs.empty()) throw ValidationError("cs list is empty");
  for (double c : cfg.cs)
    if (!(c >= 1.0)) throw ValidationError("every c must be at least 1");
  if (cfg.budgets.empty()) throw ValidationError("budgets list is empty");
  for (std::uint64_t b : cfg.budgets)
    if (b == 0) throw ValidationError("every budget must be at least 1");
  if (cfg.theta == 0) throw ValidationError("theta must be at least 1");
  if (cfg.runs == 0) throw ValidationError("runs must be at least 1");
}

struct EvalOutcome {
  std::uint64_t runs = 0;
  std::uint64_t active = 0;  // targets whose activation frequency clears tau
  bool boundary = false;     // some target sat within 1/sqrt(runs) of its tau
};

// Held-out evaluation on a dedicated stream: frequencies from `runs` fresh
// cascades, activity by plain comparison, plus a flag for estimates too close
// to their threshold for this run count to call.
inline EvalOutcome evaluate_seeds(const Graph& g, const std::vector<std::uint32_t>& seeds,
                                  const Thresholds& th, const TargetSet& target,
                                  std::uint64_t runs, std::uint64_t seed) {
  EvalOutcome out;
  out.runs = runs;
  if (seeds.empty()) return out;  // nothing activates without seeds
  auto est = estimate(g, seeds, th, target, runs, 1.0, mix_seed(seed, stream::kEval));
  out.active = est.rho_hat;
  const double band = 1.0 / std::sqrt(static_cast<double>(runs));
  std::vector<std::uint8_t> is_seed(g.n, 0);
  for (std::uint32_t s : seeds) is_seed[s] = 1;
  for (std::uint32_t u : target.members) {
    if (is_seed[u]) continue;  // seeds are active by definition, not by estimate
    if (std::abs(est.act.p_hat[u] - th.tau[u]) <= band) out.boundary = true;
  }
  return out;
}

namespace detail {

inline std::string csv_quote(const std::string& s) {
  std::string q = "\"";
  for (char ch : s) {
    q += ch;
    if (ch == '"') q += ch;
  }
  q += '"';
  return q;
}

inline std::string format_ms(double ms) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", ms);
  return buf;
}

// Greedy max-coverage pick on the live sets (the coverage baseline's move).
inline std::uint32_t pick_max_coverage(const RRIndex& ix,
                                       const std::vector<std::uint8_t>& selected) {
  std::vector<std::uint64_t> cnt(ix.n, 0);
  for (std::uint64_t gid = 0; gid < ix.set_count(); ++gid) {
    if (ix.removed[gid]) continue;
    for (std::uint64_t idx = ix.offs[gid]; idx < ix.offs[gid + 1]; ++idx) ++cnt[ix.nodes[idx]];
  }
  std::uint32_t best = 0;
  bool have = false;
  for (std::uint32_t v = 0; v < ix.n; ++v) {
    if (selected[v]) continue;
    if (!have || cnt[v] > cnt[best]) {
      best = v;
      have = true;
    }
  }
  return best;
}

// Seed order plus the estimated-active trace after each prefix, stopping once
// `stop_active` targets are active (0 = never stop early).
struct WalkResult {
  std::vector<std::uint32_t> order;
  std::vector<std::uint64_t> trace;
};

template <typename NextPick>
WalkResult removal_walk(RRIndex& ix, std::uint64_t stop_active, std::uint64_t max_picks,
                        NextPick next) {
  WalkResult w;
  std::vector<std::uint8_t> selected(ix.n, 0);
  while (w.order.size() < std::min<std::uint64_t>(ix.n, max_picks)) {
    if (stop_active > 0 && ix.estimated_active() >= stop_active) break;
    const std::uint32_t v = next(ix, selected);
    selected[v] = 1;
    remove_hit_sets(ix, v);
    w.order.push_back(v);
    w.trace.push_back(ix.estimated_active());
  }
  return w;
}

}  // namespace detail

// Runs the configured sweep on a graph whose probabilities are already in
// place. Rows follow the algorithms in configuration order, then tau, c and
// budget each ascending. Within one (algorithm, tau, c) cell everything comes
// from a single solve; budget rows are its prefixes. Returns the CSV text.
inline std::string run_experiment(const Graph& g, const TargetSet& target,
                                  const ExperimentConfig& cfg) {
  validate_config(cfg);
  if (!g.has_probs) throw ValidationError("sweep needs edge probabilities");
  if (target.members.empty()) throw ValidationError("target set is empty");

  std::vector<double> taus = cfg.taus, cs = cfg.cs;
  std::vector<std::uint64_t> budgets = cfg.budgets;
  std::sort(taus.begin(), taus.end());
  taus.erase(std::unique(taus.begin(), taus.end()), taus.end());
  std::sort(cs.begin(), cs.end());
  cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
  std::sort(budgets.begin(), budgets.end());
  budgets.erase(std::unique(budgets.begin(), budgets.end()), budgets.end());

  const bool budgeted = cfg.problem == "im-ca";
  if (budgeted && budgets.back() > g.n)
    throw ValidationError("largest budget exceeds the node count");
  const std::uint64_t targets_total = target.members.size();
  // largest eta this target set can meet; 0 when even the smallest cannot be
  std::uint64_t eta_cap = 0;
  if (!budgeted)
    for (std::uint64_t eta : budgets)
      if (eta <= targets_total) eta_cap = eta;

  const std::uint64_t eval_base = cfg.eval_seed ? cfg.eval_seed : cfg.master_seed;
  std::ostringstream out;
  out << kCsvHeader << '\n';

  for (std::size_t ai = 0; ai < cfg.algorithms.size(); ++ai) {
    const std::string& algo = cfg.algorithms[ai];
    const bool uses_c = algo == "btg";
    for (std::size_t ti = 0; ti < taus.size(); ++ti) {
      const Thresholds th = Thresholds::uniform(g.n, taus[ti]);
      const std::size_t c_rows = uses_c ? cs.size() : 1;
      for (std::size_t ci = 0; ci < c_rows; ++ci) {
        const double c = uses_c ? cs[ci] : 1.0;
        const auto t0 = std::chrono::steady_clock::now();

        // one solve per cell: seed order and, for coverage problems, the
        // estimated-active trace after each prefix
        std::vector<std::uint32_t> order;
        std::vector<std::uint64_t> trace;
        if ((algo == "btg" || algo == "adg") && (budgeted || eta_cap > 0)) {
          RRIndex ix = build_index(g, target, th, cfg.theta, cfg.master_seed, cfg.mem_budget);
          const Strategy strat = algo == "btg" ? Strategy::Btg : Strategy::Adg;
          if (budgeted) {
            RunReport rep =
                run_greedy(ix, ProblemSpec::im_ca(static_cast<std::uint32_t>(budgets.back())),
                           strat, c);
            order = rep.seeds;
          } else if (eta_cap > 0) {
            RunReport rep = run_greedy(ix, ProblemSpec::sm_ca(eta_cap), strat, c);
            order = rep.seeds;
            trace.reserve(rep.steps.size());
            for (const StepRecord& s : rep.steps) trace.push_back(s.est_active);
          }
        } else if (budgeted || eta_cap > 0) {
          if (algo == "coverage") {
            RRIndex ix = build_index(g, target, th, cfg.theta, cfg.master_seed, cfg.mem_budget);
            auto walk = detail::removal_walk(
                ix, budgeted ? 0 : eta_cap, budgeted ? budgets.back() : g.n,
                [](const RRIndex& i, const std::vector<std::uint8_t>& sel) {
                  return detail::pick_max_coverage(i, sel);
                });
            order = std::move(walk.order);
            trace = std::move(walk.trace);
          } else {
            Ranking rank = algo == "degree"     ? rank_by_degree(g)
                           : algo == "pagerank" ? pagerank(g)
                                                : random_ranking(g.n, cfg.master_seed);
            if (budgeted) {
              order = rank.top(static_cast<std::uint32_t>(budgets.back()));
            } else {
              RRIndex ix =
                  build_index(g, target, th, cfg.theta, cfg.master_seed, cfg.mem_budget);
              std::size_t cursor = 0;
              auto walk = detail::removal_walk(
                  ix, eta_cap, g.n, [&](const RRIndex&, const std::vector<std::uint8_t>&) {
                    return rank.order[cursor++];
                  });
              order = std::move(walk.order);
              trace = std::move(walk.trace);
            }
          }
        }
        const double cell_ms = detail::ms_since(t0);

        for (std::size_t bi = 0; bi < budgets.size(); ++bi) {
          const std::uint64_t budget = budgets[bi];
          std::vector<std::uint32_t> seeds;
          bool feasible = true;
          if (budgeted) {
            seeds.assign(order.begin(), order.begin() + budget);
          } else if (budget > targets_total) {
            feasible = false;
          } else {
            std::size_t len = trace.size();
            for (std::size_t i = 0; i < trace.size(); ++i)
              if (trace[i] >= budget) {
                len = i + 1;
                break;
              }
            seeds.assign(order.begin(), order.begin() + len);
          }
          const std::uint64_t row_seed =
              mix_seed(mix_seed(mix_seed(mix_seed(eval_base, ai), ti), ci), bi);
          EvalOutcome ev = evaluate_seeds(g, seeds, th, target, cfg.runs, row_seed);
          std::string labels;
          for (std::size_t i = 0; i < seeds.size(); ++i)
            labels += (i ? ";" : "") + g.label(seeds[i]);
          out << algo << ',' << detail::format_double(taus[ti]) << ','
              << detail::format_double(c) << ',' << budget << ',' << detail::csv_quote(labels)
              << ',' << seeds.size() << ',' << ev.active << ',' << detail::format_ms(cell_ms)
              << ',' << (feasible ? "ok" : "infeasible") << ',' << cfg.master_seed << '\n';
        }
      }
    }
  }
  return out.str();
}

}  // namespace cumact
