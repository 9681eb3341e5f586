// Command-line front end for the cumulative-activation seeding toolkit.
//
// Subcommands:
//   gen-probs  attach a probability model to a bare edge list
//   solve      run a seeding solver (im-ca budget mode or sm-ca coverage mode)
//   baseline   rank nodes with a reference heuristic
//   eval       estimate what a given seed set achieves, on held-out cascades
//   sweep      run a configured experiment grid and emit CSV
//
// Exit codes: 0 success, 2 validation/usage error, 3 infeasible coverage
// demand, 1 unexpected failure.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cumact/baselines.hpp"
#include "cumact/experiment.hpp"
#include "cumact/graph.hpp"
#include "cumact/monte_carlo.hpp"
#include "cumact/oracle.hpp"
#include "cumact/rng.hpp"
#include "cumact/rr_index.hpp"
#include "cumact/solvers.hpp"

namespace {

using namespace cumact;

struct CommonGraphArgs {
  std::string graph_path;
  bool undirected = false;
};

void add_graph_flags(CLI::App* cmd, CommonGraphArgs& args) {
  cmd->add_option("--graph", args.graph_path, "edge-list file")->required();
  cmd->add_flag("--undirected", args.undirected,
                "treat each listed edge as a pair of opposite arcs");
}

struct ThresholdArgs {
  double tau = 0.5;
  bool tau_set = false;
  std::string tau_file;
};

void add_threshold_flags(CLI::App* cmd, ThresholdArgs& args) {
  cmd->add_option("--tau", args.tau, "uniform activation threshold in (0,1] (default 0.5)")
      ->check(CLI::Range(0.0, 1.0))
      ->each([&args](const std::string&) { args.tau_set = true; });
  cmd->add_option("--tau-file", args.tau_file, "per-node thresholds, 'node tau' lines");
}

Thresholds resolve_thresholds(const Graph& g, const ThresholdArgs& args) {
  if (args.tau_set && !args.tau_file.empty())
    throw ValidationError("--tau and --tau-file are mutually exclusive");
  if (!args.tau_file.empty()) return load_thresholds(args.tau_file, g);
  return Thresholds::uniform(g.n, args.tau);
}

TargetSet resolve_target(const Graph& g, const std::string& target_file) {
  if (target_file.empty()) return TargetSet::all(g.n);
  return load_target_set(target_file, g);
}

std::vector<std::uint32_t> parse_seed_labels(const Graph& g, const std::string& joined) {
  std::vector<std::uint32_t> seeds;
  std::size_t pos = 0;
  while (pos <= joined.size()) {
    const std::size_t sep = joined.find(';', pos);
    const std::string token =
        sep == std::string::npos ? joined.substr(pos) : joined.substr(pos, sep - pos);
    if (token.empty()) throw ValidationError("empty seed label in --seeds");
    auto it = g.ids.find(token);
    if (it == g.ids.end()) throw ValidationError("unknown seed node '" + token + "'");
    seeds.push_back(it->second);
    if (sep == std::string::npos) break;
    pos = sep + 1;
  }
  return seeds;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(out_path, std::ios::binary);
  if (!os) throw ValidationError("cannot open output file: " + out_path);
  os << text;
  if (!os.flush()) throw ValidationError("failed writing output file: " + out_path);
}

int run_cli(int argc, char** argv) {
  CLI::App app{"seed selection under cumulative activation thresholds"};
  app.require_subcommand(1);

  // ---- gen-probs -----------------------------------------------------------
  auto* gen = app.add_subcommand("gen-probs", "attach a probability model to a bare edge list");
  CommonGraphArgs gen_graph;
  add_graph_flags(gen, gen_graph);
  std::string gen_model = "constant";
  double gen_p = 0.1;
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  gen->add_option("--model", gen_model, "constant | wc | tri")
      ->check(CLI::IsMember({"constant", "wc", "tri"}));
  gen->add_option("--p", gen_p, "probability for the constant model (default 0.1)")
      ->check(CLI::Range(0.0, 1.0));
  gen->add_option("--seed", gen_seed, "master seed (trivalency draws)");
  gen->add_option("--out", gen_out, "output edge list (default stdout)");

  // ---- solve ---------------------------------------------------------------
  auto* solve = app.add_subcommand("solve", "run a seeding solver");
  solve->require_subcommand(1);

  CommonGraphArgs im_graph;
  ThresholdArgs im_tau;
  std::uint32_t im_k = 1;
  std::string im_strategy = "adg";
  double im_c = 1.7;
  std::uint32_t im_theta = 1000;
  std::uint64_t im_seed = 1;
  std::string im_target, im_out;
  std::uint64_t im_mem = kDefaultMemBudget;
  auto* imca = solve->add_subcommand("im-ca", "maximize activations under a seed budget");
  add_graph_flags(imca, im_graph);
  add_threshold_flags(imca, im_tau);
  imca->add_option("--k", im_k, "seed budget")->required();
  imca->add_option("--strategy", im_strategy, "btg | adg (default adg)")
      ->check(CLI::IsMember({"btg", "adg"}));
  imca->add_option("--c", im_c, "benefit-truncation factor, >= 1 (default 1.7)");
  imca->add_option("--theta", im_theta, "reverse sets per target (default 1000)");
  imca->add_option("--seed", im_seed, "master seed (default 1)");
  imca->add_option("--target-file", im_target, "target nodes, one label per line");
  imca->add_option("--out", im_out, "report file (default stdout)");
  imca->add_option("--mem-budget", im_mem, "index memory budget in bytes");

  CommonGraphArgs sm_graph;
  ThresholdArgs sm_tau;
  std::uint64_t sm_eta = 1;
  std::string sm_strategy = "adg";
  double sm_c = 1.0;
  std::uint32_t sm_theta = 1000;
  std::uint64_t sm_seed = 1;
  std::string sm_target, sm_out;
  std::uint64_t sm_mem = kDefaultMemBudget;
  double sm_epsilon = 0.1;
  std::string sm_estimator = "rr";
  std::uint64_t sm_runs = 10000;
  auto* smca = solve->add_subcommand("sm-ca", "activate a demanded number of targets");
  add_graph_flags(smca, sm_graph);
  add_threshold_flags(smca, sm_tau);
  smca->add_option("--eta", sm_eta, "number of targets to activate");
  smca->add_option("--strategy", sm_strategy, "btg | adg | surrogate (default adg)")
      ->check(CLI::IsMember({"btg", "adg", "surrogate"}));
  smca->add_option("--c", sm_c, "benefit-truncation factor, >= 1 (default 1)");
  smca->add_option("--theta", sm_theta, "reverse sets per target (default 1000)");
  smca->add_option("--seed", sm_seed, "master seed (default 1)");
  smca->add_option("--target-file", sm_target, "target nodes, one label per line");
  smca->add_option("--out", sm_out, "report file (default stdout)");
  smca->add_option("--mem-budget", sm_mem, "index memory budget in bytes");
  smca->add_option("--epsilon", sm_epsilon,
                   "surrogate only: stop within epsilon of the threshold sum (default 0.1)");
  smca->add_option("--estimator", sm_estimator, "surrogate only: exact | mc | rr (default rr)")
      ->check(CLI::IsMember({"exact", "mc", "rr"}));
  smca->add_option("--runs", sm_runs, "surrogate mc estimator: cascades per probe");

  // ---- baseline ------------------------------------------------------------
  auto* base = app.add_subcommand("baseline", "rank nodes with a reference heuristic");
  CommonGraphArgs base_graph;
  ThresholdArgs base_tau;
  std::string base_name;
  std::uint32_t base_k = 0;  // 0 = full ranking
  std::uint32_t base_theta = 1000;
  std::uint64_t base_seed = 1;
  std::string base_target, base_out;
  base->add_option("name", base_name, "coverage | degree | pagerank | random")
      ->required()
      ->check(CLI::IsMember({"coverage", "degree", "pagerank", "random"}));
  add_graph_flags(base, base_graph);
  add_threshold_flags(base, base_tau);
  base->add_option("--k", base_k, "ranking length (default: all nodes)");
  base->add_option("--theta", base_theta, "coverage only: reverse sets per target");
  base->add_option("--seed", base_seed, "master seed (random ranking)");
  base->add_option("--target-file", base_target, "coverage only: target nodes");
  base->add_option("--out", base_out, "ranking file (default stdout)");

  // ---- eval ----------------------------------------------------------------
  auto* eval = app.add_subcommand("eval", "estimate a seed set on held-out cascades");
  CommonGraphArgs eval_graph;
  ThresholdArgs eval_tau;
  std::string eval_seeds_arg, eval_target, eval_out;
  std::uint64_t eval_runs = 10000;
  std::uint64_t eval_seed_val = 1;
  add_graph_flags(eval, eval_graph);
  add_threshold_flags(eval, eval_tau);
  eval->add_option("--seeds", eval_seeds_arg, "semicolon-joined seed labels, e.g. 'a;b'")
      ->required();
  eval->add_option("--runs", eval_runs, "evaluation cascades (default 10000)");
  eval->add_option("--seed", eval_seed_val, "evaluation seed (default 1)");
  eval->add_option("--target-file", eval_target, "target nodes, one label per line");
  eval->add_option("--out", eval_out, "result file (default stdout)");

  // ---- sweep ---------------------------------------------------------------
  auto* sweep = app.add_subcommand("sweep", "run a configured experiment grid, emit CSV");
  std::string sweep_config;
  std::vector<std::string> sweep_sets;
  std::string sweep_out;
  bool sweep_quiet = false;
  sweep->add_option("--config", sweep_config, "key=value configuration file");
  sweep->add_option("--set", sweep_sets, "override, key=value (repeatable)");
  sweep->add_option("--out", sweep_out, "CSV file (default stdout)");
  sweep->add_flag("--quiet", sweep_quiet, "suppress the resolved-config echo on stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (gen->parsed()) {
      Graph g = load_edge_list(gen_graph.graph_path, !gen_graph.undirected);
      const ProbModel model = gen_model == "constant" ? ProbModel::constant(gen_p)
                              : gen_model == "wc"     ? ProbModel::weighted_cascade()
                                                      : ProbModel::trivalency();
      assign_probabilities(g, model, gen_seed);
      std::ostringstream os;
      write_edge_list(g, os);
      emit(os.str(), gen_out);
      return 0;
    }

    if (imca->parsed()) {
      Graph g = load_edge_list(im_graph.graph_path, !im_graph.undirected);
      Thresholds th = resolve_thresholds(g, im_tau);
      TargetSet target = resolve_target(g, im_target);
      SolverOptions opt;
      opt.strategy = im_strategy == "btg" ? Strategy::Btg : Strategy::Adg;
      opt.c = im_c;
      opt.theta = im_theta;
      opt.seed = im_seed;
      opt.mem_budget = im_mem;
      RunReport rep = solve_im_ca(g, target, th, im_k, opt);
      std::ostringstream os;
      write_run_report(os, rep, &g.labels);
      emit(os.str(), im_out);
      return 0;
    }

    if (smca->parsed()) {
      Graph g = load_edge_list(sm_graph.graph_path, !sm_graph.undirected);
      Thresholds th = resolve_thresholds(g, sm_tau);
      RunReport rep;
      if (sm_strategy == "surrogate") {
        if (!sm_target.empty())
          throw ValidationError(
              "the surrogate strategy solves full coverage; --target-file does not apply");
        FullCoverageOptions opt;
        opt.estimator = sm_estimator == "exact" ? EstimatorKind::Exact
                        : sm_estimator == "mc"  ? EstimatorKind::MonteCarlo
                                                : EstimatorKind::RrIndex;
        opt.epsilon = sm_epsilon;
        opt.runs = sm_runs;
        opt.theta = sm_theta;
        opt.seed = sm_seed;
        opt.mem_budget = sm_mem;
        rep = solve_full_coverage(g, th, opt);
      } else {
        TargetSet target = resolve_target(g, sm_target);
        SolverOptions opt;
        opt.strategy = sm_strategy == "btg" ? Strategy::Btg : Strategy::Adg;
        opt.c = sm_c;
        opt.theta = sm_theta;
        opt.seed = sm_seed;
        opt.mem_budget = sm_mem;
        rep = solve_sm_ca(g, target, th, sm_eta, opt);
      }
      std::ostringstream os;
      write_run_report(os, rep, &g.labels);
      emit(os.str(), sm_out);
      return rep.feasible ? 0 : 3;
    }

    if (base->parsed()) {
      Graph g = load_edge_list(base_graph.graph_path, !base_graph.undirected);
      const std::uint32_t k = base_k == 0 ? g.n : base_k;
      Ranking r;
      if (base_name == "coverage") {
        Thresholds th = resolve_thresholds(g, base_tau);
        TargetSet target = resolve_target(g, base_target);
        RRIndex ix = build_index(g, target, th, base_theta, base_seed);
        r = coverage_greedy(ix, k);
      } else if (base_name == "degree") {
        r = rank_by_degree(g);
      } else if (base_name == "pagerank") {
        r = pagerank(g);
      } else {
        r = random_ranking(g.n, base_seed);
      }
      if (k < r.order.size()) {
        r.order.resize(k);
        r.score.resize(k);
      }
      std::ostringstream os;
      write_ranking(os, r, &g.labels);
      emit(os.str(), base_out);
      return 0;
    }

    if (eval->parsed()) {
      Graph g = load_edge_list(eval_graph.graph_path, !eval_graph.undirected);
      Thresholds th = resolve_thresholds(g, eval_tau);
      TargetSet target = resolve_target(g, eval_target);
      std::vector<std::uint32_t> seeds = parse_seed_labels(g, eval_seeds_arg);
      EvalOutcome out = evaluate_seeds(g, seeds, th, target, eval_runs, eval_seed_val);
      std::ostringstream os;
      os << "runs " << out.runs << '\n';
      os << "targets " << target.members.size() << '\n';
      os << "active " << out.active << '\n';
      os << "boundary " << (out.boundary ? 1 : 0) << '\n';
      emit(os.str(), eval_out);
      return 0;
    }

    if (sweep->parsed()) {
      ExperimentConfig cfg;
      if (!sweep_config.empty()) {
        std::ifstream in(sweep_config);
        if (!in) throw ValidationError("cannot open config file: " + sweep_config);
        cfg = parse_config(in);
      }
      for (const std::string& kv : sweep_sets) apply_override(cfg, kv);
      if (cfg.graph_path.empty()) throw ValidationError("config needs a graph path");
      Graph g = load_edge_list(cfg.graph_path, cfg.directed);
      if (cfg.prob_model != "given") {
        const ProbModel model = cfg.prob_model == "constant" ? ProbModel::constant(cfg.p)
                                : cfg.prob_model == "wc"     ? ProbModel::weighted_cascade()
                                                             : ProbModel::trivalency();
        assign_probabilities(g, model, cfg.master_seed);
      }
      TargetSet target = resolve_target(g, cfg.target_path);
      if (!sweep_quiet) write_config(std::cerr, cfg);
      const std::string csv = run_experiment(g, target, cfg);
      emit(csv, sweep_out);
      return 0;
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << '\n';
    return 1;
  }
  return 2;  // no subcommand matched (require_subcommand should prevent this)
}

}  // namespace

int main(int argc, char** argv) { return run_cli(argc, argv); }
