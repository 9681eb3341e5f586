#pragma once
// Seed-selection solvers over an RR index.
//
// Both problems run the same greedy loop: score every candidate against the
// live sets of still-unsatisfied targets, pick the best, remove the sets it
// hits, repeat. The two scoring rules differ in what they chase:
//
//   BTG (benefit-truncated gain, ssbt_select): a candidate earns its overlap
//   with each unsatisfied target's collection, truncated at c * req so that
//   sets beyond c times the outstanding requirement stop counting.
//
//   ADG (activation-directed gain, ssad_select): candidates are ranked
//   lexicographically — first by how many targets they would satisfy
//   single-handedly (overlap >= req), then by requirement-truncated overlap,
//   then by smallest id.
//
// Budget problems (fixed seed count) stop after k picks; coverage problems
// stop once enough targets are estimated active, and are forced to stop after
// n picks, at which point every target's collection is fully removed anyway.
//
// solve_full_coverage is the separate surrogate-greedy route for demanding
// every node active: it maximizes the truncated threshold sum f(S) =
// sum_u min{P_u(S), tau_u} — monotone and submodular, unlike the active-target
// count — and stops when f is within epsilon of its ceiling sum_u tau_u.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "cumact/graph.hpp"
#include "cumact/monte_carlo.hpp"
#include "cumact/oracle.hpp"
#include "cumact/problem.hpp"
#include "cumact/rng.hpp"
#include "cumact/rr_index.hpp"

namespace cumact {

enum class Strategy { Btg, Adg };

inline const char* strategy_name(Strategy s) { return s == Strategy::Btg ? "btg" : "adg"; }

struct SelectResult {
  std::uint32_t node = 0;
  double key1 = 0.0;  // BTG: truncated-overlap gain; ADG: satisfied-target count
  double key2 = 0.0;  // ADG only: requirement-truncated overlap
  bool no_gain = false;
};

namespace detail {

// Calls fold(owner_position, cap, counts, touched) for every owner with
// req > 0, where counts[v] is v's overlap with that owner's live sets.
template <typename Fold>
void per_owner_overlaps(const RRIndex& ix, Fold&& fold, std::vector<std::uint64_t>& counts,
                        std::vector<std::uint32_t>& touched) {
  for (std::size_t oi = 0; oi < ix.owners.size(); ++oi) {
    if (ix.req[oi] <= 0) continue;
    touched.clear();
    const std::uint64_t begin = oi * static_cast<std::uint64_t>(ix.theta);
    for (std::uint64_t gid = begin; gid < begin + ix.theta; ++gid) {
      if (ix.removed[gid]) continue;
      for (std::uint64_t idx = ix.offs[gid]; idx < ix.offs[gid + 1]; ++idx) {
        const std::uint32_t v = ix.nodes[idx];
        if (counts[v]++ == 0) touched.push_back(v);
      }
    }
    fold(oi, counts, touched);
    for (std::uint32_t v : touched) counts[v] = 0;
  }
}

inline void check_selectable(const RRIndex& ix, const std::vector<std::uint8_t>& selected) {
  if (selected.size() != ix.n) throw ValidationError("selected mask size mismatch");
  for (std::uint32_t v = 0; v < ix.n; ++v)
    if (!selected[v]) return;
  throw ValidationError("no unselected node left to pick");
}

}  // namespace detail

// Benefit-truncated selection: argmax over unselected v of
// sum over unsatisfied owners u of min{overlap(v, u), c * req(u)}.
// Ties break to the smallest id; an all-zero field is flagged no_gain and
// yields the smallest unselected id.
inline SelectResult ssbt_select(const RRIndex& ix, double c,
                                const std::vector<std::uint8_t>& selected) {
  if (c < 1.0) throw ValidationError("truncation factor c must be at least 1");
  detail::check_selectable(ix, selected);
  std::vector<double> inc(ix.n, 0.0);
  std::vector<std::uint64_t> counts(ix.n, 0);
  std::vector<std::uint32_t> touched;
  detail::per_owner_overlaps(
      ix,
      [&](std::size_t oi, const std::vector<std::uint64_t>& cnt,
          const std::vector<std::uint32_t>& touch) {
        const double cap = c * static_cast<double>(ix.req[oi]);
        for (std::uint32_t v : touch) inc[v] += std::min(static_cast<double>(cnt[v]), cap);
      },
      counts, touched);
  SelectResult res;
  bool have = false;
  for (std::uint32_t v = 0; v < ix.n; ++v) {
    if (selected[v]) continue;
    if (!have || inc[v] > res.key1) {
      res.node = v;
      res.key1 = inc[v];
      have = true;
    }
  }
  res.no_gain = res.key1 <= 0.0;
  return res;
}

// Activation-directed selection: lexicographic (satisfied-target count,
// requirement-truncated overlap, smallest id). When no candidate satisfies
// any target outright the first key is uniformly zero and the second key
// alone decides.
inline SelectResult ssad_select(const RRIndex& ix, const std::vector<std::uint8_t>& selected) {
  detail::check_selectable(ix, selected);
  std::vector<std::uint64_t> key1(ix.n, 0), key2(ix.n, 0);
  std::vector<std::uint64_t> counts(ix.n, 0);
  std::vector<std::uint32_t> touched;
  detail::per_owner_overlaps(
      ix,
      [&](std::size_t oi, const std::vector<std::uint64_t>& cnt,
          const std::vector<std::uint32_t>& touch) {
        const auto req = static_cast<std::uint64_t>(ix.req[oi]);
        for (std::uint32_t v : touch) {
          if (cnt[v] >= req) ++key1[v];
          key2[v] += std::min(cnt[v], req);
        }
      },
      counts, touched);
  SelectResult res;
  bool have = false;
  for (std::uint32_t v = 0; v < ix.n; ++v) {
    if (selected[v]) continue;
    if (!have || key1[v] > key1[res.node] ||
        (key1[v] == key1[res.node] && key2[v] > key2[res.node])) {
      res.node = v;
      have = true;
    }
  }
  res.key1 = static_cast<double>(key1[res.node]);
  res.key2 = static_cast<double>(key2[res.node]);
  res.no_gain = key1[res.node] == 0 && key2[res.node] == 0;
  return res;
}

struct StepRecord {
  std::uint32_t node = 0;
  double inc = 0.0;   // primary selection score of the pick
  double key2 = 0.0;  // secondary score (ADG), 0 otherwise
  std::uint64_t est_active = 0;
  bool no_gain = false;
};

struct RunReport {
  std::string problem;   // "im-ca" | "sm-ca"
  std::string strategy;  // "btg" | "adg" | "surrogate-{exact,mc,rr}"
  double c = 1.0;
  std::uint32_t theta = 0;
  std::uint64_t seed = 0;
  std::uint64_t k_or_eta = 0;
  std::vector<std::uint32_t> seeds;
  std::vector<StepRecord> steps;
  std::uint64_t est_active = 0;
  bool feasible = true;
  bool noise_floor_hit = false;
  double f_hat = 0.0;    // full coverage: final surrogate value
  double tau_sum = 0.0;  // full coverage: its ceiling
  double epsilon = 0.0;  // full coverage: slack
  double build_ms = 0.0;
  double select_ms = 0.0;
  std::string note;
};

namespace detail {
inline double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}
}  // namespace detail

// Greedy loop over a prebuilt index (which it consumes by removal). Budget
// problems run exactly k picks; coverage problems stop at eta estimated-active
// targets, or report infeasibility if even n picks cannot get there.
inline RunReport run_greedy(RRIndex& ix, const ProblemSpec& prob, Strategy strat, double c) {
  RunReport rep;
  rep.problem = prob.kind == ProblemSpec::Kind::ImCa ? "im-ca" : "sm-ca";
  rep.strategy = strategy_name(strat);
  rep.c = c;
  rep.theta = ix.theta;
  rep.seed = ix.seed;
  const auto t0 = std::chrono::steady_clock::now();
  if (prob.kind == ProblemSpec::Kind::ImCa) {
    if (prob.k == 0 || prob.k > ix.n) throw ValidationError("seed budget k must lie in [1, n]");
    rep.k_or_eta = prob.k;
  } else {
    if (prob.eta == 0) throw ValidationError("eta must be at least 1");
    rep.k_or_eta = prob.eta;
    if (prob.eta > ix.owners.size()) {
      rep.feasible = false;
      rep.note = "eta exceeds the number of targets; no seed set suffices";
      rep.select_ms = detail::ms_since(t0);
      return rep;
    }
  }
  std::vector<std::uint8_t> selected(ix.n, 0);
  while (true) {
    if (prob.kind == ProblemSpec::Kind::ImCa) {
      if (rep.seeds.size() == prob.k) break;
    } else {
      if (ix.estimated_active() >= prob.eta) break;
      if (rep.seeds.size() == ix.n) break;  // backstop; cannot trigger with eta <= |targets|
    }
    SelectResult pick =
        strat == Strategy::Btg ? ssbt_select(ix, c, selected) : ssad_select(ix, selected);
    selected[pick.node] = 1;
    rep.seeds.push_back(pick.node);
    remove_hit_sets(ix, pick.node);
    rep.steps.push_back(
        {pick.node, pick.key1, pick.key2, ix.estimated_active(), pick.no_gain});
  }
  rep.est_active = ix.estimated_active();
  if (prob.kind == ProblemSpec::Kind::SmCa && rep.est_active < prob.eta) rep.feasible = false;
  rep.select_ms = detail::ms_since(t0);
  return rep;
}

struct SolverOptions {
  Strategy strategy = Strategy::Adg;
  double c = 1.0;
  std::uint32_t theta = 1000;
  std::uint64_t seed = 1;
  std::uint64_t mem_budget = kDefaultMemBudget;
};

inline RunReport solve_im_ca(const Graph& g, const TargetSet& target, const Thresholds& th,
                             std::uint32_t k, const SolverOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  RRIndex ix = build_index(g, target, th, opt.theta, opt.seed, opt.mem_budget);
  const double build_ms = detail::ms_since(t0);
  RunReport rep = run_greedy(ix, ProblemSpec::im_ca(k), opt.strategy, opt.c);
  rep.build_ms = build_ms;
  return rep;
}

inline RunReport solve_sm_ca(const Graph& g, const TargetSet& target, const Thresholds& th,
                             std::uint64_t eta, const SolverOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  RRIndex ix = build_index(g, target, th, opt.theta, opt.seed, opt.mem_budget);
  const double build_ms = detail::ms_since(t0);
  RunReport rep = run_greedy(ix, ProblemSpec::sm_ca(eta), opt.strategy, opt.c);
  rep.build_ms = build_ms;
  return rep;
}

// ---- full-coverage surrogate greedy ----------------------------------------

enum class EstimatorKind { Exact, MonteCarlo, RrIndex };

struct FullCoverageOptions {
  EstimatorKind estimator = EstimatorKind::RrIndex;
  double epsilon = 0.1;
  std::uint64_t runs = 10000;  // MonteCarlo probes
  std::uint32_t theta = 1000;  // RrIndex sets per node
  std::uint64_t seed = 1;
  std::uint64_t mem_budget = kDefaultMemBudget;
  std::uint32_t edge_cap = kDefaultEdgeCap;  // Exact enumeration cap
};

namespace detail {

// f(S) probes behind the surrogate greedy. Marginal probes must not mutate;
// commit() locks in the chosen seed.
class SurrogateEstimator {
 public:
  SurrogateEstimator(const Graph& g, const Thresholds& th, const FullCoverageOptions& opt)
      : g_(g), th_(th), opt_(opt) {
    switch (opt.estimator) {
      case EstimatorKind::Exact:
        ens_ = std::make_unique<ExactEnsemble>(g, opt.edge_cap);
        break;
      case EstimatorKind::MonteCarlo:
        break;
      case EstimatorKind::RrIndex: {
        ix_ = std::make_unique<RRIndex>(
            build_index(g, TargetSet::all(g.n), th, opt.theta, opt.seed, opt.mem_budget));
        hit_.assign(ix_->set_count(), 0);
        hits_per_owner_.assign(g.n, 0);
        break;
      }
    }
  }

  // Seeds joining S are appended via commit(); probes evaluate S + {v}.
  struct Probe {
    double f = 0.0;
    std::uint64_t rho = 0;
  };

  Probe eval_with(std::uint32_t extra, bool has_extra, std::uint32_t step) {
    switch (opt_.estimator) {
      case EstimatorKind::Exact: {
        std::uint64_t mask = mask_;
        if (has_extra) mask |= 1ull << extra;
        auto p = ens_->activation_probs(mask);
        Probe pr;
        for (std::uint32_t u = 0; u < g_.n; ++u) {
          pr.f += std::min(p[u], th_.tau[u]);
          if (meets_threshold_exact(p[u], th_.tau[u])) ++pr.rho;
        }
        return pr;
      }
      case EstimatorKind::MonteCarlo: {
        std::vector<std::uint32_t> seeds = seeds_;
        if (has_extra) seeds.push_back(extra);
        const std::uint64_t probe_seed =
            mix_seed(mix_seed(mix_seed(opt_.seed, stream::kGreedy), step),
                     has_extra ? static_cast<std::uint64_t>(extra) + 1 : 0);
        auto est = estimate(g_, seeds, th_, TargetSet::all(g_.n), opt_.runs, 1.0, probe_seed);
        return {est.f_hat, est.rho_hat};
      }
      case EstimatorKind::RrIndex: {
        Probe pr;
        double delta = 0.0;
        std::uint64_t rho_gain = 0;
        if (has_extra) {
          scratch_touched_.clear();
          for (std::uint64_t idx = ix_->inv_offs[extra]; idx < ix_->inv_offs[extra + 1]; ++idx) {
            const std::uint32_t gid = ix_->inv_sets[idx];
            if (hit_[gid]) continue;
            const std::uint32_t u = ix_->owners[ix_->owner_of_set(gid)];
            if (scratch_new_[u]++ == 0) scratch_touched_.push_back(u);
          }
          const double theta = static_cast<double>(ix_->theta);
          for (std::uint32_t u : scratch_touched_) {
            const double before = std::min(hits_per_owner_[u] / theta, th_.tau[u]);
            const double after =
                std::min((hits_per_owner_[u] + scratch_new_[u]) / theta, th_.tau[u]);
            delta += after - before;
            const auto need = required_hit_count(th_.tau[u], ix_->theta);
            if (static_cast<std::int64_t>(hits_per_owner_[u]) < need &&
                static_cast<std::int64_t>(hits_per_owner_[u] + scratch_new_[u]) >= need)
              ++rho_gain;
            scratch_new_[u] = 0;
          }
        }
        pr.f = f_committed_ + delta;
        pr.rho = rho_committed_ + rho_gain;
        return pr;
      }
    }
    return {};
  }

  void commit(std::uint32_t v, std::uint32_t step) {
    if (opt_.estimator == EstimatorKind::RrIndex) {
      for (std::uint64_t idx = ix_->inv_offs[v]; idx < ix_->inv_offs[v + 1]; ++idx) {
        const std::uint32_t gid = ix_->inv_sets[idx];
        if (hit_[gid]) continue;
        hit_[gid] = 1;
        ++hits_per_owner_[ix_->owners[ix_->owner_of_set(gid)]];
      }
      Probe now;
      const double theta = static_cast<double>(ix_->theta);
      now.f = 0.0;
      now.rho = 0;
      for (std::uint32_t u = 0; u < g_.n; ++u) {
        now.f += std::min(hits_per_owner_[u] / theta, th_.tau[u]);
        if (static_cast<std::int64_t>(hits_per_owner_[u]) >=
            required_hit_count(th_.tau[u], ix_->theta))
          ++now.rho;
      }
      f_committed_ = now.f;
      rho_committed_ = now.rho;
    }
    seeds_.push_back(v);
    mask_ |= g_.n <= 64 ? 1ull << v : 0ull;
    (void)step;
  }

  // Resolution floor of one probe at this budget: twice the whole-sum
  // accuracy the budget guarantees. Marginals below it are indistinguishable
  // from sampling noise.
  double noise_floor() const {
    const double n = static_cast<double>(g_.n);
    switch (opt_.estimator) {
      case EstimatorKind::Exact:
        return 0.0;
      case EstimatorKind::MonteCarlo:
        return 2.0 * n *
               std::sqrt(std::log(2.0 * n * n) / (2.0 * static_cast<double>(opt_.runs)));
      case EstimatorKind::RrIndex:
        return 2.0 * n *
               std::sqrt(std::log(2.0 * n) / (2.0 * static_cast<double>(opt_.theta)));
    }
    return 0.0;
  }

  void prepare_scratch() {
    if (opt_.estimator == EstimatorKind::RrIndex && scratch_new_.empty())
      scratch_new_.assign(g_.n, 0);
  }

 private:
  const Graph& g_;
  const Thresholds& th_;
  FullCoverageOptions opt_;
  std::unique_ptr<ExactEnsemble> ens_;
  std::unique_ptr<RRIndex> ix_;
  std::vector<std::uint8_t> hit_;
  std::vector<std::uint64_t> hits_per_owner_;
  std::vector<std::uint64_t> scratch_new_;
  std::vector<std::uint32_t> scratch_touched_;
  std::vector<std::uint32_t> seeds_;
  std::uint64_t mask_ = 0;
  double f_committed_ = 0.0;
  std::uint64_t rho_committed_ = 0;
};

}  // namespace detail

// Greedy surrogate maximization for full coverage (every node active):
// repeatedly add the candidate with the largest estimated gain in
// f(S) = sum_u min{P_u(S), tau_u} until f reaches sum_u tau_u - epsilon.
// Steps whose best marginal sinks below the estimator's noise floor are
// flagged in the report but still taken.
inline RunReport solve_full_coverage(const Graph& g, const Thresholds& th,
                                     const FullCoverageOptions& opt) {
  if (!(opt.epsilon > 0.0)) throw ValidationError("epsilon must be positive");
  if (th.tau.size() != g.n) throw ValidationError("threshold table size mismatch");
  if (opt.estimator == EstimatorKind::Exact && g.n > 64)
    throw ValidationError("exact estimator supports at most 64 nodes");
  RunReport rep;
  rep.problem = "sm-ca";
  rep.strategy = opt.estimator == EstimatorKind::Exact        ? "surrogate-exact"
                 : opt.estimator == EstimatorKind::MonteCarlo ? "surrogate-mc"
                                                              : "surrogate-rr";
  rep.theta = opt.estimator == EstimatorKind::RrIndex ? opt.theta : 0;
  rep.seed = opt.seed;
  rep.tau_sum = th.sum();
  rep.epsilon = opt.epsilon;
  rep.k_or_eta = g.n;

  const auto t0 = std::chrono::steady_clock::now();
  detail::SurrogateEstimator est(g, th, opt);
  est.prepare_scratch();
  rep.build_ms = detail::ms_since(t0);
  const double floor = est.noise_floor();

  const auto t1 = std::chrono::steady_clock::now();
  std::vector<std::uint8_t> selected(g.n, 0);
  double f_current = 0.0;
  std::uint32_t step = 0;
  while (f_current < rep.tau_sum - opt.epsilon && rep.seeds.size() < g.n) {
    ++step;
    bool have = false;
    std::uint32_t best = 0;
    detail::SurrogateEstimator::Probe best_probe;
    for (std::uint32_t v = 0; v < g.n; ++v) {
      if (selected[v]) continue;
      auto probe = est.eval_with(v, true, step);
      if (!have || probe.f > best_probe.f) {
        have = true;
        best = v;
        best_probe = probe;
      }
    }
    const double marginal = best_probe.f - f_current;
    if (marginal < floor) rep.noise_floor_hit = true;
    est.commit(best, step);
    selected[best] = 1;
    rep.seeds.push_back(best);
    // settle f(S) with the committed estimator state (fresh stream for MC)
    auto settled = est.eval_with(0, false, step);
    f_current = settled.f;
    rep.steps.push_back({best, marginal, 0.0, settled.rho, marginal <= 0.0});
  }
  rep.f_hat = f_current;
  rep.est_active = rep.steps.empty() ? 0 : rep.steps.back().est_active;
  rep.feasible = f_current >= rep.tau_sum - opt.epsilon;
  rep.select_ms = detail::ms_since(t1);
  return rep;
}

// ---- run-report serialization ----------------------------------------------
//
// Line oriented: header key-value lines, one line per step
// (step, node, inc, est_active), one summary line. Nodes are printed through
// the label table when given, dense ids otherwise.

inline void write_run_report(std::ostream& os, const RunReport& rep,
                             const std::vector<std::string>* labels = nullptr) {
  auto name = [&](std::uint32_t v) {
    return labels ? (*labels)[v] : std::to_string(v);
  };
  os << "problem " << rep.problem << '\n';
  os << "strategy " << rep.strategy << '\n';
  os << "c " << detail::format_double(rep.c) << '\n';
  if (rep.theta) os << "theta " << rep.theta << '\n';
  os << "master_seed " << rep.seed << '\n';
  os << (rep.problem == "im-ca" ? "k " : "eta ") << rep.k_or_eta << '\n';
  for (std::size_t i = 0; i < rep.steps.size(); ++i) {
    const StepRecord& s = rep.steps[i];
    os << "step " << i + 1 << " node " << name(s.node) << " inc "
       << detail::format_double(s.inc) << " est_active " << s.est_active;
    if (s.no_gain) os << " no_gain 1";
    os << '\n';
  }
  os << "summary seeds ";
  for (std::size_t i = 0; i < rep.seeds.size(); ++i)
    os << (i ? ";" : "") << name(rep.seeds[i]);
  if (rep.seeds.empty()) os << "-";
  os << " seed_count " << rep.seeds.size() << " est_active " << rep.est_active << " feasible "
     << (rep.feasible ? 1 : 0);
  if (rep.strategy.rfind("surrogate", 0) == 0)
    os << " f_hat " << detail::format_double(rep.f_hat) << " tau_sum "
       << detail::format_double(rep.tau_sum) << " epsilon "
       << detail::format_double(rep.epsilon);
  if (rep.noise_floor_hit) os << " noise_floor 1";
  if (!rep.note.empty()) os << " note \"" << rep.note << '"';
  os << " build_ms " << detail::format_double(rep.build_ms) << " select_ms "
     << detail::format_double(rep.select_ms) << '\n';
}

}  // namespace cumact
