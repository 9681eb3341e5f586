#pragma once
// Exact small-graph oracle.
//
// Enumerates all 2^m live-edge outcomes of the independent-cascade process:
// each arc is live with its own probability, an outcome's weight is the
// product of its arc states, and a node activates in an outcome iff it is
// reachable from the seed set over live arcs. Exact activation probabilities
// are the weighted fraction of outcomes reaching each node. Everything else
// here (active-target counts, truncated threshold sums, brute-force optima)
// is a direct readout of those probabilities, which is what makes this the
// ground truth the estimators and solvers are tested against.

#include <cstdint>
#include <vector>

#include "cumact/graph.hpp"
#include "cumact/problem.hpp"

namespace cumact {

constexpr std::uint32_t kDefaultEdgeCap = 20;

class ExactEnsemble {
 public:
  explicit ExactEnsemble(const Graph& g, std::uint32_t edge_cap = kDefaultEdgeCap) : n_(g.n) {
    if (!g.has_probs) throw ValidationError("exact mode needs edge probabilities");
    if (g.m > edge_cap)
      throw ValidationError("exact mode infeasible: m=" + std::to_string(g.m) +
                            " exceeds edge cap " + std::to_string(edge_cap));
    if (g.n > 64) throw ValidationError("exact mode infeasible: n>64");
    for (std::uint32_t u = 0; u < g.n; ++u)
      for (const Arc& a : g.out[u]) edges_.push_back({u, a.to, a.p});
    const std::uint32_t m = static_cast<std::uint32_t>(edges_.size());
    const std::uint64_t outcomes = 1ull << m;
    weight_.resize(outcomes);
    weight_sum_ = 0.0;
    for (std::uint64_t gmask = 0; gmask < outcomes; ++gmask) {
      double w = 1.0;
      for (std::uint32_t e = 0; e < m; ++e)
        w *= (gmask >> e) & 1 ? edges_[e].p : 1.0 - edges_[e].p;
      weight_[gmask] = w;
      weight_sum_ += w;
    }
    // Per-outcome reachability masks make repeated seed-set evaluations
    // (brute force, greedy probes) cheap; skipped if the table would be huge.
    cached_ = outcomes * n_ * sizeof(std::uint64_t) <= (256ull << 20);
    if (cached_) {
      reach_.resize(outcomes * n_);
      std::vector<std::uint32_t> stack;
      for (std::uint64_t gmask = 0; gmask < outcomes; ++gmask)
        for (std::uint32_t v = 0; v < n_; ++v) {
          std::uint64_t seen = 1ull << v;
          stack.assign(1, v);
          while (!stack.empty()) {
            std::uint32_t a = stack.back();
            stack.pop_back();
            for (std::uint32_t e = 0; e < m; ++e)
              if (((gmask >> e) & 1) && edges_[e].from == a && !((seen >> edges_[e].to) & 1)) {
                seen |= 1ull << edges_[e].to;
                stack.push_back(edges_[e].to);
              }
          }
          reach_[gmask * n_ + v] = seen;
        }
    }
  }

  std::uint32_t n() const { return n_; }
  // Total outcome weight; equals 1 up to floating-point round-off.
  double weight_sum() const { return weight_sum_; }

  static std::uint64_t seed_mask(const std::vector<std::uint32_t>& seeds, std::uint32_t n) {
    std::uint64_t mask = 0;
    for (std::uint32_t s : seeds) {
      if (s >= n) throw ValidationError("seed node id out of range");
      mask |= 1ull << s;
    }
    return mask;
  }

  // Exact P_u(S) for every node u.
  std::vector<double> activation_probs(std::uint64_t seed_mask) const {
    std::vector<double> p(n_, 0.0);
    if (seed_mask == 0) return p;
    const std::uint64_t outcomes = weight_.size();
    for (std::uint64_t gmask = 0; gmask < outcomes; ++gmask) {
      std::uint64_t reached = cached_ ? union_reach(gmask, seed_mask) : bfs(gmask, seed_mask);
      const double w = weight_[gmask];
      while (reached) {
        p[static_cast<std::uint32_t>(__builtin_ctzll(reached))] += w;
        reached &= reached - 1;
      }
    }
    return p;
  }

 private:
  struct Edge {
    std::uint32_t from, to;
    double p;
  };

  std::uint64_t union_reach(std::uint64_t gmask, std::uint64_t seed_mask) const {
    std::uint64_t reached = 0, s = seed_mask;
    while (s) {
      reached |= reach_[gmask * n_ + static_cast<std::uint32_t>(__builtin_ctzll(s))];
      s &= s - 1;
    }
    return reached;
  }

  std::uint64_t bfs(std::uint64_t gmask, std::uint64_t seed_mask) const {
    std::uint64_t reached = seed_mask;
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t e = 0; e < edges_.size(); ++e)
        if (((gmask >> e) & 1) && ((reached >> edges_[e].from) & 1) &&
            !((reached >> edges_[e].to) & 1)) {
          reached |= 1ull << edges_[e].to;
          changed = true;
        }
    }
    return reached;
  }

  std::uint32_t n_;
  std::vector<Edge> edges_;
  std::vector<double> weight_;
  std::vector<std::uint64_t> reach_;  // per outcome, per source node
  bool cached_ = false;
  double weight_sum_ = 0.0;
};

struct ExactProbs {
  std::vector<double> p;  // per node
  double weight_sum = 0.0;
};

inline ExactProbs exact_activation_probs(const ExactEnsemble& ens,
                                         const std::vector<std::uint32_t>& seeds) {
  return {ens.activation_probs(ExactEnsemble::seed_mask(seeds, ens.n())), ens.weight_sum()};
}

inline ExactProbs exact_activation_probs(const Graph& g, const std::vector<std::uint32_t>& seeds,
                                         std::uint32_t edge_cap = kDefaultEdgeCap) {
  return exact_activation_probs(ExactEnsemble(g, edge_cap), seeds);
}

// Number of target nodes whose exact activation probability reaches their
// threshold.
inline std::uint64_t exact_rho(const ExactEnsemble& ens, const std::vector<std::uint32_t>& seeds,
                               const Thresholds& th, const TargetSet& target) {
  auto p = ens.activation_probs(ExactEnsemble::seed_mask(seeds, ens.n()));
  std::uint64_t count = 0;
  for (std::uint32_t u : target.members)
    if (meets_threshold_exact(p[u], th.tau[u])) ++count;
  return count;
}

inline std::uint64_t exact_rho(const Graph& g, const std::vector<std::uint32_t>& seeds,
                               const Thresholds& th, const TargetSet& target,
                               std::uint32_t edge_cap = kDefaultEdgeCap) {
  return exact_rho(ExactEnsemble(g, edge_cap), seeds, th, target);
}

// Truncated-threshold sum over all nodes: sum_u min{P_u(S), c * tau_u}.
inline double exact_truncated_sum(const ExactEnsemble& ens,
                                  const std::vector<std::uint32_t>& seeds, const Thresholds& th,
                                  double c) {
  auto p = ens.activation_probs(ExactEnsemble::seed_mask(seeds, ens.n()));
  double f = 0.0;
  for (std::uint32_t u = 0; u < ens.n(); ++u) f += std::min(p[u], c * th.tau[u]);
  return f;
}

inline double exact_truncated_sum(const Graph& g, const std::vector<std::uint32_t>& seeds,
                                  const Thresholds& th, double c,
                                  std::uint32_t edge_cap = kDefaultEdgeCap) {
  return exact_truncated_sum(ExactEnsemble(g, edge_cap), seeds, th, c);
}

struct BruteForceResult {
  std::vector<std::uint32_t> seeds;
  std::uint64_t rho = 0;
  bool feasible = true;
};

namespace detail {
// Lexicographic combination step over ids [0, n). Returns false at the end.
inline bool next_combination(std::vector<std::uint32_t>& c, std::uint32_t n) {
  const std::uint32_t k = static_cast<std::uint32_t>(c.size());
  for (std::uint32_t i = k; i-- > 0;) {
    if (c[i] < n - (k - i)) {
      ++c[i];
      for (std::uint32_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

inline std::vector<std::uint32_t> first_combination(std::uint32_t k) {
  std::vector<std::uint32_t> c(k);
  for (std::uint32_t i = 0; i < k; ++i) c[i] = i;
  return c;
}
}  // namespace detail

// Exhaustive optimum by set size then lexicographic order, so ties go to the
// lexicographically smallest seed set. ImCa: best rho at exactly k seeds.
// SmCa: smallest set reaching eta active targets; infeasible (eta > what even
// S = V achieves) is reported, not thrown.
inline BruteForceResult brute_force_optimal(const Graph& g, const ProblemSpec& problem,
                                            const Thresholds& th, const TargetSet& target,
                                            std::uint32_t edge_cap = kDefaultEdgeCap) {
  ExactEnsemble ens(g, edge_cap);
  const std::uint32_t n = g.n;
  auto rho_of = [&](const std::vector<std::uint32_t>& seeds) {
    return exact_rho(ens, seeds, th, target);
  };
  BruteForceResult best;
  if (problem.kind == ProblemSpec::Kind::ImCa) {
    if (problem.k == 0 || problem.k > n)
      throw ValidationError("seed budget k must lie in [1, n]");
    auto combo = detail::first_combination(problem.k);
    best.seeds = combo;
    best.rho = rho_of(combo);
    while (detail::next_combination(combo, n)) {
      std::uint64_t r = rho_of(combo);
      if (r > best.rho) {
        best.rho = r;
        best.seeds = combo;
      }
    }
    return best;
  }
  if (problem.eta == 0) throw ValidationError("eta must be at least 1");
  {  // infeasible iff even S = V falls short; settle that before enumerating
    auto all = detail::first_combination(n);
    std::uint64_t r = rho_of(all);
    if (r < problem.eta) {
      best.feasible = false;
      best.rho = r;
      return best;
    }
  }
  for (std::uint32_t s = 1; s <= n; ++s) {
    auto combo = detail::first_combination(s);
    do {
      std::uint64_t r = rho_of(combo);
      if (r >= problem.eta) {
        best.seeds = combo;
        best.rho = r;
        return best;
      }
    } while (detail::next_combination(combo, n));
  }
  throw std::logic_error("unreachable: S = V was feasible but no subset was");
}

}  // namespace cumact
