#pragma once
// Forward independent-cascade simulation and Monte-Carlo estimation.
//
// One cascade: seeds activate at step 0; each newly active node gets one
// independent chance per outgoing arc to activate its head. Estimation runs R
// cascades and reads activation frequencies; run i always draws from
// substream (seed, cascade, i), so run order or scheduling cannot change any
// number and any single run can be replayed alone.

#include <cmath>
#include <cstdint>
#include <vector>

#include "cumact/graph.hpp"
#include "cumact/oracle.hpp"
#include "cumact/problem.hpp"
#include "cumact/rng.hpp"

namespace cumact {

inline std::vector<std::uint32_t> simulate_cascade(const Graph& g,
                                                   const std::vector<std::uint32_t>& seeds,
                                                   Rng& rng) {
  if (!g.has_probs) throw ValidationError("cascade needs edge probabilities");
  std::vector<std::uint8_t> active(g.n, 0);
  std::vector<std::uint32_t> queue;
  queue.reserve(seeds.size());
  for (std::uint32_t s : seeds) {
    if (s >= g.n) throw ValidationError("seed node id out of range");
    if (!active[s]) {
      active[s] = 1;
      queue.push_back(s);
    }
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    std::uint32_t u = queue[head];
    for (const Arc& a : g.out[u])
      if (!active[a.to] && rng.coin(a.p)) {
        active[a.to] = 1;
        queue.push_back(a.to);
      }
  }
  std::sort(queue.begin(), queue.end());
  return queue;
}

struct ActivationEstimate {
  std::uint64_t runs = 0;
  std::vector<std::uint64_t> hits;  // per node: cascades that activated it
  std::vector<double> p_hat;        // hits / runs
};

struct EstimateResult {
  ActivationEstimate act;
  double f_hat = 0.0;      // sum over targets of min{p_hat, tau}
  double big_f_hat = 0.0;  // sum over targets of min{p_hat, c * tau}
  std::uint64_t rho_hat = 0;
};

// R cascades from one seed set. Estimates compare against thresholds with
// plain >= (they are exact rationals); seeds always estimate to 1.
inline EstimateResult estimate(const Graph& g, const std::vector<std::uint32_t>& seeds,
                               const Thresholds& th, const TargetSet& target, std::uint64_t runs,
                               double c, std::uint64_t seed) {
  if (runs == 0) throw ValidationError("run count must be positive");
  if (th.tau.size() != g.n) throw ValidationError("threshold table size mismatch");
  if (!g.has_probs) throw ValidationError("cascade needs edge probabilities");
  for (std::uint32_t s : seeds)
    if (s >= g.n) throw ValidationError("seed node id out of range");

  EstimateResult res;
  res.act.runs = runs;
  res.act.hits.assign(g.n, 0);
  std::vector<std::uint32_t> mark(g.n, 0);
  std::vector<std::uint32_t> queue;
  std::uint32_t epoch = 0;
  for (std::uint64_t i = 0; i < runs; ++i) {
    Rng rng = substream(seed, stream::kCascade, i);
    ++epoch;
    queue.clear();
    for (std::uint32_t s : seeds)
      if (mark[s] != epoch) {
        mark[s] = epoch;
        ++res.act.hits[s];
        queue.push_back(s);
      }
    for (std::size_t head = 0; head < queue.size(); ++head) {
      std::uint32_t u = queue[head];
      for (const Arc& a : g.out[u])
        if (mark[a.to] != epoch && rng.coin(a.p)) {
          mark[a.to] = epoch;
          ++res.act.hits[a.to];
          queue.push_back(a.to);
        }
    }
  }
  res.act.p_hat.resize(g.n);
  for (std::uint32_t v = 0; v < g.n; ++v)
    res.act.p_hat[v] = static_cast<double>(res.act.hits[v]) / static_cast<double>(runs);
  for (std::uint32_t u : target.members) {
    const double p = res.act.p_hat[u];
    res.f_hat += std::min(p, th.tau[u]);
    res.big_f_hat += std::min(p, c * th.tau[u]);
    if (meets_threshold_estimate(p, th.tau[u])) ++res.rho_hat;
  }
  return res;
}

// Run count guaranteeing |f_hat - f| <= gamma with probability >= 1 - 1/n^delta
// (union bound over n per-node Hoeffding intervals).
inline double runs_bound(std::uint64_t n, double gamma, double delta) {
  if (n == 0 || gamma <= 0.0 || delta <= 0.0)
    throw ValidationError("runs bound needs n >= 1, gamma > 0, delta > 0");
  const double dn = static_cast<double>(n);
  return dn * dn * std::log(2.0 * std::pow(dn, delta + 1.0)) / (2.0 * gamma * gamma);
}

inline std::uint64_t required_runs(std::uint64_t n, double gamma, double delta) {
  const double bound = runs_bound(n, gamma, delta);
  if (!std::isfinite(bound) || bound >= 9.0e18)
    throw ValidationError("required run count overflows a 64-bit budget");
  const auto r = static_cast<std::uint64_t>(std::ceil(bound));
  return r == 0 ? 1 : r;
}

struct FrequencyCheck {
  bool passed = false;
  double p_exact = 0.0;  // from the enumeration oracle
  double freq = 0.0;     // empirical activation frequency of u
};

// Sanity check linking simulation to the oracle: when P_u(S) clears tau the
// empirical frequency should too (and symmetrically below). Rejects tau equal
// to P_u(S), where no sample size can separate the two.
inline FrequencyCheck frequency_check(const Graph& g, const std::vector<std::uint32_t>& seeds,
                                      std::uint32_t u, double tau, std::uint64_t n_runs,
                                      std::uint64_t seed,
                                      std::uint32_t edge_cap = kDefaultEdgeCap) {
  if (u >= g.n) throw ValidationError("node id out of range");
  FrequencyCheck chk;
  chk.p_exact = exact_activation_probs(g, seeds, edge_cap).p[u];
  if (std::abs(chk.p_exact - tau) <= 1e-12)
    throw ValidationError("frequency check cannot separate tau from P_u(S): they are equal");
  auto est = estimate(g, seeds, Thresholds::uniform(g.n, 1.0), TargetSet::all(g.n), n_runs, 1.0,
                      seed);
  chk.freq = est.act.p_hat[u];
  chk.passed = chk.p_exact > tau ? chk.freq >= tau : chk.freq <= tau;
  return chk;
}

}  // namespace cumact
