#pragma once
// Reference seed rankers. Each produces a single ordering of the nodes;
// the length-k prefix is the seed set for budget k, so one ranking serves a
// whole budget sweep. Coverage greedy is the strongest of them: it plays the
// classic influence-maximization move of maximizing raw reverse-set coverage,
// but is blind to per-target requirements — exactly the blind spot the
// requirement-aware selectors exist to fix.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

#include "cumact/graph.hpp"
#include "cumact/rng.hpp"
#include "cumact/rr_index.hpp"

namespace cumact {

struct Ranking {
  std::vector<std::uint32_t> order;  // best first
  std::vector<double> score;        // parallel to order

  std::vector<std::uint32_t> top(std::uint32_t k) const {
    if (k > order.size()) throw ValidationError("prefix exceeds ranking length");
    return {order.begin(), order.begin() + k};
  }
};

// Greedy maximum coverage over the pooled reverse sets: each step picks the
// node lying in the most still-uncovered sets (ties to the smallest id) and
// retires the sets it covers. Requirements are ignored by design. The per-step
// score is the number of sets newly covered. Consumes the index by removal.
inline Ranking coverage_greedy(RRIndex& ix, std::uint32_t k) {
  if (k == 0 || k > ix.n) throw ValidationError("ranking length k must lie in [1, n]");
  Ranking r;
  std::vector<std::uint8_t> selected(ix.n, 0);
  std::vector<std::uint64_t> cnt(ix.n, 0);
  for (std::uint32_t round = 0; round < k; ++round) {
    std::fill(cnt.begin(), cnt.end(), 0);
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
    selected[best] = 1;
    r.order.push_back(best);
    r.score.push_back(static_cast<double>(cnt[best]));
    remove_hit_sets(ix, best);
  }
  return r;
}

// Influence scores by a reverse random walk: a surfer at v steps back along
// an incoming arc u -> v with probability proportional to its weight, so mass
// accumulates on nodes that sit upstream of much of the graph. Nodes without
// incoming arcs spread their mass uniformly. Fixed-point iteration on
//   x_u = restart / n + (1 - restart) * (sum_v x_v * p_uv / W_v + D / n),
// with W_v the total in-weight of v and D the dangling mass.
inline std::vector<double> pagerank_scores(const Graph& g, double restart = 0.15,
                                           double tol = 1e-4, std::uint32_t max_iter = 10000) {
  if (!(restart > 0.0 && restart < 1.0)) throw ValidationError("restart must lie in (0,1)");
  if (!(tol > 0.0)) throw ValidationError("tolerance must be positive");
  if (g.n == 0) throw ValidationError("empty graph");
  const double n = static_cast<double>(g.n);
  std::vector<double> weight(g.n, 0.0);
  for (std::uint32_t v = 0; v < g.n; ++v)
    for (const Arc& a : g.in[v]) weight[v] += a.p;
  std::vector<double> x(g.n, 1.0 / n), next(g.n, 0.0);
  for (std::uint32_t it = 0; it < max_iter; ++it) {
    double dangling = 0.0;
    for (std::uint32_t v = 0; v < g.n; ++v)
      if (weight[v] == 0.0) dangling += x[v];
    const double base = restart / n + (1.0 - restart) * dangling / n;
    std::fill(next.begin(), next.end(), base);
    for (std::uint32_t v = 0; v < g.n; ++v) {
      if (weight[v] == 0.0) continue;
      const double share = (1.0 - restart) * x[v] / weight[v];
      for (const Arc& a : g.in[v]) next[a.to] += share * a.p;
    }
    double diff = 0.0;
    for (std::uint32_t v = 0; v < g.n; ++v) diff += std::abs(next[v] - x[v]);
    x.swap(next);
    if (diff < tol) return x;
  }
  throw ValidationError("pagerank did not converge within the iteration cap");
}

namespace detail {
inline Ranking rank_by_scores(std::vector<double> scores) {
  Ranking r;
  r.order.resize(scores.size());
  std::iota(r.order.begin(), r.order.end(), 0);
  std::stable_sort(r.order.begin(), r.order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return scores[a] > scores[b]; });
  r.score.reserve(scores.size());
  for (std::uint32_t v : r.order) r.score.push_back(scores[v]);
  return r;
}
}  // namespace detail

inline Ranking pagerank(const Graph& g, double restart = 0.15, double tol = 1e-4,
                        std::uint32_t max_iter = 10000) {
  return detail::rank_by_scores(pagerank_scores(g, restart, tol, max_iter));
}

// Descending out-degree, ties to the smallest id.
inline Ranking rank_by_degree(const Graph& g) {
  std::vector<double> deg(g.n);
  for (std::uint32_t v = 0; v < g.n; ++v) deg[v] = static_cast<double>(g.out_degree(v));
  return detail::rank_by_scores(std::move(deg));
}

// Uniform random permutation (Fisher-Yates on its own stream); scores are 0.
inline Ranking random_ranking(std::uint32_t n, std::uint64_t seed) {
  Ranking r;
  r.order.resize(n);
  std::iota(r.order.begin(), r.order.end(), 0);
  Rng rng(substream(seed, stream::kRanking));
  for (std::uint32_t i = n; i > 1; --i) {
    const auto j = static_cast<std::uint32_t>(rng.next_below(i));
    std::swap(r.order[i - 1], r.order[j]);
  }
  r.score.assign(n, 0.0);
  return r;
}

// One "rank node score" line per entry, ranks starting at 1.
inline void write_ranking(std::ostream& os, const Ranking& r,
                          const std::vector<std::string>* labels = nullptr) {
  for (std::size_t i = 0; i < r.order.size(); ++i) {
    os << i + 1 << ' ' << (labels ? (*labels)[r.order[i]] : std::to_string(r.order[i])) << ' '
       << detail::format_double(r.score[i]) << '\n';
  }
}

}  // namespace cumact
