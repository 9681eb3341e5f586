#pragma once
// Shared in-code fixtures and small builders for the test suite. The same
// three graphs also exist as edge-list files under tests/fixtures/ for
// loader- and CLI-level tests.

#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

#include "cumact/graph.hpp"

namespace fixtures {

inline std::string path(const std::string& name) {
  return std::string(CUMACT_FIXTURE_DIR) + "/" + name;
}

inline cumact::Graph make_graph(
    const std::vector<std::string>& nodes,
    const std::vector<std::tuple<std::uint32_t, std::uint32_t, double>>& arcs) {
  cumact::Graph g;
  for (const auto& t : nodes) g.add_node(t);
  for (auto [u, v, p] : arcs) g.add_arc(u, v, p);
  g.has_probs = true;
  return g;
}

using ArcSpec = std::tuple<std::uint32_t, std::uint32_t, double>;

inline cumact::Graph make_graph(std::uint32_t n, const std::vector<ArcSpec>& arcs) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::uint32_t v = 0; v < n; ++v) labels.push_back(std::to_string(v));
  return make_graph(labels, arcs);
}

// a,b,c -> u at p = 1/2. Ids: a=0 b=1 c=2 u=3.
constexpr std::uint32_t kFanA = 0, kFanB = 1, kFanC = 2, kFanU = 3;
inline cumact::Graph fanin3() {
  return make_graph({"a", "b", "c", "u"}, {{0, 3, 0.5}, {1, 3, 0.5}, {2, 3, 0.5}});
}
// tau_u = 7/8, everyone else 1.
inline cumact::Thresholds fanin3_thresholds() {
  cumact::Thresholds th = cumact::Thresholds::uniform(4, 1.0);
  th.tau[kFanU] = 0.875;
  return th;
}

// v -> u at p = 1. Ids: v=0 u=1.
constexpr std::uint32_t kChainV = 0, kChainU = 1;
inline cumact::Graph chain2() { return make_graph({"v", "u"}, {{0, 1, 1.0}}); }

// a -> x, a -> y, b -> y, all p = 1. Ids: a=0 b=1 x=2 y=3.
constexpr std::uint32_t kStarA = 0, kStarB = 1, kStarX = 2, kStarY = 3;
inline cumact::Graph star() {
  return make_graph({"a", "b", "x", "y"}, {{0, 2, 1.0}, {0, 3, 1.0}, {1, 3, 1.0}});
}

// Deterministic random instances for property tests: m distinct arcs (no
// self-loops) with probabilities uniform in [pmin, pmax].
inline cumact::Graph random_graph(std::uint32_t n, std::uint32_t m, std::uint64_t seed,
                                  double pmin = 0.1, double pmax = 0.9) {
  cumact::Graph g;
  for (std::uint32_t v = 0; v < n; ++v) g.add_node(std::to_string(v));
  cumact::Rng rng(cumact::mix_seed(seed, 0x67617068));
  std::unordered_set<std::uint64_t> seen;
  std::uint32_t placed = 0;
  while (placed < m) {
    auto u = static_cast<std::uint32_t>(rng.next_below(n));
    auto v = static_cast<std::uint32_t>(rng.next_below(n));
    if (u == v) continue;
    if (!seen.insert((static_cast<std::uint64_t>(u) << 32) | v).second) continue;
    g.add_arc(u, v, pmin + (pmax - pmin) * rng.next_double());
    ++placed;
  }
  g.has_probs = true;
  return g;
}

inline cumact::Thresholds random_thresholds(std::uint32_t n, std::uint64_t seed, double lo = 0.05,
                                            double hi = 0.95) {
  cumact::Rng rng(cumact::mix_seed(seed, 0x74617573));
  cumact::Thresholds th;
  th.tau.resize(n);
  for (auto& t : th.tau) t = lo + (hi - lo) * rng.next_double();
  return th;
}

}  // namespace fixtures
