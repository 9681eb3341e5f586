#pragma once
// Reverse-reachable (RR) set engine.
//
// An RR set for node u is drawn by sampling a live-edge outcome and walking
// arcs backwards from u; it holds every node that would reach u in that
// outcome. The activation probability P_u(S) equals the probability that S
// intersects a fresh RR set of u, so theta sets per target turn activation
// estimation into set coverage: S "hits" a set by intersecting it, u counts
// as activated once req(u) = ceil(tau_u * theta) of its sets are hit.
//
// The index keeps, per target u, theta sets plus an inverted node -> set-id
// map so that hit removal after picking a seed never rescans set contents.
// req(u) always equals ceil(tau_u * theta) minus the sets removed from u's
// collection, and may go negative.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <vector>

#include "cumact/graph.hpp"
#include "cumact/rng.hpp"

namespace cumact {

constexpr std::uint64_t kDefaultMemBudget = 4ull << 30;  // bytes

// Hits needed before a target counts as activated: ceil(tau * theta), with a
// tiny slack so products that are integers in exact arithmetic stay put.
inline std::int64_t required_hit_count(double tau, std::uint32_t theta) {
  return static_cast<std::int64_t>(std::ceil(tau * static_cast<double>(theta) - 1e-9));
}

// Smallest theta meeting the per-target accuracy rule ln(2n)/(2 eps^2): with
// that many sets each coverage fraction sits within eps of P_u(S) with
// probability >= 1 - 1/n.
inline double theta_bound(std::uint64_t n, double eps) {
  if (n == 0 || eps <= 0.0) throw ValidationError("theta bound needs n >= 1, eps > 0");
  return std::log(2.0 * static_cast<double>(n)) / (2.0 * eps * eps);
}

inline std::uint32_t required_theta(std::uint64_t n, double eps) {
  const double bound = theta_bound(n, eps);
  if (!std::isfinite(bound) || bound >= 4.0e9)
    throw ValidationError("required theta overflows a 32-bit count");
  const auto t = static_cast<std::uint32_t>(std::ceil(bound));
  return t == 0 ? 1 : t;
}

// One RR set: reverse BFS over an implicitly sampled live-edge outcome. Each
// in-arc of a visited node flips its coin at most once. Returns sorted ids,
// always containing the root.
inline std::vector<std::uint32_t> generate_rr_set(const Graph& g, std::uint32_t root, Rng& rng) {
  if (!g.has_probs) throw ValidationError("RR sets need edge probabilities");
  if (root >= g.n) throw ValidationError("root node id out of range");
  std::vector<std::uint8_t> seen(g.n, 0);
  std::vector<std::uint32_t> queue{root};
  seen[root] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    std::uint32_t v = queue[head];
    for (const Arc& a : g.in[v])
      if (!seen[a.to] && rng.coin(a.p)) {
        seen[a.to] = 1;
        queue.push_back(a.to);
      }
  }
  std::sort(queue.begin(), queue.end());
  return queue;
}

struct RRIndex {
  std::uint32_t n = 0;
  std::uint32_t theta = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint32_t> owners;       // ascending target ids
  std::vector<std::int32_t> owner_index;   // node -> position in owners, -1 otherwise
  std::vector<std::uint32_t> nodes;        // concatenated sorted set contents
  std::vector<std::uint64_t> offs;         // global set id -> slice of nodes
  std::vector<std::uint8_t> removed;       // per global set
  std::vector<std::int64_t> req;           // per owner; negative once overshot
  std::vector<std::uint64_t> rem_count;    // per owner: sets removed so far
  std::vector<std::uint64_t> inv_offs;     // node -> slice of inv_sets
  std::vector<std::uint32_t> inv_sets;     // global set ids containing the node
  std::uint64_t active_count = 0;          // owners with req <= 0

  std::uint64_t set_count() const { return static_cast<std::uint64_t>(owners.size()) * theta; }
  std::uint32_t owner_of_set(std::uint32_t gid) const { return gid / theta; }
  std::uint64_t estimated_active() const { return active_count; }
};

// theta RR sets per target node, each drawn from substream (seed, rr, u, i)
// so any single set can be regenerated in isolation. Fails up front when the
// index would not fit the memory budget.
inline RRIndex build_index(const Graph& g, const TargetSet& target, const Thresholds& th,
                           std::uint32_t theta, std::uint64_t seed,
                           std::uint64_t mem_budget = kDefaultMemBudget) {
  if (theta == 0) throw ValidationError("theta must be positive");
  if (!g.has_probs) throw ValidationError("RR sets need edge probabilities");
  if (th.tau.size() != g.n) throw ValidationError("threshold table size mismatch");
  if (target.members.empty()) throw ValidationError("target set is empty");
  const std::uint64_t total_sets = static_cast<std::uint64_t>(target.members.size()) * theta;
  if (total_sets > 0xffffffffull)
    throw ValidationError("owner count times theta exceeds 32-bit set ids");

  RRIndex ix;
  ix.n = g.n;
  ix.theta = theta;
  ix.seed = seed;
  ix.owners = target.members;
  ix.owner_index.assign(g.n, -1);
  for (std::size_t i = 0; i < ix.owners.size(); ++i)
    ix.owner_index[ix.owners[i]] = static_cast<std::int32_t>(i);
  ix.req.resize(ix.owners.size());
  for (std::size_t i = 0; i < ix.owners.size(); ++i) {
    const double tau = th.tau[ix.owners[i]];
    if (!(tau > 0.0 && tau <= 1.0)) throw ValidationError("threshold outside (0,1]");
    ix.req[i] = required_hit_count(tau, theta);
  }
  ix.rem_count.assign(ix.owners.size(), 0);
  ix.offs.reserve(total_sets + 1);
  ix.offs.push_back(0);
  ix.removed.assign(total_sets, 0);

  // fixed footprint + 8 bytes per stored node id (4 in nodes, 4 in inv_sets)
  const std::uint64_t fixed_bytes =
      (total_sets + 1) * 8 + total_sets + static_cast<std::uint64_t>(g.n) * 12 +
      ix.owners.size() * 24;
  std::vector<std::uint32_t> mark(g.n, 0);
  std::vector<std::uint32_t> queue;
  std::uint32_t epoch = 0;
  std::uint64_t sets_done = 0;
  for (std::uint32_t u : ix.owners) {
    for (std::uint32_t i = 0; i < theta; ++i) {
      Rng rng = substream(seed, stream::kRrSet, u, i);
      ++epoch;
      queue.clear();
      queue.push_back(u);
      mark[u] = epoch;
      for (std::size_t head = 0; head < queue.size(); ++head)
        for (const Arc& a : g.in[queue[head]])
          if (mark[a.to] != epoch && rng.coin(a.p)) {
            mark[a.to] = epoch;
            queue.push_back(a.to);
          }
      std::sort(queue.begin(), queue.end());
      ix.nodes.insert(ix.nodes.end(), queue.begin(), queue.end());
      ix.offs.push_back(ix.nodes.size());
      ++sets_done;
      const std::uint64_t bytes_now = fixed_bytes + ix.nodes.size() * 8;
      if (bytes_now > mem_budget) {
        const std::uint64_t projected =
            fixed_bytes + (ix.nodes.size() * 8) * total_sets / sets_done;
        throw ValidationError("memory budget exceeded: index needs about " +
                              std::to_string(projected) + " bytes, budget is " +
                              std::to_string(mem_budget));
      }
    }
  }

  ix.inv_offs.assign(g.n + 1, 0);
  for (std::uint32_t v : ix.nodes) ++ix.inv_offs[v + 1];
  for (std::uint32_t v = 0; v < g.n; ++v) ix.inv_offs[v + 1] += ix.inv_offs[v];
  ix.inv_sets.resize(ix.nodes.size());
  std::vector<std::uint64_t> cursor(ix.inv_offs.begin(), ix.inv_offs.end() - 1);
  for (std::uint32_t gid = 0; gid < total_sets; ++gid)
    for (std::uint64_t idx = ix.offs[gid]; idx < ix.offs[gid + 1]; ++idx)
      ix.inv_sets[cursor[ix.nodes[idx]]++] = gid;

  for (std::int64_t r : ix.req)
    if (r <= 0) ++ix.active_count;
  return ix;
}

// Fraction of u's theta sets hit by S; sets already removed count as hit.
inline double coverage_fraction(const RRIndex& ix, std::uint32_t u,
                                const std::vector<std::uint32_t>& seeds) {
  if (u >= ix.n || ix.owner_index[u] < 0)
    throw ValidationError("coverage_fraction: node is not a target");
  std::vector<std::uint8_t> in_s(ix.n, 0);
  for (std::uint32_t s : seeds) {
    if (s >= ix.n) throw ValidationError("seed node id out of range");
    in_s[s] = 1;
  }
  const std::uint64_t begin = static_cast<std::uint64_t>(ix.owner_index[u]) * ix.theta;
  std::uint64_t hit = 0;
  for (std::uint64_t gid = begin; gid < begin + ix.theta; ++gid) {
    if (ix.removed[gid]) {
      ++hit;
      continue;
    }
    for (std::uint64_t idx = ix.offs[gid]; idx < ix.offs[gid + 1]; ++idx)
      if (in_s[ix.nodes[idx]]) {
        ++hit;
        break;
      }
  }
  return static_cast<double>(hit) / static_cast<double>(ix.theta);
}

// Live sets of target u that contain v.
inline std::uint64_t overlap(const RRIndex& ix, std::uint32_t v, std::uint32_t u) {
  if (v >= ix.n) throw ValidationError("node id out of range");
  if (u >= ix.n || ix.owner_index[u] < 0) throw ValidationError("overlap: node is not a target");
  const std::uint64_t begin = static_cast<std::uint64_t>(ix.owner_index[u]) * ix.theta;
  const std::uint64_t end = begin + ix.theta;
  // inv entries are ascending, and one owner's sets form one contiguous range
  const auto* lo = ix.inv_sets.data() + ix.inv_offs[v];
  const auto* hi = ix.inv_sets.data() + ix.inv_offs[v + 1];
  const auto* first = std::lower_bound(lo, hi, static_cast<std::uint32_t>(begin));
  std::uint64_t count = 0;
  for (const auto* it = first; it != hi && *it < end; ++it)
    if (!ix.removed[*it]) ++count;
  return count;
}

// Removes every live set containing x and charges each removal against its
// owner's requirement. Returns removals per owner position. Idempotent.
inline std::vector<std::uint64_t> remove_hit_sets(RRIndex& ix, std::uint32_t x) {
  if (x >= ix.n) throw ValidationError("node id out of range");
  std::vector<std::uint64_t> rem(ix.owners.size(), 0);
  for (std::uint64_t idx = ix.inv_offs[x]; idx < ix.inv_offs[x + 1]; ++idx) {
    const std::uint32_t gid = ix.inv_sets[idx];
    if (ix.removed[gid]) continue;
    ix.removed[gid] = 1;
    const std::uint32_t oi = ix.owner_of_set(gid);
    ++rem[oi];
    ++ix.rem_count[oi];
    if (ix.req[oi] == 1) ++ix.active_count;  // crossing zero activates the owner
    --ix.req[oi];
  }
  return rem;
}

// ---- binary snapshot -------------------------------------------------------
//
// Layout (little-endian, version 1): magic "CARR", u32 version, u32 n,
// u32 theta, u64 seed, u64 owner count, the owner ids, then per set a u32
// length plus that many u32 node ids, owner-major in generation order.
// Only the sampled sets are persisted; requirements are recomputed from the
// thresholds at load, so a reloaded index always starts pre-removal.

inline void save_snapshot(const RRIndex& ix, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot open snapshot '" + path + "' for writing");
  auto put32 = [&f](std::uint32_t v) { f.write(reinterpret_cast<const char*>(&v), 4); };
  auto put64 = [&f](std::uint64_t v) { f.write(reinterpret_cast<const char*>(&v), 8); };
  f.write("CARR", 4);
  put32(1);
  put32(ix.n);
  put32(ix.theta);
  put64(ix.seed);
  put64(ix.owners.size());
  for (std::uint32_t u : ix.owners) put32(u);
  for (std::uint64_t gid = 0; gid < ix.set_count(); ++gid) {
    put32(static_cast<std::uint32_t>(ix.offs[gid + 1] - ix.offs[gid]));
    for (std::uint64_t idx = ix.offs[gid]; idx < ix.offs[gid + 1]; ++idx) put32(ix.nodes[idx]);
  }
  if (!f) throw ValidationError("snapshot write failed for '" + path + "'");
}

inline RRIndex load_snapshot(const std::string& path, const Graph& g, const TargetSet& target,
                             const Thresholds& th) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot open snapshot '" + path + "'");
  auto get32 = [&f, &path]() {
    std::uint32_t v = 0;
    if (!f.read(reinterpret_cast<char*>(&v), 4))
      throw ValidationError("snapshot '" + path + "' is truncated");
    return v;
  };
  auto get64 = [&f, &path]() {
    std::uint64_t v = 0;
    if (!f.read(reinterpret_cast<char*>(&v), 8))
      throw ValidationError("snapshot '" + path + "' is truncated");
    return v;
  };
  char magic[4];
  if (!f.read(magic, 4) || std::string(magic, 4) != "CARR")
    throw ValidationError("snapshot '" + path + "' has the wrong magic");
  if (get32() != 1) throw ValidationError("snapshot '" + path + "' has an unsupported version");
  RRIndex ix;
  ix.n = get32();
  ix.theta = get32();
  ix.seed = get64();
  if (ix.n != g.n) throw ValidationError("snapshot node count differs from the graph");
  if (ix.theta == 0) throw ValidationError("snapshot theta is zero");
  const std::uint64_t owner_count = get64();
  ix.owners.resize(owner_count);
  for (auto& u : ix.owners) u = get32();
  if (ix.owners != target.members)
    throw ValidationError("snapshot target set differs from the requested one");
  if (th.tau.size() != g.n) throw ValidationError("threshold table size mismatch");
  ix.owner_index.assign(g.n, -1);
  for (std::size_t i = 0; i < ix.owners.size(); ++i)
    ix.owner_index[ix.owners[i]] = static_cast<std::int32_t>(i);
  const std::uint64_t total_sets = owner_count * ix.theta;
  ix.offs.reserve(total_sets + 1);
  ix.offs.push_back(0);
  for (std::uint64_t gid = 0; gid < total_sets; ++gid) {
    const std::uint32_t len = get32();
    for (std::uint32_t i = 0; i < len; ++i) {
      const std::uint32_t v = get32();
      if (v >= ix.n) throw ValidationError("snapshot contains a node id out of range");
      ix.nodes.push_back(v);
    }
    ix.offs.push_back(ix.nodes.size());
  }
  ix.removed.assign(total_sets, 0);
  ix.rem_count.assign(owner_count, 0);
  ix.req.resize(owner_count);
  for (std::size_t i = 0; i < owner_count; ++i)
    ix.req[i] = required_hit_count(th.tau[ix.owners[i]], ix.theta);
  ix.inv_offs.assign(g.n + 1, 0);
  for (std::uint32_t v : ix.nodes) ++ix.inv_offs[v + 1];
  for (std::uint32_t v = 0; v < g.n; ++v) ix.inv_offs[v + 1] += ix.inv_offs[v];
  ix.inv_sets.resize(ix.nodes.size());
  std::vector<std::uint64_t> cursor(ix.inv_offs.begin(), ix.inv_offs.end() - 1);
  for (std::uint32_t gid = 0; gid < total_sets; ++gid)
    for (std::uint64_t idx = ix.offs[gid]; idx < ix.offs[gid + 1]; ++idx)
      ix.inv_sets[cursor[ix.nodes[idx]]++] = gid;
  for (std::int64_t r : ix.req)
    if (r <= 0) ++ix.active_count;
  return ix;
}

}  // namespace cumact
