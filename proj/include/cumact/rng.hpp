#pragma once
// Deterministic pseudo-random streams.
//
// Every randomized component draws from a named substream derived from a
// master seed plus up to three stream coordinates, so any individual piece of
// work (one cascade run, one reverse-reachable set, one grid point) can be
// reproduced bit-for-bit in isolation and work can be scheduled in any order
// without changing results. The generator is xoshiro256++ seeded through
// splitmix64; doubles take the top 53 bits, so output is identical across
// platforms and toolchains.

#include <cstdint>

namespace cumact {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& w : s_) {
      x += 0x9e3779b97f4a7c15ULL;
      w = splitmix64(x);
    }
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in [0, 1); 53 significant bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Bernoulli(p). p <= 0 never fires, p >= 1 always fires.
  bool coin(double p) { return next_double() < p; }

  // Uniform in [0, bound). bound must be nonzero.
  std::uint64_t next_below(std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t s_[4];
};

// Well-known stream tags. Components must not share a tag, so streams drawn
// for different purposes are decorrelated even under equal coordinates.
namespace stream {
constexpr std::uint64_t kProbs = 1;     // edge-probability assignment
constexpr std::uint64_t kCascade = 2;   // forward cascade runs
constexpr std::uint64_t kRrSet = 3;     // reverse-reachable set generation
constexpr std::uint64_t kEval = 4;      // held-out evaluation runs
constexpr std::uint64_t kRanking = 5;   // random baseline permutations
constexpr std::uint64_t kGreedy = 6;    // surrogate-greedy estimator probes
constexpr std::uint64_t kSolve = 7;     // per-grid-point solver streams
}  // namespace stream

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  return splitmix64(a ^ (0x9e3779b97f4a7c15ULL + (b << 1)));
}

// Derives the substream (master, tag, a, b, c). Equal coordinates give equal
// streams; any difference in one coordinate gives an unrelated stream.
inline Rng substream(std::uint64_t master, std::uint64_t tag, std::uint64_t a = 0,
                     std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t s = mix_seed(master, tag);
  s = mix_seed(s, a);
  s = mix_seed(s, b);
  s = mix_seed(s, c);
  return Rng(s);
}

}  // namespace cumact
