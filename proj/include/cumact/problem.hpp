#pragma once
// Problem statements shared by the exact oracle and the solvers, plus the
// one place where threshold comparisons are defined.
//
// A node u counts as cumulatively active under seed set S when its activation
// probability reaches its threshold: P_u(S) >= tau_u. Exact arithmetic gets a
// small absolute guard band so enumeration round-off cannot flip a comparison
// that is an equality in exact arithmetic; sampled estimates are plain
// rationals and compare with >= directly.

#include <cstdint>

namespace cumact {

// Guard band for threshold comparisons on exactly-computed probabilities.
constexpr double kOracleGuard = 1e-9;

inline bool meets_threshold_exact(double p, double tau) { return p >= tau - kOracleGuard; }
inline bool meets_threshold_estimate(double p, double tau) { return p >= tau; }

struct ProblemSpec {
  enum class Kind { ImCa, SmCa };
  Kind kind = Kind::ImCa;
  std::uint32_t k = 1;    // ImCa: exact seed budget
  std::uint64_t eta = 1;  // SmCa: required number of active targets

  static ProblemSpec im_ca(std::uint32_t k) {
    ProblemSpec s;
    s.kind = Kind::ImCa;
    s.k = k;
    return s;
  }
  static ProblemSpec sm_ca(std::uint64_t eta) {
    ProblemSpec s;
    s.kind = Kind::SmCa;
    s.eta = eta;
    return s;
  }
};

}  // namespace cumact
