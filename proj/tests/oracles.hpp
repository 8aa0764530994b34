#pragma once

#include "mnpf/solver.hpp"

#include <cstdint>
#include <vector>

// Test-side oracles. Everything here recomputes quantities by routes that
// are independent of the solver implementations they are used to check:
// sampling, truncated series, and exhaustive enumeration.
namespace mnpf::testing {

// Bitwise equality for determinism checks.
inline bool exact_equal(const Mat& a, const Mat& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         (a.array() == b.array()).all();
}
inline bool exact_equal(const Vec& a, const Vec& b) {
  return a.size() == b.size() && (a.array() == b.array()).all();
}

// One state, one player, two actions with rewards {1, 0}, a self loop and
// gamma = 0.5. The rewarding action is worth exactly 2.
MarkovGame single_state_game();

struct McEstimate {
  Vec mean;       // per player
  Vec std_error;  // per player
  double tail_bias = 0.0;  // bound on the truncation bias
};

// Monte-Carlo evaluation of V(mu, pi): episode rollouts with the horizon
// chosen so the discarded tail is below 1e-8 * r_max / (1-gamma).
McEstimate mc_policy_value(const MarkovGame& game, const PolicyProfile& profile,
                           long episodes, std::uint64_t seed);

// sum_{k<=K} (1-gamma) gamma^k mu' P_pi^k with gamma^{K+1} < 1e-10.
Vec series_occupancy(const MarkovGame& game, const PolicyProfile& profile);

struct EnumeratedBest {
  double value = 0.0;
  std::vector<int> actions;  // per state
};

// Exhaustive best response: evaluates every deterministic policy of `player`
// (opponents frozen at `profile`) through policy_value and keeps the best.
EnumeratedBest enumerate_best_response(const MarkovGame& game, int player,
                                       const PolicyProfile& profile);

// Nash gap by the same enumeration route.
double enumerated_nash_gap(const MarkovGame& game, const PolicyProfile& profile);

// Deterministic joint profiles whose exact Nash gap is at most `tol`.
std::vector<PolicyProfile> enumerate_pure_equilibria(const MarkovGame& game,
                                                     double tol = 1e-8);

// Random desk-scale game: |S| <= 4, N <= 3, |A_i| <= 3 drawn per player,
// gamma from {0.3, 0.7, 0.9}.
MarkovGame random_desk_game(Rng& rng);

}  // namespace mnpf::testing
