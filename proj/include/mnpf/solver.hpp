#pragma once

#include "mnpf/game.hpp"
#include "mnpf/rng.hpp"

#include <cstdint>
#include <vector>

namespace mnpf {

struct SolverOptions {
  // Sup-norm optimality tolerance for best-response value iteration.
  double value_tol = 1e-10;
  // Certification tolerance for Nash-gap comparisons.
  double gap_tol = 1e-8;
};

/// Discounted state values per player, V(i, s), plus the mu-weighted
/// aggregate V_mu(i) = sum_s mu(s) V(i, s).
struct ValueTable {
  Mat v;     // num_players x num_states
  Vec v_mu;  // num_players
};

/// Q(i, s, a_i): value of playing a_i at s once and following pi afterwards,
/// with opponents fixed at pi_{-i} throughout.
struct QTable {
  std::vector<Mat> q;  // per player: num_states x |A_i|
};

struct OccupancyVector {
  Vec d;  // discounted state occupancy, sums to 1
};

struct BestResponse {
  Mat policy;        // deterministic, num_states x |A_i|
  double value;      // V_i(mu, BR_i, pi_{-i})
  Vec state_values;  // V_i(s, BR_i, pi_{-i})
};

struct NashGapReport {
  Vec gaps;        // per player: best-response value minus current value
  double epsilon;  // max over players
  std::vector<Mat> best_responses;

  // Membership in the epsilon-equilibrium set at level `level`.
  bool within(double level, double tol = 1e-8) const { return epsilon <= level + tol; }
};

// Policy-averaged transition matrix P_pi(s, s') and reward vector r_pi(s).
Mat policy_transition(const MarkovGame& game, const PolicyProfile& profile);
Vec policy_reward(const MarkovGame& game, const PolicyProfile& profile, int player);

// Exact policy evaluation: solves (I - gamma P_pi) v = r_pi per player.
ValueTable policy_value(const MarkovGame& game, const PolicyProfile& profile);

// Single player's state values under the profile.
Vec player_state_values(const MarkovGame& game, const PolicyProfile& profile,
                        int player);

// Q from an already computed value table (or from scratch).
QTable q_function(const MarkovGame& game, const PolicyProfile& profile);
QTable q_function(const MarkovGame& game, const PolicyProfile& profile,
                  const ValueTable& values);

// One player's Q matrix (num_states x |A_i|).
Mat player_q_values(const MarkovGame& game, const PolicyProfile& profile, int player);

// Discounted occupancy d = (1-gamma) mu' (I - gamma P_pi)^{-1}, as a solve.
OccupancyVector occupancy(const MarkovGame& game, const PolicyProfile& profile);

// Vertex of the simplex maximizing p . q; ties to the lowest index.
Vec one_stage_br(const Vec& q_slice, TieRule tie_rule = TieRule::lowest_index);

// Optimal policy of the single-agent MDP induced by freezing the opponents.
// Value iteration to `value_tol`, then exact evaluation of the greedy policy.
BestResponse best_response(const MarkovGame& game, int player,
                           const PolicyProfile& profile,
                           const SolverOptions& opts = {});

NashGapReport nash_gap(const MarkovGame& game, const PolicyProfile& profile,
                       const SolverOptions& opts = {});

/// Measured effect of mixing the opponents toward uniform, against the
/// closed-form bound 2 theta r_max / (1-gamma)^2 that holds for both the
/// value and the Q function.
struct PerturbationReport {
  bool applicable = true;  // false for single-player games
  double theta = 0.0;
  double bound = 0.0;
  double v_deviation = 0.0;  // max_s |V_i(s, pi) - V_i(s, pi_i, mixed)|
  double q_deviation = 0.0;  // max_{s,a_i} of the same for Q
  long profiles_checked = 0;
  bool pass = true;
};

// Checks the given profile, plus `extra_samples` random profiles drawn from
// per-state Dirichlet distributions (seeded). Reports the worst deviation.
PerturbationReport perturbation_bounds_check(const MarkovGame& game, int player,
                                             const PolicyProfile& profile, double theta,
                                             long extra_samples = 0,
                                             std::uint64_t seed = 0);

// Random interior profile with per-state flat Dirichlet rows.
PolicyProfile random_policy(const MarkovGame& game, Rng& rng);

}  // namespace mnpf
