#pragma once

#include "mnpf/types.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mnpf {

class GameError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tabular general-sum Markov game. All tables are dense; joint actions are
/// indexed by JointActionSpace (player 0 fastest-varying).
///
/// Invariants (checked by validate):
///   - every transition row sums to 1 within 1e-12, entries >= 0
///   - mu sums to 1 within 1e-12; mu(s) == 0 is allowed but reported as a
///     warning because the convergence analysis needs full support
///   - 0 <= gamma < 1
///   - r_max equals the exact maximum absolute reward entry
struct MarkovGame {
  int num_players = 0;
  int num_states = 0;
  std::vector<int> num_actions;  // |A_i| per player
  std::vector<Mat> rewards;      // per player: num_states x joint_actions
  Mat transitions;               // (num_states * joint_actions) x num_states
  double gamma = 0.0;
  Vec mu;                        // initial state distribution
  double r_max = 0.0;
  JointActionSpace joint;
  std::string name;

  int joint_actions() const { return joint.size(); }

  // Row of `transitions` holding P(.|s, a).
  int row(int s, int a) const { return s * joint.size() + a; }

  double value_bound() const { return r_max / (1.0 - gamma); }
};

// Recomputes r_max and the joint-action index from the tables. Call after
// filling the fields by hand; load_game and the generators do it themselves.
void finalize_game(MarkovGame& game);

// Checks all MarkovGame invariants. Throws GameError naming the offending
// index on hard violations; returns warnings (e.g. unsupported states).
std::vector<std::string> validate_game(const MarkovGame& game);

/// Stationary policy profile: pi[i] is a num_states x |A_i| matrix whose
/// rows are probability vectors.
struct PolicyProfile {
  std::vector<Mat> pi;

  int num_players() const { return static_cast<int>(pi.size()); }

  // Euclidean norm of the stacked difference of two profiles.
  static double distance(const PolicyProfile& a, const PolicyProfile& b);
};

// Throws GameError if a row is off the simplex by more than 1e-12.
void validate_profile(const MarkovGame& game, const PolicyProfile& profile);

// pi_i(a|s) = 1/|A_i| for every player and state.
PolicyProfile uniform_policy(const MarkovGame& game);

// Deterministic profile from per-player, per-state action choices.
PolicyProfile deterministic_policy(const MarkovGame& game,
                                   const std::vector<std::vector<int>>& actions);

// (1-theta) * pi + theta * uniform, applied to the selected players only
// (all players in the two-argument form). theta must lie in [0, 1].
PolicyProfile mix_with_uniform(const MarkovGame& game, const PolicyProfile& profile,
                               double theta);
PolicyProfile mix_with_uniform(const MarkovGame& game, const PolicyProfile& profile,
                               double theta, const std::vector<int>& players);

// Mixes every player except `player` toward uniform.
PolicyProfile mix_opponents(const MarkovGame& game, const PolicyProfile& profile,
                            int player, double theta);

// Probability of each joint action at state s under the product policy.
Vec joint_weights(const MarkovGame& game, const PolicyProfile& profile, int s);

// Same, but excluding player i's own factor: entry a holds
// prod_{j != i} pi_j(a_j | s). Constant 1 when there are no opponents.
Vec opponent_weights(const MarkovGame& game, const PolicyProfile& profile,
                     int player, int s);

// Mesh over the whole product policy space: every player's every state row
// ranges over the simplex lattice with the given spacing (spacing must be
// 1/k for integer k). Throws GameError if the mesh would exceed max_points.
std::vector<PolicyProfile> simplex_grid(const MarkovGame& game, double spacing,
                                        std::size_t max_points = 200000);

// --- Generators -----------------------------------------------------------
//
// All generators are deterministic in the seed. Rewards are drawn i.i.d.
// uniform on [-1, 1], transition rows from a flat Dirichlet, mu is uniform.

// Identical-interest game: one reward table shared by every player.
MarkovGame make_team_game(std::uint64_t seed, int num_states, int num_players,
                          int num_actions, double gamma = 0.7);

// Independent reward tables per player.
MarkovGame make_random_game(std::uint64_t seed, int num_states, int num_players,
                            const std::vector<int>& num_actions, double gamma);

// Each player's reward depends only on their own action and not on the
// state, with a strictly dominant action per player; the unique equilibrium
// plays the dominant profile in every state.
MarkovGame make_dominant_game(std::uint64_t seed, int num_states, int num_players,
                              int num_actions, double gamma = 0.7);

}  // namespace mnpf
