#pragma once

#include "mnpf/potential.hpp"
#include "mnpf/solver.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mnpf {

/// Polynomial two-timescale step sizes alpha(n) = n^-a (critic) and
/// beta(n) = n^-b (actor), n >= 1. Requiring 1/2 < a < b <= 1 gives
/// divergent sums, square summability, a vanishing beta/alpha ratio and a
/// bounded alpha(floor(x n))/alpha(n) along linear subsequences.
struct StepSizes {
  double fast_exponent = 0.6;
  double slow_exponent = 0.9;

  double alpha(std::int64_t n) const {
    return std::pow(static_cast<double>(n), -fast_exponent);
  }
  double beta(std::int64_t n) const {
    return std::pow(static_cast<double>(n), -slow_exponent);
  }
};

// Validates the exponent ordering.
StepSizes make_stepsizes(double fast_exponent, double slow_exponent);

struct LearnerConfig {
  double theta = 0.01;         // exploration weight, in (0, 1)
  double fast_exponent = 0.6;  // a
  double slow_exponent = 0.9;  // b
  std::int64_t horizon = 0;    // T
  std::uint64_t seed = 0;
  TieRule tie_rule = TieRule::lowest_index;
  std::int64_t metric_period = 1000;
  std::int64_t record_period = 1;
  bool freeze_policy = false;  // beta forced to 0 (critic-tracking runs)
  bool check_invariants = true;
  // Defaults to the uniform profile when absent.
  std::optional<PolicyProfile> initial_policy;
};

/// One learner's private state. The critic q and the counters only ever
/// change at the most recently visited (state, own-action) entry; the policy
/// only at the most recently visited state.
struct AgentState {
  Mat q;         // num_states x |A_i|, zero-initialized
  Mat pi;        // num_states x |A_i|, rows on the simplex
  CountMat n_sa; // visit counts per (state, own action)
};

/// State visit counters. Every agent maintains the same counts, so they are
/// stored once; consistency with each agent's n_sa is an invariant.
struct SharedCounters {
  CountVec n;
};

std::vector<AgentState> init_agents(const MarkovGame& game,
                                    const PolicyProfile& initial);
SharedCounters init_counters(const MarkovGame& game);

struct StepRecord {
  std::int64_t t = 0;
  int state = 0;
  std::vector<int> actions;
  Vec rewards;
};

struct MetricSample {
  std::int64_t t = 0;
  double tau = 0.0;  // cumulative slow stepsize up to t
  double nash_gap = 0.0;
  Vec player_gaps;
  std::optional<double> phi_mu;
  PolicyProfile policy;
};

struct TrajectoryLog {
  std::uint64_t seed = 0;
  std::vector<StepRecord> steps;
  std::vector<MetricSample> metrics;
  std::int64_t violation_count = 0;
  std::vector<std::string> violations;  // first few messages
};

/// Transition context handed to one iterate: the previous state, the actions
/// taken there, the rewards observed, and the state just reached.
struct StepContext {
  int prev_state = 0;
  std::vector<int> prev_actions;
  Vec prev_rewards;
  int state = 0;
};

struct StepResult {
  std::vector<int> actions;
  Vec rewards;
};

// One iterate: increments the visit counters, moves each agent's critic
// entry q(s^{t-1}, a_i^{t-1}) toward r^{t-1} + gamma pi_i(s^t) . q_i(s^t)
// with step alpha(count), moves pi_i(s^{t-1}) toward the greedy vertex of
// the pre-update critic row with step beta(count), then samples each a_i^t
// from (1-theta) pi_i^t(s^t) + theta uniform and returns realized rewards.
// Only the visited entries change.
StepResult learner_step(const MarkovGame& game, std::vector<AgentState>& agents,
                        SharedCounters& counters, const StepSizes& sizes,
                        double theta, const StepContext& ctx, Rng& rng,
                        bool freeze_policy = false);

// Full loop: s^0 ~ mu, a^0 ~ pi^0(s^0), then `horizon` iterates with states
// drawn from the game's transition kernel. Metrics (Nash gap, and Phi(mu, .)
// when a potential is attached) are computed by the harness from snapshots;
// the agents never see them. Reproducible for a fixed seed.
TrajectoryLog run_learning(const MarkovGame& game, const LearnerConfig& config,
                           const Potential* phi = nullptr,
                           const SolverOptions& opts = {});

struct ThetaBound {
  double value = 0.0;
  bool clipped = false;
};

// Largest exploration weight for which the policy trajectory provably decays
// the potential shortfall outside the lambda-inflated equilibrium set:
//   theta <= lambda sqrt(2|S|) / (r_max (2/(1-gamma)^3 + 4/(D (1-gamma)^2))).
// A zero-reward game puts no constraint on theta; 1 is returned, flagged.
ThetaBound theta_bound(const MarkovGame& game, double lambda, double big_d);

}  // namespace mnpf
