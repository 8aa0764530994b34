#include "mnpf/learner.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mnpf {

StepSizes make_stepsizes(double fast_exponent, double slow_exponent) {
  if (!(0.5 < fast_exponent && fast_exponent < slow_exponent && slow_exponent <= 1.0))
    throw std::invalid_argument(
        "step-size exponents must satisfy 1/2 < a < b <= 1, got a=" +
        std::to_string(fast_exponent) + ", b=" + std::to_string(slow_exponent));
  return StepSizes{fast_exponent, slow_exponent};
}

std::vector<AgentState> init_agents(const MarkovGame& game,
                                    const PolicyProfile& initial) {
  validate_profile(game, initial);
  std::vector<AgentState> agents;
  agents.reserve(game.num_players);
  for (int i = 0; i < game.num_players; ++i) {
    AgentState agent;
    agent.q = Mat::Zero(game.num_states, game.num_actions[i]);
    agent.pi = initial.pi[i];
    agent.n_sa = CountMat::Zero(game.num_states, game.num_actions[i]);
    agents.push_back(std::move(agent));
  }
  return agents;
}

SharedCounters init_counters(const MarkovGame& game) {
  return SharedCounters{CountVec::Zero(game.num_states)};
}

StepResult learner_step(const MarkovGame& game, std::vector<AgentState>& agents,
                        SharedCounters& counters, const StepSizes& sizes,
                        double theta, const StepContext& ctx, Rng& rng,
                        bool freeze_policy) {
  const int sp = ctx.prev_state;
  counters.n[sp] += 1;

  for (int i = 0; i < game.num_players; ++i) {
    AgentState& agent = agents[i];
    const int ai = ctx.prev_actions[i];
    agent.n_sa(sp, ai) += 1;

    // Both the critic target and the greedy pick read the pre-update tables.
    const double bootstrap = agent.pi.row(ctx.state).dot(agent.q.row(ctx.state));
    const Vec greedy = one_stage_br(agent.q.row(sp).transpose());

    const double alpha = sizes.alpha(agent.n_sa(sp, ai));
    const double target = ctx.prev_rewards[i] + game.gamma * bootstrap;
    agent.q(sp, ai) += alpha * (target - agent.q(sp, ai));

    if (!freeze_policy) {
      const double beta = sizes.beta(counters.n[sp]);
      agent.pi.row(sp) += beta * (greedy.transpose() - agent.pi.row(sp));
    }
  }

  StepResult result;
  result.actions.resize(game.num_players);
  for (int i = 0; i < game.num_players; ++i) {
    const int na = game.num_actions[i];
    const Vec mixed = (1.0 - theta) * agents[i].pi.row(ctx.state).transpose() +
                      Vec::Constant(na, theta / na);
    result.actions[i] = rng.categorical(mixed);
  }
  const int joint = game.joint.encode(result.actions);
  result.rewards.resize(game.num_players);
  for (int i = 0; i < game.num_players; ++i)
    result.rewards[i] = game.rewards[i](ctx.state, joint);
  return result;
}

namespace {

// Post-step structural checks: simplex rows, critic bound, counter
// consistency, and single-entry asynchrony against pre-step snapshots.
void check_step_invariants(const MarkovGame& game,
                           const std::vector<AgentState>& agents,
                           const SharedCounters& counters,
                           const std::vector<Mat>& q_before,
                           const std::vector<Mat>& pi_before,
                           const StepContext& ctx, std::int64_t t,
                           TrajectoryLog& log) {
  auto report = [&](const std::string& what) {
    ++log.violation_count;
    if (log.violations.size() < 20) {
      std::ostringstream os;
      os << "t=" << t << ": " << what;
      log.violations.push_back(os.str());
    }
  };

  const double q_bound = game.value_bound() + 1e-9;
  for (int i = 0; i < game.num_players; ++i) {
    const AgentState& agent = agents[i];
    for (int s = 0; s < game.num_states; ++s) {
      if (std::abs(agent.pi.row(s).sum() - 1.0) > 1e-12 ||
          agent.pi.row(s).minCoeff() < -1e-12)
        report("policy row off the simplex, player " + std::to_string(i) +
               " state " + std::to_string(s));
    }
    if (agent.q.cwiseAbs().maxCoeff() > q_bound)
      report("critic exceeds the value bound, player " + std::to_string(i));

    for (int s = 0; s < game.num_states; ++s) {
      if (agent.n_sa.row(s).sum() != counters.n[s])
        report("counter mismatch, player " + std::to_string(i) + " state " +
               std::to_string(s));
    }

    // Only (s^{t-1}, a_i^{t-1}) may change in q; only row s^{t-1} in pi.
    Mat q_diff = (agent.q - q_before[i]).cwiseAbs();
    q_diff(ctx.prev_state, ctx.prev_actions[i]) = 0.0;
    if (q_diff.maxCoeff() != 0.0)
      report("critic changed outside the visited entry, player " + std::to_string(i));
    Mat pi_diff = (agent.pi - pi_before[i]).cwiseAbs();
    pi_diff.row(ctx.prev_state).setZero();
    if (pi_diff.maxCoeff() != 0.0)
      report("policy changed outside the visited state, player " + std::to_string(i));
  }
}

MetricSample take_metrics(const MarkovGame& game, const std::vector<AgentState>& agents,
                          std::int64_t t, double tau, const Potential* phi,
                          const SolverOptions& opts) {
  MetricSample sample;
  sample.t = t;
  sample.tau = tau;
  sample.policy.pi.reserve(game.num_players);
  for (const AgentState& agent : agents) sample.policy.pi.push_back(agent.pi);
  const NashGapReport gap = nash_gap(game, sample.policy, opts);
  sample.nash_gap = gap.epsilon;
  sample.player_gaps = gap.gaps;
  if (phi) sample.phi_mu = phi->eval_mu(game, sample.policy);
  return sample;
}

}  // namespace

TrajectoryLog run_learning(const MarkovGame& game, const LearnerConfig& config,
                           const Potential* phi, const SolverOptions& opts) {
  if (config.horizon < 0) throw std::invalid_argument("horizon must be >= 0");
  if (!(config.theta >= 0.0 && config.theta <= 1.0))
    throw std::invalid_argument("theta must lie in [0, 1]");
  const StepSizes sizes = make_stepsizes(config.fast_exponent, config.slow_exponent);

  TrajectoryLog log;
  log.seed = config.seed;
  Rng rng(config.seed);

  const PolicyProfile initial =
      config.initial_policy ? *config.initial_policy : uniform_policy(game);
  std::vector<AgentState> agents = init_agents(game, initial);
  SharedCounters counters = init_counters(game);

  // Stage 0: observe s^0 ~ mu, act from the initial policy, observe rewards.
  int state = rng.categorical(game.mu);
  std::vector<int> actions(game.num_players);
  for (int i = 0; i < game.num_players; ++i)
    actions[i] = rng.categorical(agents[i].pi.row(state).transpose());
  const int joint0 = game.joint.encode(actions);
  Vec rewards(game.num_players);
  for (int i = 0; i < game.num_players; ++i)
    rewards[i] = game.rewards[i](state, joint0);

  log.steps.push_back({0, state, actions, rewards});
  double tau = 0.0;
  log.metrics.push_back(take_metrics(game, agents, 0, tau, phi, opts));

  std::vector<Mat> q_before, pi_before;
  for (std::int64_t t = 1; t <= config.horizon; ++t) {
    const int joint = game.joint.encode(actions);
    const int next = rng.categorical(game.transitions.row(game.row(state, joint)));
    StepContext ctx{state, actions, rewards, next};

    if (config.check_invariants) {
      q_before.clear();
      pi_before.clear();
      for (const AgentState& agent : agents) {
        q_before.push_back(agent.q);
        pi_before.push_back(agent.pi);
      }
    }

    StepResult result = learner_step(game, agents, counters, sizes, config.theta,
                                     ctx, rng, config.freeze_policy);
    tau += config.freeze_policy ? 0.0 : sizes.beta(counters.n[ctx.prev_state]);

    if (config.check_invariants)
      check_step_invariants(game, agents, counters, q_before, pi_before, ctx, t, log);

    state = next;
    actions = result.actions;
    rewards = result.rewards;

    const bool metric_due = (config.metric_period > 0 &&
                             t % config.metric_period == 0) ||
                            t == config.horizon;
    // Metric iterates always get a step record so the streamed log can merge
    // the two on one line.
    if (metric_due || (config.record_period > 0 && t % config.record_period == 0))
      log.steps.push_back({t, state, actions, rewards});
    if (metric_due)
      log.metrics.push_back(take_metrics(game, agents, t, tau, phi, opts));
  }
  return log;
}

ThetaBound theta_bound(const MarkovGame& game, double lambda, double big_d) {
  if (lambda <= 0.0) throw std::invalid_argument("lambda must be positive");
  if (big_d <= 0.0) throw std::invalid_argument("D must be positive");
  if (game.r_max == 0.0) return {1.0, true};  // zero rewards: no constraint
  const double one_minus = 1.0 - game.gamma;
  const double denom = game.r_max * (2.0 / std::pow(one_minus, 3) +
                                     4.0 / (big_d * one_minus * one_minus));
  const double value = lambda * std::sqrt(2.0 * game.num_states) / denom;
  if (value >= 1.0) return {1.0, true};
  return {value, false};
}

}  // namespace mnpf
