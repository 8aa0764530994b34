#include "mnpf/solver.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mnpf {

namespace {

// Induced single-agent MDP for `player` with the opponents frozen:
// reward R(s, a_i) and transition T(s' | s, a_i), both opponent-averaged.
struct InducedMdp {
  Mat reward;      // num_states x |A_i|
  Mat transition;  // (num_states * |A_i|) x num_states
};

InducedMdp induced_mdp(const MarkovGame& game, const PolicyProfile& profile,
                       int player) {
  const int na = game.num_actions[player];
  const int ja = game.joint.size();
  InducedMdp mdp;
  mdp.reward = Mat::Zero(game.num_states, na);
  mdp.transition = Mat::Zero(static_cast<Eigen::Index>(game.num_states) * na,
                             game.num_states);
  for (int s = 0; s < game.num_states; ++s) {
    const Vec w = opponent_weights(game, profile, player, s);
    for (int a = 0; a < ja; ++a) {
      const int ai = game.joint.digit(a, player);
      mdp.reward(s, ai) += w[a] * game.rewards[player](s, a);
      mdp.transition.row(s * na + ai) += w[a] * game.transitions.row(game.row(s, a));
    }
  }
  return mdp;
}

// Exact evaluation of a deterministic policy in an induced MDP.
Vec evaluate_deterministic(const MarkovGame& game, const InducedMdp& mdp,
                           const std::vector<int>& actions) {
  const int n = game.num_states;
  const int na = static_cast<int>(mdp.reward.cols());
  Mat p(n, n);
  Vec r(n);
  for (int s = 0; s < n; ++s) {
    p.row(s) = mdp.transition.row(s * na + actions[s]);
    r[s] = mdp.reward(s, actions[s]);
  }
  Mat a = Mat::Identity(n, n) - game.gamma * p;
  return a.partialPivLu().solve(r);
}

}  // namespace

Mat policy_transition(const MarkovGame& game, const PolicyProfile& profile) {
  const int n = game.num_states;
  const int ja = game.joint.size();
  Mat p = Mat::Zero(n, n);
  for (int s = 0; s < n; ++s) {
    const Vec w = joint_weights(game, profile, s);
    p.row(s) = w.transpose() * game.transitions.middleRows(s * ja, ja);
  }
  return p;
}

Vec policy_reward(const MarkovGame& game, const PolicyProfile& profile, int player) {
  Vec r(game.num_states);
  for (int s = 0; s < game.num_states; ++s)
    r[s] = joint_weights(game, profile, s).dot(game.rewards[player].row(s));
  return r;
}

ValueTable policy_value(const MarkovGame& game, const PolicyProfile& profile) {
  const int n = game.num_states;
  Mat a = Mat::Identity(n, n) - game.gamma * policy_transition(game, profile);
  const auto lu = a.partialPivLu();  // one factorization shared by all players
  ValueTable table;
  table.v.resize(game.num_players, n);
  table.v_mu.resize(game.num_players);
  for (int i = 0; i < game.num_players; ++i) {
    table.v.row(i) = lu.solve(policy_reward(game, profile, i)).transpose();
    table.v_mu[i] = game.mu.dot(table.v.row(i));
  }
  return table;
}

Vec player_state_values(const MarkovGame& game, const PolicyProfile& profile,
                        int player) {
  const int n = game.num_states;
  Mat a = Mat::Identity(n, n) - game.gamma * policy_transition(game, profile);
  return a.partialPivLu().solve(policy_reward(game, profile, player));
}

QTable q_function(const MarkovGame& game, const PolicyProfile& profile,
                  const ValueTable& values) {
  const int ja = game.joint.size();
  QTable table;
  table.q.reserve(game.num_players);
  for (int i = 0; i < game.num_players; ++i) {
    Mat q = Mat::Zero(game.num_states, game.num_actions[i]);
    for (int s = 0; s < game.num_states; ++s) {
      const Vec w = opponent_weights(game, profile, i, s);
      for (int a = 0; a < ja; ++a) {
        const double z = game.rewards[i](s, a) +
                         game.gamma * game.transitions.row(game.row(s, a))
                                          .dot(values.v.row(i));
        q(s, game.joint.digit(a, i)) += w[a] * z;
      }
    }
    table.q.push_back(std::move(q));
  }
  return table;
}

QTable q_function(const MarkovGame& game, const PolicyProfile& profile) {
  return q_function(game, profile, policy_value(game, profile));
}

Mat player_q_values(const MarkovGame& game, const PolicyProfile& profile, int player) {
  const Vec v = player_state_values(game, profile, player);
  const int ja = game.joint.size();
  Mat q = Mat::Zero(game.num_states, game.num_actions[player]);
  for (int s = 0; s < game.num_states; ++s) {
    const Vec w = opponent_weights(game, profile, player, s);
    for (int a = 0; a < ja; ++a) {
      const double z = game.rewards[player](s, a) +
                       game.gamma * game.transitions.row(game.row(s, a)).dot(v);
      q(s, game.joint.digit(a, player)) += w[a] * z;
    }
  }
  return q;
}

OccupancyVector occupancy(const MarkovGame& game, const PolicyProfile& profile) {
  const int n = game.num_states;
  Mat a = Mat::Identity(n, n) - game.gamma * policy_transition(game, profile).transpose();
  OccupancyVector result;
  result.d = a.partialPivLu().solve((1.0 - game.gamma) * game.mu);
  return result;
}

Vec one_stage_br(const Vec& q_slice, TieRule) {
  Vec p = Vec::Zero(q_slice.size());
  p[argmax_lowest(q_slice)] = 1.0;
  return p;
}

BestResponse best_response(const MarkovGame& game, int player,
                           const PolicyProfile& profile, const SolverOptions& opts) {
  const InducedMdp mdp = induced_mdp(game, profile, player);
  const int n = game.num_states;
  const int na = game.num_actions[player];

  // Sup-norm stopping rule guaranteeing value_tol optimality error; a single
  // sweep is already exact when gamma = 0.
  const double stop =
      game.gamma > 0.0 ? opts.value_tol * (1.0 - game.gamma) / (2.0 * game.gamma)
                       : std::numeric_limits<double>::infinity();

  Vec v = Vec::Zero(n);
  std::vector<int> greedy(n, 0);
  while (true) {
    Vec next(n);
    for (int s = 0; s < n; ++s) {
      double best = -std::numeric_limits<double>::infinity();
      int best_a = 0;
      for (int a = 0; a < na; ++a) {
        const double q = mdp.reward(s, a) +
                         game.gamma * mdp.transition.row(s * na + a).dot(v);
        if (q > best) {
          best = q;
          best_a = a;
        }
      }
      next[s] = best;
      greedy[s] = best_a;
    }
    const double change = (next - v).cwiseAbs().maxCoeff();
    v = next;
    if (change <= stop) break;
  }

  BestResponse br;
  br.state_values = evaluate_deterministic(game, mdp, greedy);
  br.value = game.mu.dot(br.state_values);
  br.policy = Mat::Zero(n, na);
  for (int s = 0; s < n; ++s) br.policy(s, greedy[s]) = 1.0;
  return br;
}

NashGapReport nash_gap(const MarkovGame& game, const PolicyProfile& profile,
                       const SolverOptions& opts) {
  const ValueTable values = policy_value(game, profile);
  NashGapReport report;
  report.gaps.resize(game.num_players);
  report.best_responses.reserve(game.num_players);
  for (int i = 0; i < game.num_players; ++i) {
    BestResponse br = best_response(game, i, profile, opts);
    report.gaps[i] = br.value - values.v_mu[i];
    report.best_responses.push_back(std::move(br.policy));
  }
  report.epsilon = report.gaps.maxCoeff();
  return report;
}

PolicyProfile random_policy(const MarkovGame& game, Rng& rng) {
  PolicyProfile profile;
  profile.pi.reserve(game.num_players);
  for (int i = 0; i < game.num_players; ++i) {
    Mat p(game.num_states, game.num_actions[i]);
    for (int s = 0; s < game.num_states; ++s)
      p.row(s) = rng.dirichlet(game.num_actions[i]).transpose();
    profile.pi.push_back(std::move(p));
  }
  return profile;
}

PerturbationReport perturbation_bounds_check(const MarkovGame& game, int player,
                                             const PolicyProfile& profile, double theta,
                                             long extra_samples, std::uint64_t seed) {
  PerturbationReport report;
  report.theta = theta;
  if (game.num_players < 2) {
    report.applicable = false;
    return report;
  }
  if (!(theta >= 0.0 && theta <= 1.0))
    throw std::invalid_argument("theta must lie in [0, 1]");
  report.bound = 2.0 * theta * game.r_max / ((1.0 - game.gamma) * (1.0 - game.gamma));

  Rng rng(seed);
  auto measure = [&](const PolicyProfile& base) {
    const PolicyProfile mixed = mix_opponents(game, base, player, theta);
    const Vec v0 = player_state_values(game, base, player);
    const Vec v1 = player_state_values(game, mixed, player);
    report.v_deviation = std::max(report.v_deviation,
                                  (v0 - v1).cwiseAbs().maxCoeff());
    const Mat q0 = player_q_values(game, base, player);
    // Q_i(s, a_i; pi_i, mixed opponents): mixed everywhere the opponents act.
    const Mat q1 = player_q_values(game, mixed, player);
    report.q_deviation = std::max(report.q_deviation,
                                  (q0 - q1).cwiseAbs().maxCoeff());
    ++report.profiles_checked;
  };

  measure(profile);
  for (long k = 0; k < extra_samples; ++k) measure(random_policy(game, rng));

  report.pass = report.v_deviation <= report.bound + 1e-9 &&
                report.q_deviation <= report.bound + 1e-9;
  return report;
}

}  // namespace mnpf
