#include "oracles.hpp"

#include <cmath>

namespace mnpf::testing {

MarkovGame single_state_game() {
  MarkovGame game;
  game.num_players = 1;
  game.num_states = 1;
  game.num_actions = {2};
  game.gamma = 0.5;
  game.mu = Vec::Ones(1);
  Mat r(1, 2);
  r << 1.0, 0.0;
  game.rewards = {r};
  game.transitions = Mat::Ones(2, 1);
  game.name = "single-state";
  finalize_game(game);
  validate_game(game);
  return game;
}

McEstimate mc_policy_value(const MarkovGame& game, const PolicyProfile& profile,
                           long episodes, std::uint64_t seed) {
  const int horizon =
      game.gamma > 0.0
          ? static_cast<int>(std::ceil(std::log(1e-8) / std::log(game.gamma)))
          : 1;
  Rng rng(seed);
  Vec sum = Vec::Zero(game.num_players);
  Vec sum_sq = Vec::Zero(game.num_players);
  std::vector<int> actions(game.num_players);
  for (long e = 0; e < episodes; ++e) {
    int state = rng.categorical(game.mu);
    Vec ret = Vec::Zero(game.num_players);
    double discount = 1.0;
    for (int k = 0; k < horizon; ++k) {
      for (int i = 0; i < game.num_players; ++i)
        actions[i] = rng.categorical(profile.pi[i].row(state).transpose());
      const int joint = game.joint.encode(actions);
      for (int i = 0; i < game.num_players; ++i)
        ret[i] += discount * game.rewards[i](state, joint);
      discount *= game.gamma;
      state = rng.categorical(game.transitions.row(game.row(state, joint)));
    }
    sum += ret;
    sum_sq += ret.cwiseProduct(ret);
  }
  McEstimate est;
  est.mean = sum / episodes;
  est.std_error.resize(game.num_players);
  for (int i = 0; i < game.num_players; ++i) {
    const double var =
        std::max(0.0, sum_sq[i] / episodes - est.mean[i] * est.mean[i]);
    est.std_error[i] = std::sqrt(var / episodes);
  }
  est.tail_bias = std::pow(game.gamma, horizon) * game.r_max /
                  std::max(1.0 - game.gamma, 1e-12);
  return est;
}

Vec series_occupancy(const MarkovGame& game, const PolicyProfile& profile) {
  const Mat p = policy_transition(game, profile);
  int terms = 1;
  if (game.gamma > 0.0)
    terms = static_cast<int>(std::ceil(std::log(1e-10) / std::log(game.gamma))) + 1;
  Vec weight = game.mu;  // mu' P^k, accumulated as a column vector
  Vec d = Vec::Zero(game.num_states);
  double discount = 1.0 - game.gamma;
  for (int k = 0; k < terms; ++k) {
    d += discount * weight;
    weight = p.transpose() * weight;
    discount *= game.gamma;
  }
  return d;
}

EnumeratedBest enumerate_best_response(const MarkovGame& game, int player,
                                       const PolicyProfile& profile) {
  EnumeratedBest best;
  best.value = -std::numeric_limits<double>::infinity();
  std::vector<int> actions(game.num_states, 0);
  while (true) {
    PolicyProfile candidate = profile;
    Mat det = Mat::Zero(game.num_states, game.num_actions[player]);
    for (int s = 0; s < game.num_states; ++s) det(s, actions[s]) = 1.0;
    candidate.pi[player] = det;
    const double value = policy_value(game, candidate).v_mu[player];
    if (value > best.value) {
      best.value = value;
      best.actions = actions;
    }
    int s = 0;
    for (; s < game.num_states; ++s) {
      if (++actions[s] < game.num_actions[player]) break;
      actions[s] = 0;
    }
    if (s == game.num_states) break;
  }
  return best;
}

double enumerated_nash_gap(const MarkovGame& game, const PolicyProfile& profile) {
  const ValueTable values = policy_value(game, profile);
  double gap = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < game.num_players; ++i) {
    gap = std::max(gap,
                   enumerate_best_response(game, i, profile).value - values.v_mu[i]);
  }
  return gap;
}

std::vector<PolicyProfile> enumerate_pure_equilibria(const MarkovGame& game,
                                                     double tol) {
  std::vector<PolicyProfile> equilibria;
  std::vector<std::vector<int>> actions(game.num_players,
                                        std::vector<int>(game.num_states, 0));
  while (true) {
    const PolicyProfile profile = deterministic_policy(game, actions);
    if (nash_gap(game, profile).epsilon <= tol) equilibria.push_back(profile);
    int i = 0, s = 0;
    bool carried = true;
    for (i = 0; i < game.num_players && carried; ++i) {
      for (s = 0; s < game.num_states && carried; ++s) {
        if (++actions[i][s] < game.num_actions[i]) {
          carried = false;
        } else {
          actions[i][s] = 0;
        }
      }
    }
    if (carried) break;
  }
  return equilibria;
}

MarkovGame random_desk_game(Rng& rng) {
  const int num_states = 1 + rng.uniform_int(4);
  const int num_players = 1 + rng.uniform_int(3);
  std::vector<int> num_actions(num_players);
  for (int i = 0; i < num_players; ++i) num_actions[i] = 1 + rng.uniform_int(3);
  const double gammas[] = {0.3, 0.7, 0.9};
  const double gamma = gammas[rng.uniform_int(3)];
  return make_random_game(rng.raw(), num_states, num_players, num_actions, gamma);
}

}  // namespace mnpf::testing
