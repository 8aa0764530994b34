#include "mnpf/game.hpp"

#include "mnpf/rng.hpp"

#include <cmath>
#include <sstream>

namespace mnpf {

namespace {

constexpr double kSimplexTol = 1e-12;

std::string index_str(int s, int a) {
  std::ostringstream os;
  os << "(s=" << s << ", a=" << a << ")";
  return os.str();
}

}  // namespace

void finalize_game(MarkovGame& game) {
  game.joint = JointActionSpace(game.num_actions);
  double r_max = 0.0;
  for (const Mat& r : game.rewards) r_max = std::max(r_max, r.cwiseAbs().maxCoeff());
  game.r_max = r_max;
}

std::vector<std::string> validate_game(const MarkovGame& game) {
  std::vector<std::string> warnings;
  if (game.num_players < 1) throw GameError("game must have at least one player");
  if (game.num_states < 1) throw GameError("game must have at least one state");
  if (static_cast<int>(game.num_actions.size()) != game.num_players)
    throw GameError("actions-per-player list does not match player count");
  for (int i = 0; i < game.num_players; ++i) {
    if (game.num_actions[i] < 1)
      throw GameError("player " + std::to_string(i) + " has no actions");
  }
  if (!(game.gamma >= 0.0 && game.gamma < 1.0))
    throw GameError("discount must lie in [0, 1), got " + std::to_string(game.gamma));

  const int ja = game.joint.size();
  if (static_cast<int>(game.rewards.size()) != game.num_players)
    throw GameError("reward table count does not match player count");
  for (int i = 0; i < game.num_players; ++i) {
    if (game.rewards[i].rows() != game.num_states || game.rewards[i].cols() != ja)
      throw GameError("reward table shape mismatch for player " + std::to_string(i));
  }
  if (game.transitions.rows() != static_cast<Eigen::Index>(game.num_states) * ja ||
      game.transitions.cols() != game.num_states)
    throw GameError("transition table shape mismatch");

  for (int s = 0; s < game.num_states; ++s) {
    for (int a = 0; a < ja; ++a) {
      const auto row = game.transitions.row(game.row(s, a));
      if (row.minCoeff() < 0.0)
        throw GameError("negative transition probability at " + index_str(s, a));
      if (std::abs(row.sum() - 1.0) > kSimplexTol)
        throw GameError("transition row at " + index_str(s, a) + " sums to " +
                        std::to_string(row.sum()) + ", expected 1");
    }
  }

  if (game.mu.size() != game.num_states)
    throw GameError("initial distribution length does not match state count");
  if (game.mu.minCoeff() < 0.0) throw GameError("negative initial probability");
  if (std::abs(game.mu.sum() - 1.0) > kSimplexTol)
    throw GameError("initial distribution sums to " + std::to_string(game.mu.sum()));
  for (int s = 0; s < game.num_states; ++s) {
    if (game.mu[s] == 0.0)
      warnings.push_back("mu(" + std::to_string(s) +
                         ") = 0: full support is required by the convergence analysis");
  }

  double r_max = 0.0;
  for (const Mat& r : game.rewards) r_max = std::max(r_max, r.cwiseAbs().maxCoeff());
  if (game.r_max != r_max) throw GameError("cached r_max is stale; call finalize_game");
  return warnings;
}

double PolicyProfile::distance(const PolicyProfile& a, const PolicyProfile& b) {
  double sq = 0.0;
  for (std::size_t i = 0; i < a.pi.size(); ++i) sq += (a.pi[i] - b.pi[i]).squaredNorm();
  return std::sqrt(sq);
}

void validate_profile(const MarkovGame& game, const PolicyProfile& profile) {
  if (profile.num_players() != game.num_players)
    throw GameError("profile player count mismatch");
  for (int i = 0; i < game.num_players; ++i) {
    const Mat& p = profile.pi[i];
    if (p.rows() != game.num_states || p.cols() != game.num_actions[i])
      throw GameError("policy shape mismatch for player " + std::to_string(i));
    for (int s = 0; s < game.num_states; ++s) {
      if (p.row(s).minCoeff() < -kSimplexTol)
        throw GameError("negative policy entry, player " + std::to_string(i) +
                        " state " + std::to_string(s));
      if (std::abs(p.row(s).sum() - 1.0) > kSimplexTol)
        throw GameError("policy row off the simplex, player " + std::to_string(i) +
                        " state " + std::to_string(s));
    }
  }
}

PolicyProfile uniform_policy(const MarkovGame& game) {
  PolicyProfile profile;
  profile.pi.reserve(game.num_players);
  for (int i = 0; i < game.num_players; ++i) {
    profile.pi.push_back(Mat::Constant(game.num_states, game.num_actions[i],
                                       1.0 / game.num_actions[i]));
  }
  return profile;
}

PolicyProfile deterministic_policy(const MarkovGame& game,
                                   const std::vector<std::vector<int>>& actions) {
  PolicyProfile profile;
  profile.pi.reserve(game.num_players);
  for (int i = 0; i < game.num_players; ++i) {
    Mat p = Mat::Zero(game.num_states, game.num_actions[i]);
    for (int s = 0; s < game.num_states; ++s) p(s, actions[i][s]) = 1.0;
    profile.pi.push_back(std::move(p));
  }
  return profile;
}

PolicyProfile mix_with_uniform(const MarkovGame& game, const PolicyProfile& profile,
                               double theta, const std::vector<int>& players) {
  if (!(theta >= 0.0 && theta <= 1.0))
    throw GameError("mixing weight must lie in [0, 1], got " + std::to_string(theta));
  PolicyProfile mixed = profile;
  for (int i : players) {
    const double u = theta / game.num_actions[i];
    mixed.pi[i] = (1.0 - theta) * profile.pi[i] + Mat::Constant(profile.pi[i].rows(),
                                                                profile.pi[i].cols(), u);
  }
  return mixed;
}

PolicyProfile mix_with_uniform(const MarkovGame& game, const PolicyProfile& profile,
                               double theta) {
  std::vector<int> all(game.num_players);
  for (int i = 0; i < game.num_players; ++i) all[i] = i;
  return mix_with_uniform(game, profile, theta, all);
}

PolicyProfile mix_opponents(const MarkovGame& game, const PolicyProfile& profile,
                            int player, double theta) {
  std::vector<int> others;
  others.reserve(game.num_players - 1);
  for (int j = 0; j < game.num_players; ++j) {
    if (j != player) others.push_back(j);
  }
  return mix_with_uniform(game, profile, theta, others);
}

Vec joint_weights(const MarkovGame& game, const PolicyProfile& profile, int s) {
  const int ja = game.joint.size();
  Vec w = Vec::Ones(ja);
  for (int a = 0; a < ja; ++a) {
    for (int i = 0; i < game.num_players; ++i) {
      w[a] *= profile.pi[i](s, game.joint.digit(a, i));
    }
  }
  return w;
}

Vec opponent_weights(const MarkovGame& game, const PolicyProfile& profile,
                     int player, int s) {
  const int ja = game.joint.size();
  Vec w = Vec::Ones(ja);
  for (int a = 0; a < ja; ++a) {
    for (int j = 0; j < game.num_players; ++j) {
      if (j == player) continue;
      w[a] *= profile.pi[j](s, game.joint.digit(a, j));
    }
  }
  return w;
}

namespace {

// All length-`slots` nonnegative integer vectors summing to `total`.
void compositions(int total, int slots, std::vector<int>& current,
                  std::vector<std::vector<int>>& out) {
  if (slots == 1) {
    current.push_back(total);
    out.push_back(current);
    current.pop_back();
    return;
  }
  for (int k = 0; k <= total; ++k) {
    current.push_back(k);
    compositions(total - k, slots - 1, current, out);
    current.pop_back();
  }
}

}  // namespace

std::vector<PolicyProfile> simplex_grid(const MarkovGame& game, double spacing,
                                        std::size_t max_points) {
  const int steps = static_cast<int>(std::lround(1.0 / spacing));
  if (steps < 1 || std::abs(steps * spacing - 1.0) > 1e-9)
    throw GameError("grid spacing must be 1/k for a positive integer k");

  // Lattice points of each player's per-state simplex.
  std::vector<std::vector<Vec>> rows_per_player(game.num_players);
  for (int i = 0; i < game.num_players; ++i) {
    std::vector<std::vector<int>> comps;
    std::vector<int> scratch;
    compositions(steps, game.num_actions[i], scratch, comps);
    for (const auto& c : comps) {
      Vec p(game.num_actions[i]);
      for (int a = 0; a < game.num_actions[i]; ++a)
        p[a] = static_cast<double>(c[a]) / steps;
      rows_per_player[i].push_back(std::move(p));
    }
  }

  // One slot per (player, state) pair; odometer over the Cartesian product.
  std::vector<std::pair<int, int>> slots;
  std::size_t total = 1;
  for (int i = 0; i < game.num_players; ++i) {
    for (int s = 0; s < game.num_states; ++s) {
      slots.emplace_back(i, s);
      total *= rows_per_player[i].size();
      if (total > max_points)
        throw GameError("policy grid exceeds " + std::to_string(max_points) +
                        " points; coarsen the spacing");
    }
  }

  std::vector<PolicyProfile> grid;
  grid.reserve(total);
  std::vector<std::size_t> idx(slots.size(), 0);
  while (true) {
    PolicyProfile profile = uniform_policy(game);
    for (std::size_t k = 0; k < slots.size(); ++k) {
      const auto [i, s] = slots[k];
      profile.pi[i].row(s) = rows_per_player[i][idx[k]].transpose();
    }
    grid.push_back(std::move(profile));
    std::size_t k = 0;
    for (; k < slots.size(); ++k) {
      if (++idx[k] < rows_per_player[slots[k].first].size()) break;
      idx[k] = 0;
    }
    if (k == slots.size()) break;
  }
  return grid;
}

namespace {

MarkovGame generate(std::uint64_t seed, int num_states, int num_players,
                    const std::vector<int>& num_actions, double gamma, bool team) {
  if (num_states < 1 || num_players < 1)
    throw GameError("state and player counts must be >= 1");
  for (int n : num_actions) {
    if (n < 1) throw GameError("action counts must be >= 1");
  }

  MarkovGame game;
  game.num_players = num_players;
  game.num_states = num_states;
  game.num_actions = num_actions;
  game.gamma = gamma;
  game.joint = JointActionSpace(num_actions);
  const int ja = game.joint.size();

  Rng rng(seed);
  if (team) {
    Mat shared(num_states, ja);
    for (int s = 0; s < num_states; ++s)
      for (int a = 0; a < ja; ++a) shared(s, a) = rng.uniform(-1.0, 1.0);
    game.rewards.assign(num_players, shared);
  } else {
    for (int i = 0; i < num_players; ++i) {
      Mat r(num_states, ja);
      for (int s = 0; s < num_states; ++s)
        for (int a = 0; a < ja; ++a) r(s, a) = rng.uniform(-1.0, 1.0);
      game.rewards.push_back(std::move(r));
    }
  }

  game.transitions.resize(static_cast<Eigen::Index>(num_states) * ja, num_states);
  for (int s = 0; s < num_states; ++s)
    for (int a = 0; a < ja; ++a)
      game.transitions.row(game.row(s, a)) = rng.dirichlet(num_states).transpose();

  game.mu = Vec::Constant(num_states, 1.0 / num_states);
  finalize_game(game);
  validate_game(game);
  return game;
}

}  // namespace

MarkovGame make_team_game(std::uint64_t seed, int num_states, int num_players,
                          int num_actions, double gamma) {
  MarkovGame game = generate(seed, num_states, num_players,
                             std::vector<int>(num_players, num_actions), gamma, true);
  game.name = "team";
  return game;
}

MarkovGame make_random_game(std::uint64_t seed, int num_states, int num_players,
                            const std::vector<int>& num_actions, double gamma) {
  MarkovGame game = generate(seed, num_states, num_players, num_actions, gamma, false);
  game.name = "random";
  return game;
}

MarkovGame make_dominant_game(std::uint64_t seed, int num_states, int num_players,
                              int num_actions, double gamma) {
  MarkovGame game = generate(seed, num_states, num_players,
                             std::vector<int>(num_players, num_actions), gamma, false);
  // Overwrite rewards: r_i(s, a) = f_i(a_i), strictly decreasing in the action
  // index, so action 0 dominates in every state regardless of transitions.
  Rng rng(seed ^ 0x5eedULL);
  const int ja = game.joint.size();
  for (int i = 0; i < num_players; ++i) {
    Vec f(num_actions);
    for (int a = 0; a < num_actions; ++a)
      f[a] = 1.0 - static_cast<double>(a) / num_actions - 0.1 * rng.uniform() * a;
    for (int s = 0; s < game.num_states; ++s)
      for (int a = 0; a < ja; ++a) game.rewards[i](s, a) = f[game.joint.digit(a, i)];
  }
  finalize_game(game);
  validate_game(game);
  game.name = "dominant";
  return game;
}

}  // namespace mnpf
