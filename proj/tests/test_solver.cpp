#include "mnpf/solver.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace mnpf;

TEST_CASE("policy_value: geometric series on the one-state game") {
  const MarkovGame game = testing::single_state_game();
  PolicyProfile profile = uniform_policy(game);
  profile.pi[0] << 1.0, 0.0;  // always the rewarding action
  const ValueTable values = policy_value(game, profile);
  CHECK(values.v(0, 0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(values.v_mu[0] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("policy_value: gamma = 0 is the one-stage reward") {
  Rng rng(17);
  const MarkovGame game = make_random_game(rng.raw(), 3, 2, {2, 3}, 0.0);
  const PolicyProfile profile = random_policy(game, rng);
  const ValueTable values = policy_value(game, profile);
  for (int i = 0; i < game.num_players; ++i) {
    const Vec r = policy_reward(game, profile, i);
    CHECK((values.v.row(i).transpose() - r).cwiseAbs().maxCoeff() <= 1e-14);
  }
}

TEST_CASE("policy_value matches a Monte-Carlo rollout oracle") {
  Rng rng(21);
  const MarkovGame game = make_random_game(rng.raw(), 3, 2, {2, 2}, 0.7);
  const PolicyProfile profile = random_policy(game, rng);
  const ValueTable values = policy_value(game, profile);
  const auto mc = testing::mc_policy_value(game, profile, 100000, 77);
  for (int i = 0; i < game.num_players; ++i) {
    CHECK(std::abs(mc.mean[i] - values.v_mu[i]) <=
          3.0 * mc.std_error[i] + mc.tail_bias);
  }
}

TEST_CASE("policy_value satisfies the Bellman identity on random games") {
  Rng rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const MarkovGame game = testing::random_desk_game(rng);
    const PolicyProfile profile = random_policy(game, rng);
    const ValueTable values = policy_value(game, profile);
    const Mat p = policy_transition(game, profile);
    for (int i = 0; i < game.num_players; ++i) {
      const Vec v = values.v.row(i).transpose();
      const Vec residual = policy_reward(game, profile, i) + game.gamma * p * v - v;
      CHECK(residual.cwiseAbs().maxCoeff() <= 1e-10);
    }
    // Values stay inside the discounted reward bound.
    CHECK(values.v.cwiseAbs().maxCoeff() <= game.value_bound() + 1e-9);
  }
}

TEST_CASE("q_function: hand values on the one-state game") {
  const MarkovGame game = testing::single_state_game();
  PolicyProfile profile = uniform_policy(game);
  profile.pi[0] << 1.0, 0.0;
  const QTable q = q_function(game, profile);
  CHECK(q.q[0](0, 0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(q.q[0](0, 1) == doctest::Approx(1.0).epsilon(1e-12));  // 0 + 0.5 * 2
}

TEST_CASE("q_function: gamma = 0 reduces to the opponent-averaged reward") {
  Rng rng(41);
  const MarkovGame game = make_random_game(rng.raw(), 2, 2, {2, 2}, 0.0);
  const PolicyProfile profile = random_policy(game, rng);
  const QTable q = q_function(game, profile);
  for (int i = 0; i < game.num_players; ++i) {
    for (int s = 0; s < game.num_states; ++s) {
      const Vec w = opponent_weights(game, profile, i, s);
      Vec expected = Vec::Zero(game.num_actions[i]);
      for (int a = 0; a < game.joint_actions(); ++a)
        expected[game.joint.digit(a, i)] += w[a] * game.rewards[i](s, a);
      CHECK((q.q[i].row(s).transpose() - expected).cwiseAbs().maxCoeff() <= 1e-14);
    }
  }
}

TEST_CASE("q_function is consistent with policy_value under the policy") {
  Rng rng(43);
  for (int trial = 0; trial < 30; ++trial) {
    const MarkovGame game = testing::random_desk_game(rng);
    const PolicyProfile profile = random_policy(game, rng);
    const ValueTable values = policy_value(game, profile);
    const QTable q = q_function(game, profile, values);
    for (int i = 0; i < game.num_players; ++i) {
      for (int s = 0; s < game.num_states; ++s) {
        const double mixed = profile.pi[i].row(s).dot(q.q[i].row(s));
        CHECK(std::abs(mixed - values.v(i, s)) <= 1e-9);
      }
      CHECK(q.q[i].cwiseAbs().maxCoeff() <= game.value_bound() + 1e-9);
    }
  }
}

TEST_CASE("occupancy: single state and myopic limits") {
  const MarkovGame one = testing::single_state_game();
  CHECK(occupancy(one, uniform_policy(one)).d[0] == doctest::Approx(1.0));

  Rng rng(53);
  const MarkovGame myopic = make_random_game(rng.raw(), 3, 2, {2, 2}, 0.0);
  const PolicyProfile profile = random_policy(myopic, rng);
  const Vec d = occupancy(myopic, profile).d;
  CHECK((d - myopic.mu).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("occupancy matches the truncated-series oracle") {
  Rng rng(59);
  for (int trial = 0; trial < 20; ++trial) {
    const MarkovGame game = testing::random_desk_game(rng);
    const PolicyProfile profile = random_policy(game, rng);
    const Vec d = occupancy(game, profile).d;
    const Vec series = testing::series_occupancy(game, profile);
    CHECK((d - series).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK(std::abs(d.sum() - 1.0) <= 1e-9);
    // d(s) >= (1-gamma) mu(s): the k = 0 term alone.
    for (int s = 0; s < game.num_states; ++s)
      CHECK(d[s] >= (1.0 - game.gamma) * game.mu[s] - 1e-9);
  }
}

TEST_CASE("one_stage_br picks the lowest-index maximizing vertex") {
  Vec q(2);
  q << 1.0, 0.0;
  Vec br = one_stage_br(q);
  CHECK(br[0] == 1.0);
  CHECK(br[1] == 0.0);

  q << 1.0, 1.0;  // tie: lowest index wins
  br = one_stage_br(q);
  CHECK(br[0] == 1.0);
  CHECK(br[1] == 0.0);

  Vec q3(3);
  q3 << 0.0, 2.0, 2.0;
  br = one_stage_br(q3);
  CHECK(br[0] == 0.0);
  CHECK(br[1] == 1.0);
  CHECK(br[2] == 0.0);
}

TEST_CASE("best_response: dominant action on the one-state game") {
  const MarkovGame game = testing::single_state_game();
  const BestResponse br = best_response(game, 0, uniform_policy(game));
  CHECK(br.policy(0, 0) == 1.0);
  CHECK(br.value == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("best_response: constant rewards give c/(1-gamma)") {
  MarkovGame game = make_random_game(61, 3, 2, {2, 2}, 0.6);
  const double c = 0.25;
  game.rewards[0].setConstant(c);
  finalize_game(game);
  Rng rng(62);
  const BestResponse br = best_response(game, 0, random_policy(game, rng));
  CHECK(br.value == doctest::Approx(c / (1.0 - game.gamma)).epsilon(1e-10));
  for (int s = 0; s < game.num_states; ++s)
    CHECK(br.policy(s, 0) == 1.0);  // lowest-index among all-optimal actions
}

TEST_CASE("best_response matches deterministic-policy enumeration") {
  Rng rng(67);
  for (int trial = 0; trial < 15; ++trial) {
    const MarkovGame game = testing::random_desk_game(rng);
    const PolicyProfile profile = random_policy(game, rng);
    for (int i = 0; i < game.num_players; ++i) {
      const BestResponse br = best_response(game, i, profile);
      const auto enumerated = testing::enumerate_best_response(game, i, profile);
      CHECK(std::abs(br.value - enumerated.value) <= 1e-8);
    }
  }
}

TEST_CASE("best_response dominates random alternative policies") {
  Rng rng(71);
  for (int trial = 0; trial < 3; ++trial) {
    const MarkovGame game = testing::random_desk_game(rng);
    const PolicyProfile profile = random_policy(game, rng);
    for (int i = 0; i < game.num_players; ++i) {
      const BestResponse br = best_response(game, i, profile);
      for (int alt = 0; alt < 100; ++alt) {
        PolicyProfile deviated = profile;
        Mat p(game.num_states, game.num_actions[i]);
        for (int s = 0; s < game.num_states; ++s)
          p.row(s) = rng.dirichlet(game.num_actions[i]).transpose();
        deviated.pi[i] = p;
        CHECK(br.value >= policy_value(game, deviated).v_mu[i] - 1e-8);
      }
    }
  }
}

TEST_CASE("nash_gap: hand value and equilibrium certification") {
  const MarkovGame game = testing::single_state_game();
  PolicyProfile pessimal = uniform_policy(game);
  pessimal.pi[0] << 0.0, 1.0;
  const NashGapReport report = nash_gap(game, pessimal);
  CHECK(report.epsilon == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(report.gaps[0] == doctest::Approx(2.0).epsilon(1e-12));

  const MarkovGame dominant = make_dominant_game(5, 2, 2, 2);
  const PolicyProfile ne =
      deterministic_policy(dominant, {{0, 0}, {0, 0}});  // action 0 dominates
  CHECK(nash_gap(dominant, ne).epsilon <= 1e-8);
  CHECK(nash_gap(dominant, ne).within(0.0));
}

TEST_CASE("nash_gap agrees with the enumeration oracle and is near-nonnegative") {
  Rng rng(73);
  for (int trial = 0; trial < 12; ++trial) {
    const MarkovGame game = testing::random_desk_game(rng);
    const PolicyProfile profile = random_policy(game, rng);
    const NashGapReport report = nash_gap(game, profile);
    CHECK(report.epsilon >= -1e-9);
    CHECK(report.epsilon ==
          doctest::Approx(testing::enumerated_nash_gap(game, profile)).epsilon(1e-8));
  }
}

TEST_CASE("perturbation bound: zero mixing is exact and uniform is a fixed point") {
  const MarkovGame game = make_random_game(79, 2, 2, {2, 2}, 0.5);
  Rng rng(80);
  const PolicyProfile profile = random_policy(game, rng);

  const PerturbationReport at_zero = perturbation_bounds_check(game, 0, profile, 0.0);
  CHECK(at_zero.v_deviation == 0.0);
  CHECK(at_zero.q_deviation == 0.0);
  CHECK(at_zero.bound == 0.0);

  for (double theta : {0.1, 0.5, 1.0}) {
    const PerturbationReport report =
        perturbation_bounds_check(game, 0, uniform_policy(game), theta);
    CHECK(report.v_deviation <= 1e-12);
    CHECK(report.q_deviation <= 1e-12);
  }
}

TEST_CASE("perturbation bound: 2-player game with r_max = 1, theta = 0.1") {
  MarkovGame game = make_random_game(83, 3, 2, {2, 2}, 0.5);
  for (Mat& r : game.rewards) r /= game.r_max;  // force r_max = 1 exactly
  finalize_game(game);
  REQUIRE(game.r_max == 1.0);

  Rng rng(84);
  const PerturbationReport report =
      perturbation_bounds_check(game, 1, random_policy(game, rng), 0.1, 10, 85);
  CHECK(report.bound == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(report.v_deviation <= report.bound);
  CHECK(report.q_deviation <= report.bound);
  CHECK(report.pass);
}

TEST_CASE("perturbation bound: single-player games are not applicable") {
  const MarkovGame game = testing::single_state_game();
  const PerturbationReport report =
      perturbation_bounds_check(game, 0, uniform_policy(game), 0.2);
  CHECK_FALSE(report.applicable);
}

TEST_CASE("value/Q deviation bound holds on random (game, pi, theta) triples") {
  Rng rng(89);
  int checked = 0;
  while (checked < 50) {
    const MarkovGame game = testing::random_desk_game(rng);
    if (game.num_players < 2) continue;
    const PolicyProfile profile = random_policy(game, rng);
    const double thetas[] = {0.05, 0.1, 0.3};
    const double theta = thetas[rng.uniform_int(3)];
    const int player = rng.uniform_int(game.num_players);
    const PerturbationReport report =
        perturbation_bounds_check(game, player, profile, theta);
    CHECK(report.v_deviation <= report.bound + 1e-9);
    CHECK(report.q_deviation <= report.bound + 1e-9);
    ++checked;
  }
}
