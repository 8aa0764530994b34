#include "mnpf/game.hpp"
#include "mnpf/game_io.hpp"
#include "mnpf/rng.hpp"

#include "oracles.hpp"

#include <doctest.h>

using namespace mnpf;
using nlohmann::json;

namespace {

json smallest_doc() {
  return json{{"name", "tiny"},
              {"N", 1},
              {"S", 1},
              {"A", {2}},
              {"gamma", 0.5},
              {"mu", {1.0}},
              {"rewards", {{{1.0, 0.0}}}},
              {"transitions", {{{1.0}, {1.0}}}}};
}

}  // namespace

TEST_CASE("load_game accepts the smallest valid document") {
  const MarkovGame game = load_game(smallest_doc());
  CHECK(game.num_players == 1);
  CHECK(game.num_states == 1);
  CHECK(game.joint_actions() == 2);
  CHECK(game.r_max == 1.0);
}

TEST_CASE("load_game rejects a non-stochastic transition row naming the index") {
  json doc = smallest_doc();
  doc["transitions"][0][1] = {0.9};
  CHECK_THROWS_WITH_AS(load_game(doc),
                       doctest::Contains("transition row at (s=0, a=1)"), GameError);
}

TEST_CASE("load_game rejects gamma outside [0, 1)") {
  json doc = smallest_doc();
  doc["gamma"] = 1.0;
  CHECK_THROWS_WITH_AS(load_game(doc), doctest::Contains("discount"), GameError);
}

TEST_CASE("load_game rejects shape mismatches with the offending index") {
  json doc = smallest_doc();
  doc["rewards"][0][0] = {1.0};  // one entry, two joint actions
  CHECK_THROWS_WITH_AS(load_game(doc), doctest::Contains("rewards[0][0]"), GameError);
}

TEST_CASE("save/load round-trips a generated game exactly") {
  const MarkovGame game = make_random_game(7, 3, 2, {2, 3}, 0.9);
  const MarkovGame back = load_game(save_game(game));
  CHECK(back.gamma == game.gamma);
  CHECK(testing::exact_equal(back.mu, game.mu));
  CHECK(testing::exact_equal(back.transitions, game.transitions));
  for (int i = 0; i < game.num_players; ++i)
    CHECK(testing::exact_equal(back.rewards[i], game.rewards[i]));
}

TEST_CASE("mu(s) = 0 is a warning, not an error") {
  json doc = smallest_doc();
  doc["S"] = 2;
  doc["mu"] = {1.0, 0.0};
  doc["rewards"] = {{{1.0, 0.0}, {1.0, 0.0}}};
  doc["transitions"] = {{{1.0, 0.0}, {1.0, 0.0}}, {{0.5, 0.5}, {0.5, 0.5}}};
  const MarkovGame game = load_game(doc);
  const auto warnings = validate_game(game);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("mu(1)") != std::string::npos);
}

TEST_CASE("team generator produces identical rewards and is seed-deterministic") {
  const MarkovGame a = make_team_game(1, 2, 2, 2);
  CHECK(testing::exact_equal(a.rewards[0], a.rewards[1]));

  const MarkovGame b = make_team_game(1, 2, 2, 2);
  CHECK(testing::exact_equal(a.rewards[0], b.rewards[0]));
  CHECK(testing::exact_equal(a.transitions, b.transitions));

  const MarkovGame c = make_team_game(2, 2, 2, 2);
  CHECK_FALSE(testing::exact_equal(a.rewards[0], c.rewards[0]));
}

TEST_CASE("generated games pass validation across seeds") {
  Rng rng(99);
  for (int k = 0; k < 25; ++k) {
    const MarkovGame game = testing::random_desk_game(rng);
    CHECK_NOTHROW(validate_game(game));
  }
}

TEST_CASE("uniform_policy puts 1/|A_i| everywhere") {
  for (int na : {1, 2, 4}) {
    const MarkovGame game = make_random_game(3, 2, 1, {na}, 0.5);
    const PolicyProfile profile = uniform_policy(game);
    for (int s = 0; s < game.num_states; ++s)
      for (int a = 0; a < na; ++a) CHECK(profile.pi[0](s, a) == 1.0 / na);
  }
}

TEST_CASE("mix_with_uniform endpoints and arithmetic") {
  const MarkovGame game = testing::single_state_game();
  PolicyProfile profile = uniform_policy(game);
  profile.pi[0] << 1.0, 0.0;

  SUBCASE("theta = 0 is the identity") {
    const PolicyProfile mixed = mix_with_uniform(game, profile, 0.0);
    CHECK(testing::exact_equal(mixed.pi[0], profile.pi[0]));
  }
  SUBCASE("theta = 1 is the uniform profile") {
    const PolicyProfile mixed = mix_with_uniform(game, profile, 1.0);
    CHECK(mixed.pi[0](0, 0) == 0.5);
    CHECK(mixed.pi[0](0, 1) == 0.5);
  }
  SUBCASE("theta = 0.5 on a vertex") {
    const PolicyProfile mixed = mix_with_uniform(game, profile, 0.5);
    CHECK(mixed.pi[0](0, 0) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(mixed.pi[0](0, 1) == doctest::Approx(0.25).epsilon(1e-15));
  }
  SUBCASE("theta outside [0, 1] is rejected") {
    CHECK_THROWS_AS(mix_with_uniform(game, profile, 1.5), GameError);
    CHECK_THROWS_AS(mix_with_uniform(game, profile, -0.1), GameError);
  }
}

TEST_CASE("mixing keeps entries inside [theta/|A|, 1 - theta + theta/|A|]") {
  Rng rng(4242);
  for (int trial = 0; trial < 50; ++trial) {
    const MarkovGame game = testing::random_desk_game(rng);
    const PolicyProfile profile = random_policy(game, rng);
    const double theta = rng.uniform();
    const PolicyProfile mixed = mix_with_uniform(game, profile, theta);
    validate_profile(game, mixed);
    for (int i = 0; i < game.num_players; ++i) {
      const double lo = theta / game.num_actions[i];
      const double hi = 1.0 - theta + theta / game.num_actions[i];
      CHECK(mixed.pi[i].minCoeff() >= lo - 1e-12);
      CHECK(mixed.pi[i].maxCoeff() <= hi + 1e-12);
    }
  }
}

TEST_CASE("mix_opponents leaves the player untouched") {
  const MarkovGame game = make_random_game(11, 2, 3, {2, 2, 2}, 0.7);
  Rng rng(5);
  const PolicyProfile profile = random_policy(game, rng);
  const PolicyProfile mixed = mix_opponents(game, profile, 1, 0.3);
  CHECK(testing::exact_equal(mixed.pi[1], profile.pi[1]));
  CHECK_FALSE(testing::exact_equal(mixed.pi[0], profile.pi[0]));
  CHECK_FALSE(testing::exact_equal(mixed.pi[2], profile.pi[2]));
}

TEST_CASE("joint action indexing: player 0 is fastest-varying") {
  const JointActionSpace space({2, 3});
  CHECK(space.size() == 6);
  CHECK(space.encode({1, 0}) == 1);
  CHECK(space.encode({0, 1}) == 2);
  CHECK(space.encode({1, 2}) == 5);
  CHECK(space.digit(5, 0) == 1);
  CHECK(space.digit(5, 1) == 2);
  CHECK(space.with_digit(5, 0, 0) == 4);
}

TEST_CASE("simplex_grid covers the lattice") {
  const MarkovGame game = testing::single_state_game();
  const auto grid = simplex_grid(game, 0.25);
  CHECK(grid.size() == 5);  // (0,1), (.25,.75), ..., (1,0)
  for (const PolicyProfile& point : grid) CHECK_NOTHROW(validate_profile(game, point));
}
