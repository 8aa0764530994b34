#pragma once

#include "mnpf/game.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace mnpf {

// Game documents are JSON with fields
//   {name?, N, S, A, gamma, mu, rewards, transitions, known_equilibria?}
// rewards is indexed [player][state][joint_action] and transitions
// [state][joint_action][next_state]; joint actions use the mixed-radix
// order of JointActionSpace (player 0 fastest-varying).

// Parses and validates a document. Throws GameError with the offending
// field or index on malformed input.
MarkovGame load_game(const nlohmann::json& doc);
MarkovGame load_game_file(const std::string& path);

nlohmann::json save_game(const MarkovGame& game);
void save_game_file(const MarkovGame& game, const std::string& path);

// Optional "known_equilibria" metadata: a list of policy profiles, each
// [player][state][action]. Empty when the field is absent.
std::vector<PolicyProfile> known_equilibria(const nlohmann::json& doc,
                                            const MarkovGame& game);

}  // namespace mnpf
