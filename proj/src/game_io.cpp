#include "mnpf/game_io.hpp"

#include <fstream>

namespace mnpf {

using nlohmann::json;

namespace {

const json& require(const json& doc, const char* field) {
  auto it = doc.find(field);
  if (it == doc.end()) throw GameError(std::string("missing field '") + field + "'");
  return *it;
}

}  // namespace

MarkovGame load_game(const json& doc) {
  MarkovGame game;
  if (doc.contains("name")) game.name = doc["name"].get<std::string>();
  game.num_players = require(doc, "N").get<int>();
  game.num_states = require(doc, "S").get<int>();
  game.num_actions = require(doc, "A").get<std::vector<int>>();
  game.gamma = require(doc, "gamma").get<double>();
  if (game.num_players < 1) throw GameError("N must be >= 1");
  if (game.num_states < 1) throw GameError("S must be >= 1");
  if (static_cast<int>(game.num_actions.size()) != game.num_players)
    throw GameError("A must list one action count per player");
  for (int n : game.num_actions) {
    if (n < 1) throw GameError("A entries must be >= 1");
  }
  game.joint = JointActionSpace(game.num_actions);
  const int ja = game.joint.size();

  const json& mu = require(doc, "mu");
  if (static_cast<int>(mu.size()) != game.num_states)
    throw GameError("mu length does not match S");
  game.mu.resize(game.num_states);
  for (int s = 0; s < game.num_states; ++s) game.mu[s] = mu[s].get<double>();

  const json& rewards = require(doc, "rewards");
  if (static_cast<int>(rewards.size()) != game.num_players)
    throw GameError("rewards must hold one table per player");
  for (int i = 0; i < game.num_players; ++i) {
    const json& table = rewards[i];
    if (static_cast<int>(table.size()) != game.num_states)
      throw GameError("rewards[" + std::to_string(i) + "] must have S rows");
    Mat r(game.num_states, ja);
    for (int s = 0; s < game.num_states; ++s) {
      const json& row = table[s];
      if (static_cast<int>(row.size()) != ja)
        throw GameError("rewards[" + std::to_string(i) + "][" + std::to_string(s) +
                        "] must have one entry per joint action");
      for (int a = 0; a < ja; ++a) r(s, a) = row[a].get<double>();
    }
    game.rewards.push_back(std::move(r));
  }

  const json& transitions = require(doc, "transitions");
  if (static_cast<int>(transitions.size()) != game.num_states)
    throw GameError("transitions must have one block per state");
  game.transitions.resize(static_cast<Eigen::Index>(game.num_states) * ja,
                          game.num_states);
  for (int s = 0; s < game.num_states; ++s) {
    const json& block = transitions[s];
    if (static_cast<int>(block.size()) != ja)
      throw GameError("transitions[" + std::to_string(s) +
                      "] must have one row per joint action");
    for (int a = 0; a < ja; ++a) {
      const json& row = block[a];
      if (static_cast<int>(row.size()) != game.num_states)
        throw GameError("transitions[" + std::to_string(s) + "][" + std::to_string(a) +
                        "] must have one entry per next state");
      for (int sp = 0; sp < game.num_states; ++sp)
        game.transitions(game.row(s, a), sp) = row[sp].get<double>();
    }
  }

  finalize_game(game);
  validate_game(game);
  return game;
}

MarkovGame load_game_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GameError("cannot open game file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw GameError("cannot parse game file " + path + ": " + e.what());
  }
  return load_game(doc);
}

json save_game(const MarkovGame& game) {
  json doc;
  if (!game.name.empty()) doc["name"] = game.name;
  doc["N"] = game.num_players;
  doc["S"] = game.num_states;
  doc["A"] = game.num_actions;
  doc["gamma"] = game.gamma;
  doc["mu"] = std::vector<double>(game.mu.data(), game.mu.data() + game.mu.size());
  const int ja = game.joint.size();

  json rewards = json::array();
  for (int i = 0; i < game.num_players; ++i) {
    json table = json::array();
    for (int s = 0; s < game.num_states; ++s) {
      json row = json::array();
      for (int a = 0; a < ja; ++a) row.push_back(game.rewards[i](s, a));
      table.push_back(std::move(row));
    }
    rewards.push_back(std::move(table));
  }
  doc["rewards"] = std::move(rewards);

  json transitions = json::array();
  for (int s = 0; s < game.num_states; ++s) {
    json block = json::array();
    for (int a = 0; a < ja; ++a) {
      json row = json::array();
      for (int sp = 0; sp < game.num_states; ++sp)
        row.push_back(game.transitions(game.row(s, a), sp));
      block.push_back(std::move(row));
    }
    transitions.push_back(std::move(block));
  }
  doc["transitions"] = std::move(transitions);
  return doc;
}

void save_game_file(const MarkovGame& game, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw GameError("cannot write game file: " + path);
  out << save_game(game).dump(2) << "\n";
}

std::vector<PolicyProfile> known_equilibria(const json& doc, const MarkovGame& game) {
  std::vector<PolicyProfile> result;
  if (!doc.contains("known_equilibria")) return result;
  for (const json& entry : doc["known_equilibria"]) {
    if (static_cast<int>(entry.size()) != game.num_players)
      throw GameError("known_equilibria entry must list one policy per player");
    PolicyProfile profile;
    for (int i = 0; i < game.num_players; ++i) {
      Mat p(game.num_states, game.num_actions[i]);
      for (int s = 0; s < game.num_states; ++s)
        for (int a = 0; a < game.num_actions[i]; ++a)
          p(s, a) = entry[i][s][a].get<double>();
      profile.pi.push_back(std::move(p));
    }
    validate_profile(game, profile);
    result.push_back(std::move(profile));
  }
  return result;
}

}  // namespace mnpf
