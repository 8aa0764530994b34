#include "mnpf/harness.hpp"

#include "mnpf/version.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace mnpf {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm{};
  gmtime_r(&tt, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

json vec_to_json(const Vec& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

const json& section(const json& doc, const std::string& name) {
  static const json empty = json::object();
  auto it = doc.find(name);
  return it == doc.end() ? empty : *it;
}

template <typename T>
T get_or(const json& doc, const std::string& key, T fallback) {
  auto it = doc.find(key);
  if (it == doc.end()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError("field '" + key + "' has the wrong type");
  }
}

LearnerConfig learner_config(const MarkovGame& game, const json& params,
                             const ExperimentConfig& config, std::uint64_t seed) {
  LearnerConfig lc;
  lc.seed = seed;
  lc.metric_period = config.metric_period;
  lc.horizon = get_or<std::int64_t>(params, "T", 10000);
  lc.fast_exponent = get_or<double>(params, "a", 0.6);
  lc.slow_exponent = get_or<double>(params, "b", 0.9);
  lc.record_period = get_or<std::int64_t>(params, "record_period", 100);
  lc.freeze_policy = get_or<bool>(params, "freeze_policy", false);
  lc.check_invariants = get_or<bool>(params, "check_invariants", true);
  if (params.contains("theta") && params["theta"].is_string()) {
    if (params["theta"].get<std::string>() != "auto")
      throw ConfigError("theta must be a number or \"auto\"");
    const double lambda = get_or<double>(params, "lambda", 0.05);
    const TheoremConstants c = theorem_constants(game, 1.0, lambda, 0, seed);
    lc.theta = theta_bound(game, lambda, c.chosen_d).value;
  } else {
    lc.theta = get_or<double>(params, "theta", 0.01);
  }
  if (!(lc.theta >= 0.0 && lc.theta <= 1.0))
    throw ConfigError("theta must lie in [0, 1]");
  if (lc.horizon < 0) throw ConfigError("T must be >= 0");
  if (params.contains("initial_policy"))
    lc.initial_policy = policy_from_json(params["initial_policy"], game);
  return lc;
}

FlowConfig flow_config(const MarkovGame& game, const json& params,
                       std::uint64_t seed) {
  FlowConfig fc;
  fc.h = get_or<double>(params, "h", 0.05);
  fc.theta = get_or<double>(params, "theta", 0.0);
  fc.eta = get_or<double>(params, "eta", 1.0);
  fc.horizon = get_or<double>(params, "horizon", 50.0);
  fc.check_invariants = get_or<bool>(params, "check_invariants", true);
  fc.event_deltas = get_or<std::vector<double>>(params, "event_deltas", {});
  if (fc.h <= 0.0) throw ConfigError("flow step h must be positive");
  if (fc.horizon < 0.0) throw ConfigError("flow horizon must be >= 0");
  if (!(fc.theta >= 0.0 && fc.theta <= 1.0))
    throw ConfigError("theta must lie in [0, 1]");
  if (get_or<bool>(params, "randomize_weights", false)) {
    Rng rng(seed ^ 0xf10fULL);
    fc.gamma_weights.resize(game.num_states);
    for (int s = 0; s < game.num_states; ++s)
      fc.gamma_weights[s] = rng.uniform(fc.eta, 1.0);
  }
  return fc;
}

// Potential selection shared by the learn/flow/kappa modes.
struct AttachedPotential {
  bool present = false;
  CertifiedPotential certified;
};

AttachedPotential attach_potential(const MarkovGame& game, const json& params) {
  AttachedPotential attached;
  const std::string kind = get_or<std::string>(params, "potential", "none");
  if (kind == "none") return attached;
  if (kind == "zero") {
    attached.certified = zero_potential(game);
  } else if (kind == "identical") {
    attached.certified = identical_interest_potential(game);
  } else {
    throw ConfigError("unknown potential kind '" + kind + "'");
  }
  attached.present = true;
  return attached;
}

}  // namespace

std::string config_hash(const json& doc) {
  const std::string canonical = doc.dump();
  std::uint64_t hash = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : canonical) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

MarkovGame game_from_config(const json& game_spec) {
  if (game_spec.contains("file")) return load_game_file(game_spec["file"]);
  if (game_spec.contains("inline")) return load_game(game_spec["inline"]);
  if (game_spec.contains("generator")) {
    const json& gen = game_spec["generator"];
    const std::string family = get_or<std::string>(gen, "family", "random");
    const auto seed = get_or<std::uint64_t>(gen, "seed", 0);
    const int s = get_or<int>(gen, "S", 2);
    const int n = get_or<int>(gen, "N", 2);
    const int a = get_or<int>(gen, "A", 2);
    const double gamma = get_or<double>(gen, "gamma", 0.7);
    if (family == "team") return make_team_game(seed, s, n, a, gamma);
    if (family == "random")
      return make_random_game(seed, s, n, std::vector<int>(n, a), gamma);
    if (family == "dominant") return make_dominant_game(seed, s, n, a, gamma);
    throw ConfigError("unknown generator family '" + family + "'");
  }
  throw ConfigError("game must provide one of: file, inline, generator");
}

ExperimentConfig parse_config(const json& doc) {
  ExperimentConfig config;
  config.raw = doc;
  if (!doc.contains("mode")) throw ConfigError("missing field 'mode'");
  config.mode = doc["mode"].get<std::string>();
  static const std::set<std::string> modes = {"learn", "flow",      "analyze",
                                              "kappa", "constants", "compare"};
  if (!modes.count(config.mode)) throw ConfigError("unknown mode '" + config.mode + "'");
  if (!doc.contains("game")) throw ConfigError("missing field 'game'");

  config.seeds = get_or<std::vector<std::uint64_t>>(doc, "seeds", {});
  const bool stochastic =
      config.mode == "learn" || config.mode == "kappa" || config.mode == "compare" ||
      (config.mode == "flow" && get_or<bool>(section(doc, "flow"),
                                             "randomize_weights", false));
  if (stochastic && config.seeds.empty())
    throw ConfigError("mode '" + config.mode + "' requires a nonempty seeds list");
  if (config.seeds.empty()) config.seeds = {0};

  if (doc.contains("output_dir")) {
    config.output_dir = doc["output_dir"].get<std::string>();
  } else if (const char* env = std::getenv("MNPF_OUTPUT_DIR")) {
    config.output_dir = env;
  }
  config.metric_period = get_or<std::int64_t>(doc, "metric_period", 1000);
  if (config.metric_period < 1) throw ConfigError("metric_period must be >= 1");
  config.solver.gap_tol = get_or<double>(doc, "gap_tol", config.solver.gap_tol);
  config.solver.value_tol = get_or<double>(doc, "value_tol", config.solver.value_tol);

  // Surface malformed game and mode sections before any run starts.
  const MarkovGame game = game_from_config(doc["game"]);
  if (config.mode == "learn" || config.mode == "compare")
    learner_config(game, section(doc, "learn"), config, config.seeds.front());
  if (config.mode == "flow" || config.mode == "compare")
    flow_config(game, section(doc, "flow"), config.seeds.front());
  if (config.mode == "kappa" || config.mode == "learn" || config.mode == "flow")
    attach_potential(game, section(doc, config.mode == "kappa" ? "kappa" : config.mode));
  return config;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError("cannot parse config file " + path + ": " + e.what());
  }
  return parse_config(doc);
}

json policy_to_json(const PolicyProfile& profile) {
  json out = json::array();
  for (const Mat& p : profile.pi) {
    json rows = json::array();
    for (Eigen::Index s = 0; s < p.rows(); ++s) {
      json row = json::array();
      for (Eigen::Index a = 0; a < p.cols(); ++a) row.push_back(p(s, a));
      rows.push_back(std::move(row));
    }
    out.push_back(std::move(rows));
  }
  return out;
}

PolicyProfile policy_from_json(const json& doc, const MarkovGame& game) {
  if (static_cast<int>(doc.size()) != game.num_players)
    throw ConfigError("policy must list one table per player");
  PolicyProfile profile;
  for (int i = 0; i < game.num_players; ++i) {
    Mat p(game.num_states, game.num_actions[i]);
    for (int s = 0; s < game.num_states; ++s)
      for (int a = 0; a < game.num_actions[i]; ++a)
        p(s, a) = doc[i][s][a].get<double>();
    profile.pi.push_back(std::move(p));
  }
  validate_profile(game, profile);
  return profile;
}

void write_trajectory_jsonl(const TrajectoryLog& log, std::ostream& out) {
  std::map<std::int64_t, json> lines;
  for (const StepRecord& step : log.steps) {
    json& line = lines[step.t];
    line["t"] = step.t;
    line["s"] = step.state;
    line["joint_action"] = step.actions;
    line["rewards"] = vec_to_json(step.rewards);
  }
  for (const MetricSample& metric : log.metrics) {
    json& line = lines[metric.t];
    line["t"] = metric.t;
    line["tau"] = metric.tau;
    line["nash_gap"] = metric.nash_gap;
    line["player_gaps"] = vec_to_json(metric.player_gaps);
    if (metric.phi_mu) line["phi_mu"] = *metric.phi_mu;
    line["policy"] = policy_to_json(metric.policy);
  }
  for (const auto& [t, line] : lines) out << line.dump() << "\n";
}

void write_flow_jsonl(const FlowLog& log, std::ostream& out) {
  for (const FlowSample& sample : log.samples) {
    json line;
    line["kind"] = "flow";
    line["tau"] = sample.tau;
    line["nash_gap"] = sample.nash_gap;
    if (!std::isnan(sample.phi_mu)) line["phi_mu"] = sample.phi_mu;
    line["policy"] = policy_to_json(sample.profile);
    out << line.dump() << "\n";
  }
  for (const NeEvent& event : log.events) {
    json line;
    line["kind"] = "event";
    line["tau"] = event.tau;
    line["delta"] = event.delta;
    line["entered"] = event.entered;
    out << line.dump() << "\n";
  }
}

namespace {

json game_summary(const MarkovGame& game) {
  json meta;
  meta["name"] = game.name;
  meta["N"] = game.num_players;
  meta["S"] = game.num_states;
  meta["A"] = game.num_actions;
  meta["gamma"] = game.gamma;
  meta["r_max"] = game.r_max;
  return meta;
}

json run_learn_mode(const MarkovGame& game, const ExperimentConfig& config,
                    std::int64_t& violations) {
  const json& params = section(config.raw, "learn");
  const AttachedPotential attached = attach_potential(game, params);
  json out;
  out["runs"] = json::array();
  std::vector<double> initial, final_;
  for (std::uint64_t seed : config.seeds) {
    const LearnerConfig lc = learner_config(game, params, config, seed);
    const TrajectoryLog log = run_learning(
        game, lc, attached.present ? &attached.certified.phi : nullptr, config.solver);
    const std::string log_name = "learn_seed" + std::to_string(seed) + ".jsonl";
    std::ofstream stream(fs::path(config.output_dir) / log_name);
    if (!stream) throw ConfigError("cannot write log " + log_name);
    write_trajectory_jsonl(log, stream);

    json run;
    run["seed"] = seed;
    run["log"] = log_name;
    run["theta"] = lc.theta;
    run["initial_nash_gap"] = log.metrics.front().nash_gap;
    run["final_nash_gap"] = log.metrics.back().nash_gap;
    if (log.metrics.back().phi_mu) run["final_phi_mu"] = *log.metrics.back().phi_mu;
    run["violations"] = log.violation_count;
    violations += log.violation_count;
    initial.push_back(log.metrics.front().nash_gap);
    final_.push_back(log.metrics.back().nash_gap);
    out["runs"].push_back(std::move(run));
  }
  out["median_initial_nash_gap"] = median(initial);
  out["median_final_nash_gap"] = median(final_);
  return out;
}

json run_flow_mode(const MarkovGame& game, const ExperimentConfig& config,
                   std::int64_t& violations) {
  const json& params = section(config.raw, "flow");
  const AttachedPotential attached = attach_potential(game, params);
  json out;
  out["runs"] = json::array();
  for (std::uint64_t seed : config.seeds) {
    const FlowConfig fc = flow_config(game, params, seed);
    PolicyProfile start = params.contains("initial_policy")
                              ? policy_from_json(params["initial_policy"], game)
                              : uniform_policy(game);
    const FlowLog log = run_flow(game, start, fc,
                                 attached.present ? &attached.certified.phi : nullptr,
                                 config.solver);
    const std::string log_name = "flow_seed" + std::to_string(seed) + ".jsonl";
    std::ofstream stream(fs::path(config.output_dir) / log_name);
    if (!stream) throw ConfigError("cannot write log " + log_name);
    write_flow_jsonl(log, stream);

    json run;
    run["seed"] = seed;
    run["log"] = log_name;
    run["initial_nash_gap"] = log.samples.front().nash_gap;
    run["final_nash_gap"] = log.samples.back().nash_gap;
    if (!std::isnan(log.samples.back().phi_mu))
      run["final_phi_mu"] = log.samples.back().phi_mu;
    run["violations"] = log.violation_count;
    if (attached.present && get_or<bool>(params, "decay_check", false)) {
      const PhiDecayReport decay =
          check_phi_decay(log, get_or<double>(params, "decay_gap_threshold", 1e-6),
                          get_or<double>(params, "decay_slack", 1e-6));
      run["decay_intervals_checked"] = decay.intervals_checked;
      run["decay_violations"] = static_cast<long>(decay.violations.size());
      violations += static_cast<std::int64_t>(decay.violations.size());
    }
    violations += log.violation_count;
    out["runs"].push_back(std::move(run));
  }
  return out;
}

json run_analyze_mode(const MarkovGame& game, const ExperimentConfig& config) {
  const json& params = section(config.raw, "analyze");
  const PolicyProfile profile = params.contains("policy")
                                    ? policy_from_json(params["policy"], game)
                                    : uniform_policy(game);
  const ValueTable values = policy_value(game, profile);
  const NashGapReport gap = nash_gap(game, profile, config.solver);
  json out;
  out["v_mu"] = vec_to_json(values.v_mu);
  out["occupancy"] = vec_to_json(occupancy(game, profile).d);
  out["nash_gap"] = gap.epsilon;
  out["player_gaps"] = vec_to_json(gap.gaps);
  if (params.contains("theta") && game.num_players >= 2) {
    const double theta = params["theta"].get<double>();
    json checks = json::array();
    for (int i = 0; i < game.num_players; ++i) {
      const PerturbationReport report = perturbation_bounds_check(
          game, i, profile, theta, get_or<long>(params, "samples", 0),
          config.seeds.front());
      checks.push_back({{"player", i},
                        {"bound", report.bound},
                        {"v_deviation", report.v_deviation},
                        {"q_deviation", report.q_deviation},
                        {"pass", report.pass}});
    }
    out["perturbation"] = std::move(checks);
  }
  return out;
}

json run_kappa_mode(const MarkovGame& game, const ExperimentConfig& config) {
  const json& params = section(config.raw, "kappa");
  AttachedPotential attached = attach_potential(game, params);
  if (!attached.present) {
    attached.certified = zero_potential(game);
    attached.present = true;
  }
  const long samples = get_or<long>(params, "num_samples", 200);
  json out;
  if (attached.certified.kappa.certified_upper)
    out["certified_upper"] = *attached.certified.kappa.certified_upper;
  out["alpha_bound_from_certified"] =
      attached.certified.kappa.certified_upper
          ? json(alpha_from_kappa(*attached.certified.kappa.certified_upper,
                                  game.num_states))
          : json();
  out["estimates"] = json::array();
  for (std::uint64_t seed : config.seeds) {
    const KappaEstimate estimate =
        estimate_kappa(game, attached.certified.phi, samples, seed);
    json entry;
    entry["seed"] = seed;
    entry["num_samples"] = estimate.num_samples;
    entry["kappa_lower"] = estimate.kappa_lower;
    entry["alpha_bound"] = alpha_from_kappa(estimate.kappa_lower, game.num_states);
    if (estimate.worst) {
      entry["witness"] = {{"player", estimate.worst->player},
                          {"state", estimate.worst->state},
                          {"ratio", estimate.worst->ratio}};
    }
    out["estimates"].push_back(std::move(entry));
  }
  return out;
}

json run_constants_mode(const MarkovGame& game, const ExperimentConfig& config) {
  const json& params = section(config.raw, "constants");
  const double eta = get_or<double>(params, "eta", 1.0);
  const double lambda = get_or<double>(params, "lambda", 0.05);
  const long samples = get_or<long>(params, "policy_samples", 200);
  const TheoremConstants c =
      theorem_constants(game, eta, lambda, samples, config.seeds.front());
  json out;
  out["d_lower"] = c.d_lower;
  out["d_upper"] = c.mu_has_zero ? json() : json(c.d_upper);
  out["chosen_d"] = c.chosen_d;
  out["big_theta"] = c.big_theta;
  out["theta_max"] = c.theta_max;
  out["theta_clipped"] = c.theta_clipped;
  out["eta"] = eta;
  out["lambda"] = lambda;
  out["mu_has_zero"] = c.mu_has_zero;
  out["policies_checked"] = c.policies_checked;
  out["enumerated_all_deterministic"] = c.enumerated_all;
  return out;
}

}  // namespace

nlohmann::json compare_learn_vs_flow(const MarkovGame& game,
                                     const ExperimentConfig& config) {
  const json& learn_params = section(config.raw, "learn");
  const json& flow_params = section(config.raw, "flow");
  const LearnerConfig lc =
      learner_config(game, learn_params, config, config.seeds.front());
  const FlowConfig fc = flow_config(game, flow_params, config.seeds.front());
  if (std::abs(lc.theta - fc.theta) > 1e-15)
    throw ConfigError("learn and flow must use the same theta for a comparison");

  const AttachedPotential attached = attach_potential(
      game, learn_params.contains("potential") ? learn_params : flow_params);
  const Potential* phi = attached.present ? &attached.certified.phi : nullptr;

  PolicyProfile start = learn_params.contains("initial_policy")
                            ? policy_from_json(learn_params["initial_policy"], game)
                            : uniform_policy(game);

  LearnerConfig learn_from_same = lc;
  learn_from_same.initial_policy = start;
  const FlowLog flow_log = run_flow(game, start, fc, phi, config.solver);

  const bool match_by_phi = phi && attached.certified.phi.kind != Potential::Kind::zero;
  json out;
  out["matched_by"] = match_by_phi ? "phi_mu" : "tau";
  out["theta"] = lc.theta;
  out["flow_final_nash_gap"] = flow_log.samples.back().nash_gap;
  out["runs"] = json::array();

  const double delta = get_or<double>(config.raw, "delta", 0.1);
  bool consistent = flow_log.samples.back().nash_gap <= delta;
  for (std::uint64_t seed : config.seeds) {
    LearnerConfig per_seed = learn_from_same;
    per_seed.seed = seed;
    const TrajectoryLog learn_log = run_learning(game, per_seed, phi, config.solver);

    json pairs = json::array();
    double max_dist = 0.0;
    for (const MetricSample& metric : learn_log.metrics) {
      // Closest flow sample: by potential level when one is attached,
      // otherwise by rescaled time.
      const double key = match_by_phi ? *metric.phi_mu : metric.tau;
      const FlowSample* best = &flow_log.samples.front();
      double best_err = std::numeric_limits<double>::infinity();
      for (const FlowSample& sample : flow_log.samples) {
        const double err =
            std::abs((match_by_phi ? sample.phi_mu : sample.tau) - key);
        if (err < best_err) {
          best_err = err;
          best = &sample;
        }
      }
      double dist = 0.0;
      for (int i = 0; i < game.num_players; ++i)
        dist = std::max(dist, (metric.policy.pi[i] - best->profile.pi[i])
                                  .cwiseAbs()
                                  .maxCoeff());
      max_dist = std::max(max_dist, dist);
      pairs.push_back({{"t", metric.t},
                       {"tau", metric.tau},
                       {"flow_tau", best->tau},
                       {"sup_dist", dist}});
    }

    const double final_gap = learn_log.metrics.back().nash_gap;
    consistent = consistent && final_gap <= delta;
    out["runs"].push_back({{"seed", seed},
                           {"final_nash_gap", final_gap},
                           {"max_sup_dist", max_dist},
                           {"pairs", std::move(pairs)}});
  }
  out["delta"] = delta;
  out["verdict"] = consistent ? "consistent" : "inconclusive";
  return out;
}

RunRecord run_experiment(const ExperimentConfig& config) {
  fs::create_directories(config.output_dir);
  const MarkovGame game = game_from_config(config.raw["game"]);

  RunRecord record;
  record.summary["version"] = kVersion;
  record.summary["config_hash"] = config_hash(config.raw);
  record.summary["mode"] = config.mode;
  record.summary["seeds"] = config.seeds;
  record.summary["game"] = game_summary(game);
  record.summary["started_at"] = timestamp();

  std::int64_t violations = 0;
  if (config.mode == "learn") {
    record.summary["learn"] = run_learn_mode(game, config, violations);
  } else if (config.mode == "flow") {
    record.summary["flow"] = run_flow_mode(game, config, violations);
  } else if (config.mode == "analyze") {
    record.summary["analyze"] = run_analyze_mode(game, config);
  } else if (config.mode == "kappa") {
    record.summary["kappa"] = run_kappa_mode(game, config);
  } else if (config.mode == "constants") {
    record.summary["constants"] = run_constants_mode(game, config);
  } else if (config.mode == "compare") {
    record.summary["compare"] = compare_learn_vs_flow(game, config);
  }
  record.summary["finished_at"] = timestamp();
  record.summary["invariant_violations"] = violations;
  record.exit_code = violations > 0 ? 3 : 0;

  const fs::path path = fs::path(config.output_dir) / "summary.json";
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write summary to " + path.string());
  out << record.summary.dump(2) << "\n";
  record.path = path.string();
  return record;
}

std::vector<std::string> emit_plot_data(const std::string& summary_path,
                                        const std::vector<std::string>& series,
                                        const std::string& out_dir) {
  std::ifstream in(summary_path);
  if (!in) throw ConfigError("cannot open summary: " + summary_path);
  json summary;
  in >> summary;

  const std::string mode = summary.value("mode", "");
  const bool flow = mode == "flow";
  const std::string time_column = flow ? "tau" : "t";
  const fs::path base = fs::path(summary_path).parent_path();

  // Collect (time, seed, metric, value) rows from every per-seed log.
  std::map<std::string, std::vector<std::tuple<double, std::uint64_t, double>>> data;
  const json& runs = summary.contains(mode) && summary[mode].contains("runs")
                         ? summary[mode]["runs"]
                         : json::array();
  for (const json& run : runs) {
    const std::uint64_t seed = run["seed"].get<std::uint64_t>();
    std::ifstream log(base / run["log"].get<std::string>());
    if (!log)
      throw ConfigError("cannot open log " + run["log"].get<std::string>());
    std::string text;
    while (std::getline(log, text)) {
      if (text.empty()) continue;
      const json line = json::parse(text);
      if (!line.contains("nash_gap")) continue;  // step-only or event line
      const double time = line[time_column].get<double>();
      data["nash_gap"].emplace_back(time, seed, line["nash_gap"].get<double>());
      if (line.contains("phi_mu"))
        data["phi_mu"].emplace_back(time, seed, line["phi_mu"].get<double>());
      if (line.contains("player_gaps")) {
        const auto gaps = line["player_gaps"].get<std::vector<double>>();
        for (std::size_t i = 0; i < gaps.size(); ++i)
          data["gap" + std::to_string(i)].emplace_back(time, seed, gaps[i]);
      }
    }
  }

  std::vector<std::string> selected = series;
  if (selected.size() == 1 && selected[0] == "all") {
    selected.clear();
    for (const auto& [name, rows] : data) selected.push_back(name);
  }

  fs::create_directories(out_dir);
  std::vector<std::string> written;
  for (const std::string& name : selected) {
    auto it = data.find(name);
    if (it == data.end()) throw ConfigError("unknown series '" + name + "'");
    const fs::path path = fs::path(out_dir) / (name + ".csv");
    std::ofstream out(path);
    out << time_column << ",seed,metric,value\n";
    for (const auto& [time, seed, value] : it->second)
      out << time << "," << seed << "," << name << "," << value << "\n";
    written.push_back(path.string());
  }
  return written;
}

}  // namespace mnpf
