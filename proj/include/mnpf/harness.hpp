#pragma once

#include "mnpf/flow.hpp"
#include "mnpf/game_io.hpp"
#include "mnpf/learner.hpp"

#include <json.hpp>

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace mnpf {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parsed experiment description. `raw` keeps the full document; the hash is
/// computed over its canonical (sorted-key, minimal) serialization so that
/// semantically identical configs collide.
struct ExperimentConfig {
  nlohmann::json raw;
  std::string mode;  // learn | flow | analyze | kappa | constants | compare
  std::vector<std::uint64_t> seeds;
  std::string output_dir = ".";
  std::int64_t metric_period = 1000;
  SolverOptions solver;
};

ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config_file(const std::string& path);

std::string config_hash(const nlohmann::json& doc);

// Resolves {"file": path} | {"inline": document} | {"generator": {...}}.
MarkovGame game_from_config(const nlohmann::json& game_spec);

struct RunRecord {
  nlohmann::json summary;
  std::string path;   // summary file location
  int exit_code = 0;  // 0 ok, 3 when structural invariants were violated
};

// Dispatches on the mode, writes per-seed logs and a summary record under
// the output directory, and returns the record.
RunRecord run_experiment(const ExperimentConfig& config);

// Projects metric series out of a run's logs into one CSV per series
// (columns: t-or-tau, seed, metric, value). `series` may be {"all"}.
// Returns the written paths; throws ConfigError for unknown series names.
std::vector<std::string> emit_plot_data(const std::string& summary_path,
                                        const std::vector<std::string>& series,
                                        const std::string& out_dir);

// Runs the discrete learner and the Euler flow from the same initial profile
// with the same theta, and reports final gaps plus the sup-norm distance
// between the two policy trajectories at matched potential levels (matched
// rescaled times when no usable potential is attached). Descriptive only.
nlohmann::json compare_learn_vs_flow(const MarkovGame& game,
                                     const ExperimentConfig& config);

// Line-delimited log serialization. Learner lines carry
// {t, s, joint_action, rewards} plus {tau, nash_gap, player_gaps, phi_mu?,
// policy} on metric iterates; flow lines are tagged {"kind": "flow"}.
void write_trajectory_jsonl(const TrajectoryLog& log, std::ostream& out);
void write_flow_jsonl(const FlowLog& log, std::ostream& out);

nlohmann::json policy_to_json(const PolicyProfile& profile);
PolicyProfile policy_from_json(const nlohmann::json& doc, const MarkovGame& game);

}  // namespace mnpf
