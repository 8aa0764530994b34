// Command-line front end: `run` executes an experiment config, `emit`
// projects metric series out of a finished run, `compare` runs the discrete
// learner against the continuous-time flow. Exit codes: 0 success, 2 config
// error, 3 structural invariant violated during a run.

#include "mnpf/harness.hpp"
#include "mnpf/version.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>

namespace {

struct CommonArgs {
  std::string config_path;
  std::string output_dir;
  std::vector<std::uint64_t> seeds;
  std::int64_t metric_period = 0;
  double gap_tol = 0.0;
  double value_tol = 0.0;
};

mnpf::ExperimentConfig resolve(const CommonArgs& args) {
  mnpf::ExperimentConfig config = mnpf::load_config_file(args.config_path);
  if (!args.output_dir.empty()) config.output_dir = args.output_dir;
  if (!args.seeds.empty()) config.seeds = args.seeds;
  if (args.metric_period > 0) config.metric_period = args.metric_period;
  if (args.gap_tol > 0.0) config.solver.gap_tol = args.gap_tol;
  if (args.value_tol > 0.0) config.solver.value_tol = args.value_tol;
  return config;
}

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("-c,--config", args.config_path, "experiment config (JSON)")
      ->required();
  cmd->add_option("-o,--output-dir", args.output_dir, "output directory override");
  cmd->add_option("--seed", args.seeds, "seed override (repeatable)");
  cmd->add_option("--metric-period", args.metric_period, "metric period override");
  cmd->add_option("--gap-tol", args.gap_tol, "Nash-gap tolerance override");
  cmd->add_option("--value-tol", args.value_tol, "value-iteration tolerance override");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Markov-game learning and analysis harness"};
  app.set_version_flag("--version", std::string(mnpf::kVersion));
  app.require_subcommand(1);

  CommonArgs run_args;
  CLI::App* run = app.add_subcommand("run", "run an experiment config");
  add_common(run, run_args);

  CommonArgs compare_args;
  CLI::App* compare = app.add_subcommand(
      "compare", "run the learner and the flow from the same start");
  add_common(compare, compare_args);

  std::string summary_path;
  std::vector<std::string> series{"all"};
  std::string emit_out;
  CLI::App* emit = app.add_subcommand("emit", "project metric series to CSV");
  emit->add_option("-r,--run", summary_path, "summary.json of a finished run")
      ->required();
  emit->add_option("-s,--series", series, "series names, or 'all'");
  emit->add_option("-o,--output-dir", emit_out, "where to write CSV files");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const mnpf::RunRecord record = mnpf::run_experiment(resolve(run_args));
      std::cout << "summary: " << record.path << "\n";
      if (record.exit_code != 0)
        std::cerr << "structural invariants were violated during the run\n";
      return record.exit_code;
    }
    if (compare->parsed()) {
      mnpf::ExperimentConfig config = resolve(compare_args);
      config.mode = "compare";
      config.raw["mode"] = "compare";
      const mnpf::RunRecord record = mnpf::run_experiment(config);
      std::cout << "summary: " << record.path << "\n";
      std::cout << "verdict: "
                << record.summary["compare"]["verdict"].get<std::string>() << "\n";
      return record.exit_code;
    }
    if (emit->parsed()) {
      if (emit_out.empty()) {
        if (const char* env = std::getenv("MNPF_OUTPUT_DIR")) emit_out = env;
      }
      if (emit_out.empty())
        emit_out = std::filesystem::path(summary_path).parent_path().string();
      const auto written = mnpf::emit_plot_data(summary_path, series, emit_out);
      for (const std::string& path : written) std::cout << path << "\n";
      return 0;
    }
  } catch (const mnpf::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const mnpf::GameError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
