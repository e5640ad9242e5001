#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "rovf/experiments.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitUsage = 2;

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<long> trials;
  std::optional<int> steps;
  std::optional<int> threads;
  std::optional<std::string> out;
  bool full_paths = false;
};

int load_config(const std::string& path, const Overrides& overrides,
                rovf::ExperimentConfig& config) {
  auto text = read_file(path);
  if (!text) {
    std::cerr << "error: cannot read config file \"" << path << "\"\n";
    return kExitUsage;
  }
  rovf::ValidationResult result = rovf::validate_config(*text);
  if (!result.ok()) {
    std::cerr << "config \"" << path << "\" is invalid:\n";
    for (const std::string& e : result.errors) std::cerr << "  - " << e << "\n";
    return kExitUsage;
  }
  config = *result.config;
  if (overrides.seed) config.seed = *overrides.seed;
  if (overrides.trials) config.trials = *overrides.trials;
  if (overrides.steps) config.steps = *overrides.steps;
  if (overrides.threads) config.threads = *overrides.threads;
  if (overrides.out) config.out_dir = *overrides.out;
  if (overrides.full_paths) config.full_paths = true;
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rovf: randomized positive-contraction iteration experiments"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides overrides;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "experiment config (JSON)")->required();
  };

  CLI::App* run = app.add_subcommand("run", "run an experiment and write its verdict");
  add_common(run);
  std::uint64_t seed_value = 0;
  long trials_value = 0;
  int steps_value = 0, threads_value = 0;
  std::string out_value;
  run->add_option("--seed", seed_value, "override the config seed")
      ->check(CLI::NonNegativeNumber);
  run->add_option("--trials", trials_value, "override the trial count")
      ->check(CLI::PositiveNumber);
  run->add_option("--steps", steps_value, "override the step count")
      ->check(CLI::PositiveNumber);
  run->add_option("--threads", threads_value, "worker threads (output is identical for any count)")
      ->check(CLI::PositiveNumber);
  run->add_option("--out", out_value, "override the output directory");
  run->add_flag("--full-paths", overrides.full_paths,
                "also emit term/residual vectors for the first 1000 paths");

  CLI::App* validate = app.add_subcommand("validate", "validate a config and exit");
  add_common(validate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  if (run->parsed()) {
    if (run->count("--seed")) overrides.seed = seed_value;
    if (run->count("--trials")) overrides.trials = trials_value;
    if (run->count("--steps")) overrides.steps = steps_value;
    if (run->count("--threads")) overrides.threads = threads_value;
    if (run->count("--out")) overrides.out = out_value;
  }

  rovf::ExperimentConfig config;
  int status = load_config(config_path, overrides, config);
  if (status != kExitPass) return status;

  if (validate->parsed()) {
    std::cout << rovf::config_to_json(config).dump(2) << "\n";
    return kExitPass;
  }

  try {
    rovf::VerdictDocument verdict = rovf::run_experiment(config);
    for (const rovf::VerdictCheck& check : verdict.checks) {
      std::cout << (check.pass ? "[PASS] " : "[FAIL] ") << check.name
                << "  measured=" << rovf::format_double(check.measured)
                << "  bound=" << rovf::format_double(check.bound) << "\n";
    }
    std::cout << (verdict.overall_pass ? "overall: PASS" : "overall: FAIL") << " ("
              << config.out_dir << "/verdict.json)\n";
    return verdict.overall_pass ? kExitPass : kExitCheckFailure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
