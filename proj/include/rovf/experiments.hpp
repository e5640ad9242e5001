#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rovf/kaczmarz.hpp"
#include "rovf/samplers.hpp"
#include "rovf/serialization.hpp"
#include "rovf/types.hpp"

namespace rovf {

// Config-driven experiment runner. Every experiment is a pure function of
// its config: a mandatory seed, no wall clock, fixed reduction orders, and
// byte-stable number formatting make reruns byte-identical.

enum class ExperimentKind {
  EnergyGapSweep,  // token "lemma2-sweep"
  DilationCheck,   // token "dilation-check"
  Convergence,
  Parseval,
  Fusion,
  Kaczmarz,
  Coercivity,
};

std::string kind_token(ExperimentKind kind);
std::optional<ExperimentKind> kind_from_token(const std::string& token);

struct VectorChoice {
  enum class Mode { Explicit, RandomUnit, BasisSweep };
  Mode mode = Mode::RandomUnit;
  Vectord entries;  // Explicit only
};

struct SystemConfig {
  std::optional<std::string> matrix_file;  // Matrix Market path
  std::optional<Matrixd> matrix;           // inline alternative
  Vectord rhs;
  std::optional<Vectord> solution;
  RowSampling sampling = RowSampling::SquaredNorm;
  int equivalence_runs = 10;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Convergence;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  int threads = 1;
  bool full_paths = false;

  std::optional<SamplerSpec> sampler;
  std::optional<VectorChoice> x;
  int steps = 0;
  long trials = 0;
  double delta = 0.1;  // exceedance threshold, relative to ||x0||

  // sweep kinds
  int pairs = 10000;
  int cases = 1000;
  int min_dim = 1;
  int max_dim = 16;

  long mc_samples = 50000;  // coercivity kind

  std::optional<SystemConfig> system;  // kaczmarz kind
};

struct ValidationResult {
  std::optional<ExperimentConfig> config;
  std::vector<std::string> errors;
  bool ok() const { return errors.empty(); }
};

/// Full schema validation; collects every error instead of stopping at the
/// first one. A config is returned only when the error list is empty.
ValidationResult validate_config(const std::string& raw_text);
ValidationResult validate_config_json(const Json& j);

/// Normalized form: emitting, re-parsing, and emitting again is a fixed
/// point.
Json config_to_json(const ExperimentConfig& config);

struct VerdictCheck {
  std::string name;
  std::string claim;  // the mathematical statement being checked
  double measured = 0.0;
  double bound = 0.0;
  double margin = 0.0;
  bool pass = true;
};

struct VerdictDocument {
  std::string experiment;
  bool overall_pass = true;
  std::vector<VerdictCheck> checks;
};

Json verdict_to_json(const VerdictDocument& verdict);

/// Runs the configured experiment, writing CSV data files and verdict.json
/// under config.out_dir. Identical configs produce identical bytes.
VerdictDocument run_experiment(const ExperimentConfig& config);

}  // namespace rovf
