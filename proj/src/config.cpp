#include <set>
#include <sstream>

#include "rovf/experiments.hpp"

namespace rovf {

namespace {

struct ErrorCollector {
  std::vector<std::string> errors;
  void add(std::string message) { errors.push_back(std::move(message)); }
};

bool get_positive_int(const Json& j, const char* field, int& out, ErrorCollector& errs,
                      long max_value = 1000000000L) {
  const Json& v = j.at(field);
  if (!v.is_number_integer() || v.get<long>() < 1 || v.get<long>() > max_value) {
    std::ostringstream msg;
    msg << field << ": must be an integer in [1, " << max_value << "]";
    errs.add(msg.str());
    return false;
  }
  out = static_cast<int>(v.get<long>());
  return true;
}

bool get_positive_long(const Json& j, const char* field, long& out, ErrorCollector& errs,
                       long min_value = 1) {
  const Json& v = j.at(field);
  if (!v.is_number_integer() || v.get<long>() < min_value) {
    std::ostringstream msg;
    msg << field << ": must be an integer >= " << min_value;
    errs.add(msg.str());
    return false;
  }
  out = v.get<long>();
  return true;
}

std::optional<VectorChoice> parse_vector_choice(const Json& j, ErrorCollector& errs) {
  if (!j.is_object() || !j.contains("mode")) {
    errs.add("x: expected an object with a \"mode\" field");
    return std::nullopt;
  }
  std::string mode = j.at("mode").is_string() ? j.at("mode").get<std::string>() : "";
  VectorChoice choice;
  if (mode == "explicit") {
    choice.mode = VectorChoice::Mode::Explicit;
    if (!j.contains("entries")) {
      errs.add("x: explicit mode requires \"entries\"");
      return std::nullopt;
    }
    try {
      Json wrapper{{"dim", j.at("entries").is_array() ? j.at("entries").size() : 0},
                   {"entries", j.at("entries")}};
      choice.entries = vector_from_json(wrapper);
    } catch (const std::exception& e) {
      errs.add(std::string("x: ") + e.what());
      return std::nullopt;
    }
  } else if (mode == "random-unit") {
    choice.mode = VectorChoice::Mode::RandomUnit;
  } else if (mode == "basis-sweep") {
    choice.mode = VectorChoice::Mode::BasisSweep;
  } else {
    errs.add("x: mode must be one of \"explicit\", \"random-unit\", \"basis-sweep\"");
    return std::nullopt;
  }
  for (const auto& [key, value] : j.items()) {
    if (key != "mode" && key != "entries") errs.add("x: unknown field \"" + key + "\"");
  }
  return choice;
}

std::optional<SystemConfig> parse_system(const Json& j, ErrorCollector& errs) {
  if (!j.is_object()) {
    errs.add("system: expected an object");
    return std::nullopt;
  }
  static const std::set<std::string> allowed{"matrix_file", "matrix",           "rhs",
                                             "solution",    "sampling",         "equivalence_runs"};
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) errs.add("system: unknown field \"" + key + "\"");

  SystemConfig system;
  bool has_file = j.contains("matrix_file");
  bool has_inline = j.contains("matrix");
  if (has_file == has_inline) {
    errs.add("system: exactly one of \"matrix_file\" or \"matrix\" is required");
    return std::nullopt;
  }
  if (has_file) {
    if (!j.at("matrix_file").is_string()) {
      errs.add("system: matrix_file must be a string path");
      return std::nullopt;
    }
    system.matrix_file = j.at("matrix_file").get<std::string>();
  } else {
    try {
      system.matrix = matrix_from_json(j.at("matrix"));
    } catch (const std::exception& e) {
      errs.add(std::string("system: ") + e.what());
      return std::nullopt;
    }
  }
  if (!j.contains("rhs")) {
    errs.add("system: \"rhs\" is required");
    return std::nullopt;
  }
  try {
    system.rhs = vector_from_json(j.at("rhs"));
  } catch (const std::exception& e) {
    errs.add(std::string("system rhs: ") + e.what());
    return std::nullopt;
  }
  if (j.contains("solution")) {
    try {
      system.solution = vector_from_json(j.at("solution"));
    } catch (const std::exception& e) {
      errs.add(std::string("system solution: ") + e.what());
    }
  }
  if (j.contains("sampling")) {
    std::string sampling = j.at("sampling").is_string() ? j.at("sampling").get<std::string>() : "";
    if (sampling == "squared-norm")
      system.sampling = RowSampling::SquaredNorm;
    else if (sampling == "uniform")
      system.sampling = RowSampling::Uniform;
    else
      errs.add("system: sampling must be \"squared-norm\" or \"uniform\"");
  }
  if (j.contains("equivalence_runs")) {
    const Json& runs = j.at("equivalence_runs");
    if (!runs.is_number_integer() || runs.get<long>() < 1 || runs.get<long>() > 10000)
      errs.add("system: equivalence_runs must be an integer in [1, 10000]");
    else
      system.equivalence_runs = static_cast<int>(runs.get<long>());
  }
  if (system.matrix) {
    if (system.rhs.size() != system.matrix->rows())
      errs.add("system: rhs length does not match the matrix row count");
    if (system.solution && system.solution->size() != system.matrix->cols())
      errs.add("system: solution length does not match the matrix column count");
  }
  return system;
}

std::set<std::string> allowed_keys(ExperimentKind kind) {
  std::set<std::string> keys{"kind", "seed", "out", "threads", "full_paths"};
  switch (kind) {
    case ExperimentKind::EnergyGapSweep:
      keys.insert({"pairs", "min_dim", "max_dim"});
      break;
    case ExperimentKind::DilationCheck:
      keys.insert({"cases", "min_dim", "max_dim"});
      break;
    case ExperimentKind::Convergence:
      keys.insert({"sampler", "x", "steps", "trials", "delta"});
      break;
    case ExperimentKind::Parseval:
    case ExperimentKind::Fusion:
      keys.insert({"sampler", "x", "steps", "trials"});
      break;
    case ExperimentKind::Kaczmarz:
      keys.insert({"system", "x", "steps", "trials"});
      break;
    case ExperimentKind::Coercivity:
      keys.insert({"sampler", "mc_samples"});
      break;
  }
  return keys;
}

}  // namespace

ValidationResult validate_config_json(const Json& j) {
  ErrorCollector errs;
  if (!j.is_object()) {
    return {std::nullopt, {"config: top level must be a JSON object"}};
  }
  ExperimentConfig config;

  if (!j.contains("kind") || !j.at("kind").is_string()) {
    errs.add("kind: required, one of lemma2-sweep, dilation-check, convergence, parseval, "
             "fusion, kaczmarz, coercivity");
  } else {
    auto kind = kind_from_token(j.at("kind").get<std::string>());
    if (!kind) {
      errs.add("kind: unknown experiment \"" + j.at("kind").get<std::string>() + "\"");
    } else {
      config.kind = *kind;
    }
  }
  if (!errs.errors.empty()) {
    // Without a valid kind the remaining schema is ambiguous; still check
    // the seed so the two most common mistakes are reported together.
    if (!j.contains("seed")) errs.add("seed required (explicit seeds only, no clock default)");
    return {std::nullopt, errs.errors};
  }

  for (const auto& [key, value] : j.items())
    if (!allowed_keys(config.kind).count(key))
      errs.add("config: unknown field \"" + key + "\" for kind " + kind_token(config.kind));

  if (!j.contains("seed")) {
    errs.add("seed required (explicit seeds only, no clock default)");
  } else if (!j.at("seed").is_number_integer() || j.at("seed").get<long long>() < 0) {
    errs.add("seed: must be a nonnegative integer");
  } else {
    config.seed = j.at("seed").get<std::uint64_t>();
  }

  if (j.contains("out")) {
    if (!j.at("out").is_string() || j.at("out").get<std::string>().empty())
      errs.add("out: must be a nonempty string");
    else
      config.out_dir = j.at("out").get<std::string>();
  }
  if (j.contains("threads")) get_positive_int(j, "threads", config.threads, errs, 1024);
  if (j.contains("full_paths")) {
    if (!j.at("full_paths").is_boolean())
      errs.add("full_paths: must be a boolean");
    else
      config.full_paths = j.at("full_paths").get<bool>();
  }

  bool needs_sampler = config.kind == ExperimentKind::Convergence ||
                       config.kind == ExperimentKind::Parseval ||
                       config.kind == ExperimentKind::Fusion ||
                       config.kind == ExperimentKind::Coercivity;
  if (needs_sampler) {
    if (!j.contains("sampler")) {
      errs.add("sampler: required for kind " + kind_token(config.kind));
    } else {
      try {
        config.sampler = sampler_from_json(j.at("sampler"));
      } catch (const std::exception& e) {
        errs.add(e.what());
      }
    }
  }

  bool needs_trials = config.kind == ExperimentKind::Convergence ||
                      config.kind == ExperimentKind::Parseval ||
                      config.kind == ExperimentKind::Fusion ||
                      config.kind == ExperimentKind::Kaczmarz;
  if (needs_trials) {
    if (j.contains("steps"))
      get_positive_int(j, "steps", config.steps, errs);
    else
      errs.add("steps: required for kind " + kind_token(config.kind));
    if (j.contains("trials"))
      get_positive_long(j, "trials", config.trials, errs);
    else
      errs.add("trials: required for kind " + kind_token(config.kind));
  }

  bool needs_x = config.kind == ExperimentKind::Convergence ||
                 config.kind == ExperimentKind::Parseval ||
                 config.kind == ExperimentKind::Fusion;
  if (j.contains("x")) config.x = parse_vector_choice(j.at("x"), errs);
  if (needs_x && !j.contains("x")) errs.add("x: required for kind " + kind_token(config.kind));

  if (config.x && config.x->mode == VectorChoice::Mode::BasisSweep &&
      config.kind != ExperimentKind::Convergence)
    errs.add("x: basis-sweep mode is only supported for the convergence kind");
  if (config.x && config.x->mode == VectorChoice::Mode::Explicit && config.sampler &&
      config.x->entries.size() != dimension(*config.sampler))
    errs.add("x: explicit entries do not match the sampler dimension");

  if (config.kind == ExperimentKind::Convergence && j.contains("delta")) {
    if (!j.at("delta").is_number() || !(j.at("delta").get<double>() > 0.0))
      errs.add("delta: must be a positive number (relative to ||x0||)");
    else
      config.delta = j.at("delta").get<double>();
  }

  if (config.kind == ExperimentKind::Parseval && config.sampler &&
      !is_projection_valued(*config.sampler))
    errs.add("parseval: the sampler must be projection-valued (every atom idempotent)");
  if (config.kind == ExperimentKind::Fusion && config.sampler &&
      !std::holds_alternative<FusionFrameProjection>(*config.sampler))
    errs.add("fusion: the sampler must have kind fusion_frame");
  if (config.kind == ExperimentKind::Convergence && config.x &&
      config.x->mode == VectorChoice::Mode::BasisSweep && config.sampler &&
      !is_discrete(*config.sampler))
    errs.add("x: basis-sweep requires a discrete sampler (exact coercivity needed)");

  if (config.kind == ExperimentKind::EnergyGapSweep && j.contains("pairs"))
    get_positive_int(j, "pairs", config.pairs, errs);
  if (config.kind == ExperimentKind::DilationCheck && j.contains("cases"))
    get_positive_int(j, "cases", config.cases, errs);
  if (config.kind == ExperimentKind::EnergyGapSweep ||
      config.kind == ExperimentKind::DilationCheck) {
    if (j.contains("min_dim")) get_positive_int(j, "min_dim", config.min_dim, errs, 64);
    if (j.contains("max_dim")) get_positive_int(j, "max_dim", config.max_dim, errs, 64);
    if (config.min_dim > config.max_dim) errs.add("min_dim: must not exceed max_dim");
  }

  if (config.kind == ExperimentKind::Coercivity && j.contains("mc_samples")) {
    long samples = 0;
    if (get_positive_long(j, "mc_samples", samples, errs, 100)) config.mc_samples = samples;
  }

  if (config.kind == ExperimentKind::Kaczmarz) {
    if (!j.contains("system"))
      errs.add("system: required for kind kaczmarz");
    else
      config.system = parse_system(j.at("system"), errs);
    if (config.system && config.system->matrix && config.x &&
        config.x->mode == VectorChoice::Mode::Explicit &&
        config.x->entries.size() != config.system->matrix->cols())
      errs.add("x: explicit entries do not match the system column count");
  }

  if (!errs.errors.empty()) return {std::nullopt, errs.errors};
  return {config, {}};
}

ValidationResult validate_config(const std::string& raw_text) {
  Json j = Json::parse(raw_text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded())
    return {std::nullopt, {"config: not valid JSON"}};
  return validate_config_json(j);
}

Json config_to_json(const ExperimentConfig& config) {
  Json j{{"kind", kind_token(config.kind)},
         {"seed", config.seed},
         {"out", config.out_dir},
         {"threads", config.threads}};
  if (config.full_paths) j["full_paths"] = true;
  if (config.sampler) j["sampler"] = sampler_to_json(*config.sampler);
  if (config.x) {
    Json x{{"mode", config.x->mode == VectorChoice::Mode::Explicit    ? "explicit"
                    : config.x->mode == VectorChoice::Mode::RandomUnit ? "random-unit"
                                                                       : "basis-sweep"}};
    if (config.x->mode == VectorChoice::Mode::Explicit) {
      Json entries = Json::array();
      for (Index i = 0; i < config.x->entries.size(); ++i)
        entries.push_back(config.x->entries[i]);
      x["entries"] = std::move(entries);
    }
    j["x"] = std::move(x);
  }
  switch (config.kind) {
    case ExperimentKind::EnergyGapSweep:
      j["pairs"] = config.pairs;
      j["min_dim"] = config.min_dim;
      j["max_dim"] = config.max_dim;
      break;
    case ExperimentKind::DilationCheck:
      j["cases"] = config.cases;
      j["min_dim"] = config.min_dim;
      j["max_dim"] = config.max_dim;
      break;
    case ExperimentKind::Convergence:
      j["steps"] = config.steps;
      j["trials"] = config.trials;
      j["delta"] = config.delta;
      break;
    case ExperimentKind::Parseval:
    case ExperimentKind::Fusion:
      j["steps"] = config.steps;
      j["trials"] = config.trials;
      break;
    case ExperimentKind::Coercivity:
      j["mc_samples"] = config.mc_samples;
      break;
    case ExperimentKind::Kaczmarz: {
      j["steps"] = config.steps;
      j["trials"] = config.trials;
      Json system;
      if (config.system->matrix_file) system["matrix_file"] = *config.system->matrix_file;
      if (config.system->matrix) system["matrix"] = matrix_to_json(*config.system->matrix);
      system["rhs"] = vector_to_json(config.system->rhs);
      if (config.system->solution) system["solution"] = vector_to_json(*config.system->solution);
      system["sampling"] =
          config.system->sampling == RowSampling::SquaredNorm ? "squared-norm" : "uniform";
      system["equivalence_runs"] = config.system->equivalence_runs;
      j["system"] = std::move(system);
      break;
    }
  }
  return j;
}

}  // namespace rovf
