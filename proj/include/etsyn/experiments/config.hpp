#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "etsyn/attitude/trigger.hpp"
#include "etsyn/solver/solver.hpp"

namespace etsyn::experiments {

using attitude::ConfigError;

/// Named initial condition with optional solver overrides for its run.
struct PresetRef {
  std::string name;
  std::optional<solver::JumpPolicy> policy;
  std::optional<std::uint64_t> seed;
};

struct TriggerSpec {
  attitude::TriggerParams trigger;
  bool random_runs = true;  // run the shared random initial conditions
  std::vector<PresetRef> presets;
};

struct ExperimentConfig {
  attitude::SynergisticParams params;
  double sigma = 0.5;
  double c = 0.3;  // dead-band used for the attractor level c'
  std::vector<TriggerSpec> triggers;
  solver::SolverConfig solver;
  std::size_t n_initial_conditions = 20;
  std::uint64_t rng_seed = 1;
  double omega_bound = 2.0;
  std::string output_dir = "out";
  std::size_t csv_stride = 10;  // keep every k-th flow sample in time-series CSVs

  /// Throws ConfigError.
  void validate() const;
};

/// Throws ConfigError with the offending key.
[[nodiscard]] ExperimentConfig parse_config(const nlohmann::json& doc);
[[nodiscard]] ExperimentConfig load_config(const std::string& path);

/// Defaults plus the four Table-1 controllers and their presets.
[[nodiscard]] ExperimentConfig default_comparison_config();

}  // namespace etsyn::experiments
