#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "etsyn/attitude/closed_loop_state.hpp"
#include "etsyn/experiments/config.hpp"

namespace etsyn::experiments {

/// One trigger × initial-condition simulation.
struct Cell {
  std::size_t trigger_index = 0;
  std::string run_id;  // "ic03" or the preset name
  attitude::ClosedLoopState initial;
  solver::SolverConfig solver;
};

struct RunOutcome {
  std::string trigger;
  std::string run_id;
  solver::TerminationKind termination = solver::TerminationKind::HorizonReached;
  std::string detail;
  double t_end = 0.0;
  std::size_t j_end = 0;
  std::size_t transmissions = 0;
  std::size_t synergistic = 0;
  std::size_t max_transmissions_per_instant = 0;
  double delta_t = hybrid::kInfinity;
  bool gas_reached = false;
  double v1_final = 0.0;
  double wall_seconds = 0.0;
};

struct CellResult {
  RunOutcome outcome;
  solver::SimulationResult simulation;
};

enum class Completeness { Complete, DiscreteAccumulation, Budget, DeadEnd, NumericalFailure };

[[nodiscard]] std::string to_string(Completeness c);
[[nodiscard]] Completeness completeness_from_string(const std::string& name);

struct RunVerdict {
  std::string trigger_name;
  std::string kind;
  Completeness completeness = Completeness::Complete;
  bool gas_reached = false;
  double min_inter_transmission = hybrid::kInfinity;
  bool dwell_transmission = true;
  std::size_t runs = 0;

  /// Table-1 "completeness of maximal solutions": no run stopped short of the horizon
  /// except by a complete discrete tail.
  [[nodiscard]] bool complete() const;
};

/// Shared random ICs for every trigger with random_runs, then each trigger's presets.
[[nodiscard]] std::vector<Cell> plan_cells(const ExperimentConfig& cfg);

[[nodiscard]] CellResult run_cell(const ExperimentConfig& cfg, const Cell& cell);

/// HorizonReached and V1 ≤ c' at every sample with t ≥ 0.9 · horizon.
[[nodiscard]] bool gas_reached(const solver::SimulationResult& sim, const attitude::SynergisticParams& p,
                               double c_prime, double horizon);

/// Worst termination across runs; dwell ⇔ min Δt > 0 over runs with two or more transmissions.
[[nodiscard]] std::vector<RunVerdict> aggregate(const ExperimentConfig& cfg, std::span<const RunOutcome> runs);

struct BatchOptions {
  std::size_t parallel = 1;
  bool write_outputs = true;
};

struct BatchResult {
  std::vector<RunOutcome> runs;
  std::vector<RunVerdict> verdicts;
  [[nodiscard]] bool numerical_failure() const;
};

/// Runs every cell, writing per-run CSVs and jump logs under output_dir/<trigger>/ and
/// runs.csv, verdicts.csv, report.txt at the top. Throws std::runtime_error on I/O failure.
[[nodiscard]] BatchResult run_comparison(const ExperimentConfig& cfg, const BatchOptions& options = {});

void write_runs(std::ostream& out, std::span<const RunOutcome> runs);
void write_verdicts(std::ostream& out, std::span<const RunVerdict> verdicts);
/// Throws MalformedLogError with the offending line number.
[[nodiscard]] std::vector<RunVerdict> read_verdicts(std::istream& in);

/// One row per trigger with ✓/✗ per Table-1 column. Throws ConfigError when empty.
[[nodiscard]] std::string emit_report(std::span<const RunVerdict> verdicts);

}  // namespace etsyn::experiments
