#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "etsyn/experiments/comparison.hpp"
#include "etsyn/hybrid/analytics.hpp"
#include "etsyn/hybrid/log_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;

using namespace etsyn;

int cmd_run(const std::string& config_path, const std::optional<std::string>& out_dir,
            const std::optional<std::uint64_t>& seed, std::size_t parallel, bool quiet) {
  auto cfg = experiments::load_config(config_path);
  if (out_dir) cfg.output_dir = *out_dir;
  if (seed) cfg.rng_seed = *seed;
  const auto batch = experiments::run_comparison(cfg, {parallel, true});
  if (!quiet) std::cout << experiments::emit_report(batch.verdicts);
  for (const auto& r : batch.runs) {
    if (r.termination == solver::TerminationKind::NumericalFailure) {
      std::cerr << "numerical failure: " << r.trigger << "/" << r.run_id << ": " << r.detail << "\n";
    }
  }
  return batch.numerical_failure() ? kExitNumerical : kExitOk;
}

int cmd_analyze(const std::string& log_path, bool csv) {
  const auto log = hybrid::load_jump_log(log_path);
  double t_end = 0.0;
  if (log.summary) {
    t_end = log.summary->t_end;
  } else if (!log.records.empty()) {
    t_end = log.records.back().t;
  }
  for (const auto& r : log.records) t_end = std::max(t_end, r.t);
  const auto domain = hybrid::domain_from_records(log.records, t_end);
  const auto report = hybrid::analyze(domain, log.records, false);
  const std::vector<std::pair<std::string, std::string>> fields = {
      {"delta_t", hybrid::format_double(report.delta_t)},
      {"transmissions", std::to_string(report.transmission_count)},
      {"synergistic", std::to_string(report.synergistic_count)},
      {"max_transmissions_per_instant", std::to_string(report.max_transmissions_per_instant)},
      {"has_dwell", report.has_dwell ? "1" : "0"},
      {"dwell_tau", hybrid::format_double(report.dwell_tau)},
      {"has_weak_dwell", report.has_weak_dwell ? "1" : "0"},
      {"deparam_intervals", std::to_string(report.deparam_interval_lengths.size())},
      {"termination", log.summary ? log.summary->termination : std::string("unknown")}};
  if (csv) {
    for (std::size_t k = 0; k < fields.size(); ++k) std::cout << (k ? "," : "") << fields[k].first;
    std::cout << "\n";
    for (std::size_t k = 0; k < fields.size(); ++k) std::cout << (k ? "," : "") << fields[k].second;
    std::cout << "\n";
  } else {
    for (const auto& [k, v] : fields) std::cout << k << ": " << v << "\n";
  }
  return kExitOk;
}

int cmd_report(const std::vector<std::string>& paths) {
  std::vector<experiments::RunVerdict> verdicts;
  for (const auto& path : paths) {
    std::ifstream in(path);
    if (!in) throw experiments::ConfigError("cannot open '" + path + "'");
    auto part = experiments::read_verdicts(in);
    verdicts.insert(verdicts.end(), part.begin(), part.end());
  }
  std::cout << experiments::emit_report(verdicts);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Event-triggered synergistic attitude control experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::size_t parallel = 1;
  bool quiet = false;
  auto* run = app.add_subcommand("run", "Run the trigger comparison batch");
  run->add_option("config", config_path, "JSON configuration")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "Output directory (overrides output_dir)");
  run->add_option("--seed", seed, "Initial-condition seed (overrides initial_conditions.seed)");
  run->add_option("--parallel", parallel, "Worker threads")->check(CLI::PositiveNumber);
  run->add_flag("--quiet", quiet, "Do not print the verdict table");

  std::string log_path;
  bool csv = false;
  auto* analyze = app.add_subcommand("analyze", "Dwell-time report for a jump log");
  analyze->add_option("log", log_path, "Jump log written by run")->required()->check(CLI::ExistingFile);
  analyze->add_flag("--csv", csv, "Print as CSV");

  std::vector<std::string> verdict_paths;
  auto* report = app.add_subcommand("report", "Verdict table from verdicts.csv files");
  report->add_option("verdicts", verdict_paths, "verdicts.csv files")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) return cmd_run(config_path, out_dir, seed, parallel, quiet);
    if (*analyze) return cmd_analyze(log_path, csv);
    if (*report) return cmd_report(verdict_paths);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}
