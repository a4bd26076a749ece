#include "etsyn/experiments/comparison.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "etsyn/attitude/closed_loop.hpp"
#include "etsyn/experiments/csv_io.hpp"
#include "etsyn/experiments/initial_conditions.hpp"
#include "etsyn/hybrid/analytics.hpp"
#include "etsyn/hybrid/log_io.hpp"

namespace etsyn::experiments {

namespace fs = std::filesystem;
using hybrid::format_double;
using solver::TerminationKind;

std::string to_string(Completeness c) {
  switch (c) {
    case Completeness::Complete:
      return "Complete";
    case Completeness::DiscreteAccumulation:
      return "DiscreteAccumulation";
    case Completeness::Budget:
      return "Budget";
    case Completeness::DeadEnd:
      return "DeadEnd";
    case Completeness::NumericalFailure:
      return "NumericalFailure";
  }
  return "?";
}

Completeness completeness_from_string(const std::string& name) {
  for (auto c : {Completeness::Complete, Completeness::DiscreteAccumulation, Completeness::Budget,
                 Completeness::DeadEnd, Completeness::NumericalFailure}) {
    if (to_string(c) == name) return c;
  }
  throw std::invalid_argument("unknown completeness '" + name + "'");
}

bool RunVerdict::complete() const {
  return completeness == Completeness::Complete || completeness == Completeness::DiscreteAccumulation;
}

bool BatchResult::numerical_failure() const {
  return std::ranges::any_of(runs, [](const RunOutcome& r) { return r.termination == TerminationKind::NumericalFailure; });
}

namespace {

Completeness completeness_of(TerminationKind kind) {
  switch (kind) {
    case TerminationKind::HorizonReached:
      return Completeness::Complete;
    case TerminationKind::DiscreteAccumulation:
      return Completeness::DiscreteAccumulation;
    case TerminationKind::JumpBudgetExhausted:
      return Completeness::Budget;
    case TerminationKind::DeadEnd:
      return Completeness::DeadEnd;
    case TerminationKind::NumericalFailure:
      return Completeness::NumericalFailure;
  }
  return Completeness::NumericalFailure;
}

std::string safe_name(const std::string& name) {
  std::string out = name;
  for (char& ch : out) {
    const bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') || ch == '-' ||
                    ch == '_' || ch == '.';
    if (!ok) ch = '_';
  }
  return out;
}

std::string run_label(std::size_t k) {
  std::ostringstream os;
  os << "ic" << std::setw(2) << std::setfill('0') << k;
  return os.str();
}

template <class Write>
void write_file(const fs::path& path, Write&& write) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  write(out);
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

void write_cell_outputs(const ExperimentConfig& cfg, const Cell& cell, const CellResult& result) {
  const auto& trigger = cfg.triggers[cell.trigger_index].trigger;
  const fs::path dir = fs::path(cfg.output_dir) / safe_name(trigger.name);
  const auto& sim = result.simulation;
  write_file(dir / (cell.run_id + ".timeseries.csv"),
             [&](std::ostream& out) { write_timeseries(out, sim.arc, sim.jumps, cfg.params, trigger, cfg.csv_stride); });
  write_file(dir / (cell.run_id + ".intertx.csv"), [&](std::ostream& out) {
    const auto rows = inter_transmissions(sim.jumps);
    write_inter_transmissions(out, rows);
  });
  hybrid::JumpLog log{sim.arc.dimension, sim.jumps,
                      hybrid::RunSummary{solver::to_string(sim.termination.kind), result.outcome.t_end,
                                         result.outcome.j_end, result.outcome.transmissions,
                                         result.outcome.synergistic, sim.wall_seconds}};
  hybrid::save_jump_log((dir / (cell.run_id + ".jumps.log")).string(), log);
}

}  // namespace

std::vector<Cell> plan_cells(const ExperimentConfig& cfg) {
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < cfg.triggers.size(); ++i) {
    const auto& spec = cfg.triggers[i];
    const std::size_t n_ell = spec.trigger.n_ell();
    if (spec.random_runs) {
      const auto ics = sample_initial_conditions(cfg.rng_seed, cfg.n_initial_conditions, cfg.omega_bound, cfg.params,
                                                 n_ell);
      for (std::size_t k = 0; k < ics.size(); ++k) cells.push_back({i, run_label(k), ics[k], cfg.solver});
    }
    for (const auto& ref : spec.presets) {
      Preset preset = make_preset(ref.name, cfg.params, n_ell);
      Cell cell{i, preset.name, std::move(preset.state), cfg.solver};
      if (auto policy = ref.policy ? ref.policy : preset.policy) cell.solver.jump_policy = *policy;
      if (auto seed = ref.seed ? ref.seed : preset.seed) cell.solver.seed = *seed;
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

bool gas_reached(const solver::SimulationResult& sim, const attitude::SynergisticParams& p, double c_prime,
                 double horizon) {
  if (sim.termination.kind != TerminationKind::HorizonReached) return false;
  const double from = 0.9 * horizon;
  for (const auto& interval : sim.arc.samples) {
    for (const auto& s : interval) {
      if (s.t >= from && attitude::lyapunov_v0(attitude::plant_of(s.x), attitude::logic_of(s.x), p) > c_prime) {
        return false;
      }
    }
  }
  return true;
}

CellResult run_cell(const ExperimentConfig& cfg, const Cell& cell) {
  const auto& trigger = cfg.triggers.at(cell.trigger_index).trigger;
  const auto sys = attitude::assemble_closed_loop(cfg.params, trigger);
  CellResult result;
  result.simulation = solver::simulate(sys, attitude::pack(cell.initial), cell.solver);
  const auto& sim = result.simulation;

  RunOutcome& o = result.outcome;
  o.trigger = trigger.name;
  o.run_id = cell.run_id;
  o.termination = sim.termination.kind;
  o.detail = sim.termination.detail;
  o.t_end = sim.arc.domain.t_end();
  o.j_end = sim.arc.domain.j_end();
  const auto sets = hybrid::classify_jumps(sim.jumps);
  o.transmissions = sets.transmission.size();
  o.synergistic = sets.synergistic.size();
  o.max_transmissions_per_instant = hybrid::max_transmissions_per_instant(sim.jumps);
  o.delta_t = hybrid::delta_t(sim.jumps);
  o.gas_reached = gas_reached(sim, cfg.params, attitude::attractor_level(cfg.params, cfg.c), cell.solver.t_horizon);
  const auto& last = sim.arc.samples.back();
  if (!last.empty()) o.v1_final = attitude::lyapunov_v0(attitude::plant_of(last.back().x), attitude::logic_of(last.back().x), cfg.params);
  o.wall_seconds = sim.wall_seconds;
  return result;
}

std::vector<RunVerdict> aggregate(const ExperimentConfig& cfg, std::span<const RunOutcome> runs) {
  std::vector<RunVerdict> verdicts;
  for (const auto& spec : cfg.triggers) {
    RunVerdict v;
    v.trigger_name = spec.trigger.name;
    v.kind = spec.trigger.kind_name();
    v.gas_reached = true;
    for (const auto& r : runs) {
      if (r.trigger != v.trigger_name) continue;
      ++v.runs;
      v.completeness = std::max(v.completeness, completeness_of(r.termination));
      v.gas_reached = v.gas_reached && r.gas_reached;
      v.min_inter_transmission = std::min(v.min_inter_transmission, r.delta_t);
    }
    if (v.runs == 0) v.gas_reached = false;
    v.dwell_transmission = v.min_inter_transmission > 0.0;
    verdicts.push_back(std::move(v));
  }
  return verdicts;
}

BatchResult run_comparison(const ExperimentConfig& cfg, const BatchOptions& options) {
  cfg.validate();
  for (const auto& spec : cfg.triggers) {
    if (auto warning = attitude::trigger_warning(spec.trigger, cfg.params)) {
      std::fprintf(stderr, "warning: %s\n", warning->c_str());
    }
  }
  const auto cells = plan_cells(cfg);
  if (options.write_outputs) {
    std::error_code ec;
    for (const auto& spec : cfg.triggers) {
      fs::create_directories(fs::path(cfg.output_dir) / safe_name(spec.trigger.name), ec);
      if (ec) throw std::runtime_error("cannot create output directory: " + ec.message());
    }
  }

  BatchResult batch;
  batch.runs.resize(cells.size());
  std::vector<std::string> errors(cells.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t k = next++; k < cells.size(); k = next++) {
      try {
        const CellResult result = run_cell(cfg, cells[k]);
        if (options.write_outputs) write_cell_outputs(cfg, cells[k], result);
        batch.runs[k] = result.outcome;
      } catch (const std::exception& e) {
        errors[k] = e.what();
      }
    }
  };
  const std::size_t n_threads = std::clamp<std::size_t>(options.parallel, 1, std::max<std::size_t>(cells.size(), 1));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (!e.empty()) throw std::runtime_error(e);
  }

  batch.verdicts = aggregate(cfg, batch.runs);
  if (options.write_outputs) {
    const fs::path dir(cfg.output_dir);
    write_file(dir / "runs.csv", [&](std::ostream& out) { write_runs(out, batch.runs); });
    write_file(dir / "verdicts.csv", [&](std::ostream& out) { write_verdicts(out, batch.verdicts); });
    write_file(dir / "report.txt", [&](std::ostream& out) { out << emit_report(batch.verdicts); });
  }
  return batch;
}

void write_runs(std::ostream& out, std::span<const RunOutcome> runs) {
  out << "trigger,run,termination,t_end,j_end,transmissions,synergistic,max_tx_per_instant,delta_t,gas_reached,"
         "v1_final,wall_s\n";
  for (const auto& r : runs) {
    out << r.trigger << ',' << r.run_id << ',' << solver::to_string(r.termination) << ',' << format_double(r.t_end)
        << ',' << r.j_end << ',' << r.transmissions << ',' << r.synergistic << ',' << r.max_transmissions_per_instant
        << ',' << format_double(r.delta_t) << ',' << (r.gas_reached ? 1 : 0) << ',' << format_double(r.v1_final)
        << ',' << format_double(r.wall_seconds) << '\n';
  }
}

void write_verdicts(std::ostream& out, std::span<const RunVerdict> verdicts) {
  out << kVerdictMagic << '\n'
      << "trigger,kind,completeness,gas_reached,min_inter_transmission,dwell_transmission,runs\n";
  for (const auto& v : verdicts) {
    out << v.trigger_name << ',' << v.kind << ',' << to_string(v.completeness) << ',' << (v.gas_reached ? 1 : 0)
        << ',' << format_double(v.min_inter_transmission) << ',' << (v.dwell_transmission ? 1 : 0) << ',' << v.runs
        << '\n';
  }
}

std::vector<RunVerdict> read_verdicts(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  const auto fail = [&](const std::string& what) -> void {
    throw hybrid::MalformedLogError("line " + std::to_string(line_no) + ": " + what);
  };
  ++line_no;
  if (!std::getline(in, line) || line != kVerdictMagic) fail("expected '" + std::string(kVerdictMagic) + "'");
  ++line_no;
  if (!std::getline(in, line) || line.rfind("trigger,", 0) != 0) fail("expected the column header");

  std::vector<RunVerdict> out;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string item; std::getline(ss, item, ',');) f.push_back(item);
    if (f.size() != 7) fail("expected 7 fields");
    const auto flag = [&](const std::string& s) {
      if (s != "0" && s != "1") fail("expected 0 or 1, got '" + s + "'");
      return s == "1";
    };
    RunVerdict v;
    v.trigger_name = f[0];
    v.kind = f[1];
    try {
      v.completeness = completeness_from_string(f[2]);
      v.min_inter_transmission = hybrid::parse_double(f[4]);
      v.runs = static_cast<std::size_t>(std::stoull(f[6]));
    } catch (const std::exception& e) {
      fail(e.what());
    }
    v.gas_reached = flag(f[3]);
    v.dwell_transmission = flag(f[5]);
    out.push_back(std::move(v));
  }
  return out;
}

std::string emit_report(std::span<const RunVerdict> verdicts) {
  if (verdicts.empty()) throw ConfigError("report needs at least one verdict");
  const auto mark = [](bool ok) { return ok ? "✓" : "✗"; };
  const auto brief = [](double v) {
    std::ostringstream b;
    b << std::setprecision(6) << v;
    return b.str();
  };
  std::ostringstream os;
  os << std::left << std::setw(16) << "trigger" << std::setw(18) << "kind" << std::setw(14) << "completeness"
     << std::setw(6) << "GAS" << std::setw(8) << "dwell" << std::setw(16) << "min_inter_tx" << std::setw(22)
     << "termination" << "runs\n";
  for (const auto& v : verdicts) {
    // ✓ and ✗ are three bytes wide in UTF-8 but one column on screen.
    os << std::left << std::setw(16) << v.trigger_name << std::setw(18) << v.kind << mark(v.complete())
       << std::string(13, ' ') << mark(v.gas_reached) << std::string(5, ' ') << mark(v.dwell_transmission)
       << std::string(7, ' ') << std::setw(16) << brief(v.min_inter_transmission) << std::setw(22)
       << to_string(v.completeness) << v.runs << '\n';
  }
  return os.str();
}

}  // namespace etsyn::experiments
