#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "etsyn/experiments/comparison.hpp"
#include "etsyn/experiments/initial_conditions.hpp"

using namespace etsyn::experiments;
using etsyn::solver::TerminationKind;
using nlohmann::json;

namespace {

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("etsyn_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

RunVerdict verdict(std::string name, Completeness c, bool gas, double min_dt) {
  RunVerdict v;
  v.trigger_name = std::move(name);
  v.kind = "proposed";
  v.completeness = c;
  v.gas_reached = gas;
  v.min_inter_transmission = min_dt;
  v.dwell_transmission = min_dt > 0.0;
  v.runs = 3;
  return v;
}

std::size_t transmissions(const etsyn::solver::SimulationResult& sim) {
  std::size_t n = 0;
  for (const auto& r : sim.jumps) n += r.family == etsyn::hybrid::JumpFamily::Transmission ? 1 : 0;
  return n;
}

}  // namespace

TEST_CASE("completeness names round trip") {
  for (auto c : {Completeness::Complete, Completeness::DiscreteAccumulation, Completeness::Budget,
                 Completeness::DeadEnd, Completeness::NumericalFailure}) {
    CHECK(completeness_from_string(to_string(c)) == c);
  }
  CHECK_THROWS((void)completeness_from_string("finished"));
}

TEST_CASE("aggregate takes the worst run") {
  const auto cfg = parse_config(json::parse(R"({"triggers": [{"name": "a", "kind": "proposed"}]})"));
  std::vector<RunOutcome> runs(3);
  for (auto& r : runs) {
    r.trigger = "a";
    r.gas_reached = true;
    r.delta_t = 0.5;
  }
  runs[1].delta_t = 0.2;
  auto v = aggregate(cfg, runs);
  REQUIRE(v.size() == 1);
  CHECK(v[0].completeness == Completeness::Complete);
  CHECK(v[0].gas_reached);
  CHECK(v[0].min_inter_transmission == 0.2);
  CHECK(v[0].dwell_transmission);
  CHECK(v[0].runs == 3);

  runs[2].termination = TerminationKind::DiscreteAccumulation;
  runs[2].gas_reached = false;
  runs[2].delta_t = 0.0;
  v = aggregate(cfg, runs);
  CHECK(v[0].completeness == Completeness::DiscreteAccumulation);
  CHECK(v[0].complete());
  CHECK_FALSE(v[0].gas_reached);
  CHECK_FALSE(v[0].dwell_transmission);

  runs[0].termination = TerminationKind::DeadEnd;
  v = aggregate(cfg, runs);
  CHECK(v[0].completeness == Completeness::DeadEnd);
  CHECK_FALSE(v[0].complete());
}

TEST_CASE("verdict CSV round trip and report") {
  const std::vector<RunVerdict> verdicts = {verdict("ours", Completeness::Complete, true, 0.396),
                                            verdict("other", Completeness::DeadEnd, false, 0.0)};
  std::stringstream buf;
  write_verdicts(buf, verdicts);
  const auto back = read_verdicts(buf);
  REQUIRE(back.size() == 2);
  for (std::size_t k = 0; k < 2; ++k) {
    CHECK(back[k].trigger_name == verdicts[k].trigger_name);
    CHECK(back[k].kind == verdicts[k].kind);
    CHECK(back[k].completeness == verdicts[k].completeness);
    CHECK(back[k].gas_reached == verdicts[k].gas_reached);
    CHECK(back[k].min_inter_transmission == verdicts[k].min_inter_transmission);
    CHECK(back[k].dwell_transmission == verdicts[k].dwell_transmission);
    CHECK(back[k].runs == verdicts[k].runs);
  }

  const std::vector<RunVerdict> single = {verdicts[0]};
  const auto report = emit_report(single);
  std::size_t ticks = 0;
  for (std::size_t pos = report.find("✓"); pos != std::string::npos; pos = report.find("✓", pos + 1)) ++ticks;
  CHECK(ticks == 3);
  CHECK(report.find("✗") == std::string::npos);
  CHECK(report.find("ours") != std::string::npos);
  CHECK_THROWS_AS((void)emit_report(std::vector<RunVerdict>{}), ConfigError);

  std::istringstream wrong("# not verdicts\n");
  CHECK_THROWS_AS((void)read_verdicts(wrong), etsyn::hybrid::MalformedLogError);
}

TEST_CASE("plan_cells shares random initial conditions and appends presets") {
  const auto cfg = parse_config(json::parse(R"({
    "initial_conditions": {"count": 4},
    "triggers": [{"name": "a", "kind": "proposed"},
                 {"name": "b", "kind": "lyapunov-zhu", "presets": ["zhu-pathology"]},
                 {"name": "c", "kind": "gamma1-only", "random_runs": false, "presets": ["gamma1-zero"]}]})"));
  const auto cells = plan_cells(cfg);
  REQUIRE(cells.size() == 4 + 5 + 1);
  CHECK(cells[0].initial.plant.quat == cells[4].initial.plant.quat);
  std::size_t zhu = 0;
  for (const auto& c : cells) {
    if (c.run_id == "zhu-pathology") {
      ++zhu;
      CHECK(c.solver.jump_policy == etsyn::solver::JumpPolicy::Random);
      CHECK(c.solver.seed == kZhuPathologySeed);
    }
  }
  CHECK(zhu == 1);
  CHECK(cells.back().run_id == "gamma1-zero");
}

TEST_CASE("batch run writes every artifact") {
  const auto dir = scratch_dir("batch");
  auto cfg = parse_config(json::parse(R"({
    "solver": {"horizon": 5},
    "initial_conditions": {"count": 2},
    "triggers": [{"name": "ours", "kind": "proposed"}]})"));
  cfg.output_dir = dir.string();
  const auto batch = run_comparison(cfg, {2, true});
  CHECK(batch.runs.size() == 2);
  CHECK_FALSE(batch.numerical_failure());
  for (const char* f : {"runs.csv", "verdicts.csv", "report.txt", "ours/ic00.timeseries.csv",
                        "ours/ic00.intertx.csv", "ours/ic00.jumps.log", "ours/ic01.jumps.log"}) {
    CHECK_MESSAGE(std::filesystem::exists(dir / f), f);
  }
  std::ifstream in(dir / "verdicts.csv");
  const auto verdicts = read_verdicts(in);
  REQUIRE(verdicts.size() == 1);
  CHECK(verdicts[0].trigger_name == "ours");
  std::filesystem::remove_all(dir);
}

TEST_CASE("parallel and sequential batches agree") {
  auto cfg = parse_config(json::parse(R"({
    "solver": {"horizon": 5},
    "initial_conditions": {"count": 3},
    "triggers": [{"name": "ours", "kind": "proposed"}, {"name": "zhu", "kind": "lyapunov-zhu"}]})"));
  const auto seq = run_comparison(cfg, {1, false});
  const auto par = run_comparison(cfg, {4, false});
  REQUIRE(seq.runs.size() == par.runs.size());
  for (std::size_t k = 0; k < seq.runs.size(); ++k) {
    CHECK(seq.runs[k].run_id == par.runs[k].run_id);
    CHECK(seq.runs[k].j_end == par.runs[k].j_end);
    CHECK(seq.runs[k].v1_final == par.runs[k].v1_final);
  }
}

TEST_CASE("dwell verdict of the proposed trigger survives halving the step") {
  auto cfg = parse_config(json::parse(R"({
    "solver": {"horizon": 20},
    "initial_conditions": {"count": 5},
    "triggers": [{"name": "ours", "kind": "proposed"}]})"));
  const auto coarse = run_comparison(cfg, {4, false});
  cfg.solver.dt_max /= 2.0;
  const auto fine = run_comparison(cfg, {4, false});
  REQUIRE(coarse.verdicts.size() == 1);
  REQUIRE(fine.verdicts.size() == 1);
  CHECK(coarse.verdicts[0].dwell_transmission);
  CHECK(fine.verdicts[0].dwell_transmission == coarse.verdicts[0].dwell_transmission);
  CHECK(fine.verdicts[0].min_inter_transmission ==
        doctest::Approx(coarse.verdicts[0].min_inter_transmission).epsilon(0.2));
}

// Observed not to hold: below c the held torque drives |ω| back over c, and the period of
// that transmit-and-hold cycle is not monotone in c. Kept visible as an expected failure.
TEST_CASE("a larger rate threshold never adds transmissions" * doctest::may_fail()) {
  const auto base = default_comparison_config();
  const auto ics = sample_initial_conditions(base.rng_seed, base.n_initial_conditions, base.omega_bound, base.params);
  std::size_t violations = 0;
  for (std::size_t k = 0; k < ics.size(); ++k) {
    std::size_t previous = static_cast<std::size_t>(-1);
    for (double c : {0.1, 0.3, 0.6}) {
      auto cfg = parse_config(json::parse(R"({"triggers": [{"name": "ours", "kind": "proposed"}]})"));
      std::get<etsyn::attitude::Proposed>(cfg.triggers[0].trigger.kind).c = c;
      Cell cell;
      cell.run_id = "ic";
      cell.initial = ics[k];
      cell.solver = cfg.solver;
      const auto result = run_cell(cfg, cell);
      REQUIRE(result.outcome.termination == TerminationKind::HorizonReached);
      const std::size_t n = transmissions(result.simulation);
      if (n > previous) ++violations;
      previous = n;
    }
  }
  CHECK(violations == 0);
}

TEST_CASE("command line exit codes") {
  const auto dir = scratch_dir("cli");
  const std::string cli = ETSYN_CLI_PATH;
  const auto status = [](const std::string& cmd) {
    const int raw = std::system((cmd + " >/dev/null 2>&1").c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  {
    std::ofstream bad(dir / "bad.json");
    bad << R"({"triggers": []})";
  }
  {
    std::ofstream good(dir / "good.json");
    good << R"({"solver": {"horizon": 2}, "initial_conditions": {"count": 1},
                "triggers": [{"name": "ours", "kind": "proposed"}]})";
  }
  CHECK(status(cli + " run " + (dir / "bad.json").string()) == 1);
  CHECK(status(cli + " run " + (dir / "missing.json").string()) == 1);
  CHECK(status(cli + " run --quiet --out " + (dir / "out").string() + " " + (dir / "good.json").string()) == 0);
  CHECK(status(cli + " analyze " + (dir / "out" / "ours" / "ic00.jumps.log").string()) == 0);
  CHECK(status(cli + " report " + (dir / "out" / "verdicts.csv").string()) == 0);
  CHECK(status(cli + " report " + (dir / "bad.json").string()) == 1);
  std::filesystem::remove_all(dir);
}
