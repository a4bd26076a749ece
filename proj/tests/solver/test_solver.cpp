#include <doctest.h>

#include <cmath>
#include <set>

#include "etsyn/solver/solver.hpp"

using namespace etsyn::solver;
using etsyn::hybrid::kInfinity;
using etsyn::hybrid::State;

namespace {

// Identity jump maps with guards that never fire.
JumpFamilyDefinition never(JumpFamily family) {
  return {family, [](const State&) { return -1.0; }, [](const State& v) { return std::vector{v}; }};
}

SystemDefinition constant_flow(double rate, double flow_bound = kInfinity) {
  SystemDefinition sys;
  sys.dimension = 1;
  sys.flow_map = [rate](const State&) { return State::Constant(1, rate); };
  sys.flow_guards = [flow_bound](const State& v) {
    return Eigen::VectorXd::Constant(1, flow_bound == kInfinity ? -1.0 : v[0] - flow_bound);
  };
  sys.jumps = {never(JumpFamily::Transmission), never(JumpFamily::Synergistic)};
  return sys;
}

// ẋ = (x1, -x0) inside C = {x0 ≤ 0.5}; at x0 ≥ 0.5 the jump sets x0 = -0.5.
SystemDefinition reset_oscillator() {
  SystemDefinition sys;
  sys.dimension = 2;
  sys.flow_map = [](const State& v) { return State{{v[1], -v[0]}}; };
  sys.flow_guards = [](const State& v) { return Eigen::VectorXd::Constant(1, v[0] - 0.5); };
  sys.jumps[0] = {JumpFamily::Transmission, [](const State& v) { return v[0] - 0.5; },
                  [](const State& v) { return std::vector{State{{-0.5, v[1]}}}; }};
  sys.jumps[1] = never(JumpFamily::Synergistic);
  return sys;
}

SolverConfig horizon(double t) {
  SolverConfig cfg;
  cfg.t_horizon = t;
  return cfg;
}

}  // namespace

TEST_CASE("locate_crossing examples") {
  CHECK(locate_crossing([](double t) { return t - 0.5; }, 0.0, 1.0, 1e-12) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(locate_crossing([](double t) { return t * t - 0.25; }, 0.0, 1.0, 1e-12) ==
        doctest::Approx(0.5).epsilon(1e-10));
  const double hit = locate_crossing([](double t) { return t - 0.3; }, 0.0, 1.0, 1e-12);
  CHECK(hit - 0.3 >= 0.0);
  CHECK(hit - 0.3 <= 1e-10);
  CHECK_THROWS_AS((void)locate_crossing([](double t) { return t + 1.0; }, 0.0, 1.0, 1e-9), BracketError);
}

TEST_CASE("trivial flow runs to the horizon on one interval") {
  const auto res = simulate(constant_flow(0.0), State::Constant(1, 2.0), horizon(1.0));
  CHECK(res.termination.kind == TerminationKind::HorizonReached);
  REQUIRE(res.arc.domain.size() == 1);
  CHECK(res.arc.domain[0].t_end == 1.0);
  CHECK(res.jumps.empty());
  for (const auto& s : res.arc.samples[0]) CHECK(s.x[0] == 2.0);
  CHECK_NOTHROW(res.arc.validate());
}

TEST_CASE("identity jumps on the whole space accumulate") {
  SystemDefinition sys = constant_flow(1.0);
  sys.jumps[0] = {JumpFamily::Transmission, [](const State&) { return 0.0; },
                  [](const State& v) { return std::vector{v}; }};
  const auto res = simulate(sys, State::Zero(1), horizon(1.0));
  CHECK(res.termination.kind == TerminationKind::DiscreteAccumulation);
  CHECK(res.jumps.size() == SolverConfig{}.max_jumps_per_instant);
  for (const auto& r : res.jumps) CHECK(r.t == 0.0);
}

TEST_CASE("flowing out of C away from D is a dead end") {
  const auto res = simulate(constant_flow(1.0, 1.0), State::Zero(1), horizon(5.0));
  CHECK(res.termination.kind == TerminationKind::DeadEnd);
  CHECK(res.arc.domain.t_end() == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(res.arc.samples.back().back().x[0] <= 1.0 + 1e-9);
}

TEST_CASE("an initial state outside C and D is a dead end at t = 0") {
  const auto res = simulate(constant_flow(1.0, 1.0), State::Constant(1, 2.0), horizon(5.0));
  CHECK(res.termination.kind == TerminationKind::DeadEnd);
  CHECK(res.arc.domain.t_end() == 0.0);
}

TEST_CASE("flow pointing out of C at its boundary is a dead end") {
  const auto res = simulate(constant_flow(1.0, 1.0), State::Constant(1, 1.0), horizon(5.0));
  CHECK(res.termination.kind == TerminationKind::DeadEnd);
}

TEST_CASE("jump budget") {
  SolverConfig cfg = horizon(100.0);
  cfg.j_max = 3;
  const auto res = simulate(reset_oscillator(), State{{0.0, 1.0}}, cfg);
  CHECK(res.termination.kind == TerminationKind::JumpBudgetExhausted);
  CHECK(res.jumps.size() == 3);
}

TEST_CASE("guard localization and sample invariants on the reset oscillator") {
  SolverConfig cfg = horizon(20.0);
  const auto sys = reset_oscillator();
  const auto res = simulate(sys, State{{0.0, 1.0}}, cfg);
  CHECK(res.termination.kind == TerminationKind::HorizonReached);
  REQUIRE(!res.jumps.empty());
  // First crossing of x0 = sin t with 0.5 at t = π/6.
  CHECK(res.jumps[0].t == doctest::Approx(M_PI / 6.0).epsilon(1e-9));
  for (const auto& r : res.jumps) CHECK(sys.jumps[0].guard(r.state_pre) >= -cfg.guard_tol);
  for (const auto& interval : res.arc.samples) {
    for (const auto& s : interval) CHECK(sys.flow_guards(s.x).maxCoeff() <= cfg.guard_tol);
  }
  CHECK_NOTHROW(res.arc.validate());
}

TEST_CASE("halving the step size moves interval endpoints by less than 1e-6") {
  const auto sys = reset_oscillator();
  SolverConfig coarse = horizon(10.0);
  SolverConfig fine = coarse;
  fine.dt_max = coarse.dt_max / 2.0;
  const auto a = simulate(sys, State{{0.0, 1.0}}, coarse);
  const auto b = simulate(sys, State{{0.0, 1.0}}, fine);
  REQUIRE(a.arc.domain.size() == b.arc.domain.size());
  for (std::size_t j = 0; j < a.arc.samples.size(); ++j) {
    CHECK((a.arc.samples[j].back().x - b.arc.samples[j].back().x).norm() < 1e-6);
  }
}

TEST_CASE("resolve_jump follows the policy when both families are enabled") {
  SystemDefinition sys = constant_flow(0.0);
  sys.jumps[0] = {JumpFamily::Transmission, [](const State&) { return 1.0; },
                  [](const State&) { return std::vector<State>{State::Constant(1, 1.0)}; }};
  sys.jumps[1] = {JumpFamily::Synergistic, [](const State&) { return 1.0; },
                  [](const State&) { return std::vector<State>{State::Constant(1, 2.0), State::Constant(1, 3.0)}; }};
  std::mt19937_64 rng(0);
  const State x = State::Zero(1);
  CHECK(resolve_jump(sys, x, JumpPolicy::SwitchFirst, rng).family == JumpFamily::Synergistic);
  CHECK(resolve_jump(sys, x, JumpPolicy::SwitchFirst, rng).state_post[0] == 2.0);
  CHECK(resolve_jump(sys, x, JumpPolicy::TransmissionFirst, rng).family == JumpFamily::Transmission);

  std::set<double> seen;
  for (int i = 0; i < 200; ++i) seen.insert(resolve_jump(sys, x, JumpPolicy::Random, rng).state_post[0]);
  CHECK(seen == std::set<double>{1.0, 2.0, 3.0});

  sys.jumps[0].guard = [](const State&) { return -1.0; };
  sys.jumps[1].guard = [](const State&) { return -1.0; };
  CHECK_THROWS_AS((void)resolve_jump(sys, x, JumpPolicy::SwitchFirst, rng), std::logic_error);
}

TEST_CASE("random policy is reproducible for a fixed seed") {
  SystemDefinition sys = constant_flow(1.0);
  sys.jumps[0] = {JumpFamily::Transmission, [](const State& v) { return v[0] - 0.25; },
                  [](const State&) { return std::vector<State>{State::Zero(1)}; }};
  sys.jumps[1] = {JumpFamily::Synergistic, [](const State& v) { return v[0] - 0.25; },
                  [](const State&) { return std::vector<State>{State::Constant(1, 0.1)}; }};
  SolverConfig cfg = horizon(5.0);
  cfg.jump_policy = JumpPolicy::Random;
  cfg.seed = 42;
  const auto a = simulate(sys, State::Zero(1), cfg);
  const auto b = simulate(sys, State::Zero(1), cfg);
  REQUIRE(a.jumps.size() == b.jumps.size());
  for (std::size_t k = 0; k < a.jumps.size(); ++k) CHECK(a.jumps[k].family == b.jumps[k].family);
}

TEST_CASE("non-finite flow is a numerical failure") {
  SystemDefinition sys = constant_flow(0.0);
  sys.flow_map = [](const State& v) { return State::Constant(1, v[0] * v[0] * 1e300); };
  const auto res = simulate(sys, State::Constant(1, 1.0), horizon(1.0));
  CHECK(res.termination.kind == TerminationKind::NumericalFailure);
}

TEST_CASE("solver configuration validation") {
  SolverConfig cfg;
  cfg.dt_max = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.max_jumps_per_instant = 1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  CHECK(jump_policy_from_string("random") == JumpPolicy::Random);
  CHECK_THROWS_AS((void)jump_policy_from_string("first"), std::invalid_argument);
  CHECK(termination_from_string(to_string(TerminationKind::DeadEnd)) == TerminationKind::DeadEnd);
}
