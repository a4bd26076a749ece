#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "etsyn/hybrid/types.hpp"

namespace etsyn::solver {

using hybrid::JumpFamily;
using hybrid::State;

/// One jump family (D_i, G_i). state ∈ D_i ⇔ guard(state) ≥ 0; the map
/// returns the finite set G_i(state) in preference order.
struct JumpFamilyDefinition {
  JumpFamily family = JumpFamily::Transmission;
  std::function<double(const State&)> guard;
  std::function<std::vector<State>(const State&)> map;
};

/// Hybrid system with single-valued flow and two jump families.
/// state ∈ C ⇔ every entry of flow_guards(state) is ≤ 0.
struct SystemDefinition {
  std::size_t dimension = 0;
  std::function<State(const State&)> flow_map;
  std::function<Eigen::VectorXd(const State&)> flow_guards;
  std::array<JumpFamilyDefinition, 2> jumps;
  /// Optional projection back onto the state manifold after each integration step.
  std::function<void(State&)> project;
};

enum class JumpPolicy { TransmissionFirst, SwitchFirst, Random };

[[nodiscard]] std::string to_string(JumpPolicy policy);
/// Accepts "transmission-first", "switch-first", "random". Throws std::invalid_argument.
[[nodiscard]] JumpPolicy jump_policy_from_string(const std::string& name);

struct SolverConfig {
  double dt_max = 1e-3;
  double guard_tol = 1e-9;
  double t_horizon = 60.0;
  std::size_t j_max = 200000;
  std::size_t max_jumps_per_instant = 50;
  JumpPolicy jump_policy = JumpPolicy::SwitchFirst;
  std::uint64_t seed = 0;  // used by JumpPolicy::Random
  bool eager_jump = true;

  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const;
};

/// Bracket width at which guard localization stops.
inline constexpr double kTimeTolerance = 1e-10;

enum class TerminationKind { HorizonReached, JumpBudgetExhausted, DiscreteAccumulation, DeadEnd, NumericalFailure };

[[nodiscard]] std::string to_string(TerminationKind kind);
[[nodiscard]] TerminationKind termination_from_string(const std::string& name);

struct TerminationReason {
  TerminationKind kind = TerminationKind::HorizonReached;
  std::string detail;
};

struct SimulationResult {
  hybrid::HybridArc arc;
  std::vector<hybrid::JumpRecord> jumps;
  TerminationReason termination;
  double wall_seconds = 0.0;
};

[[nodiscard]] SimulationResult simulate(const SystemDefinition& sys, const State& x0,
                                        const SolverConfig& cfg);

class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bisection for the first time a guard becomes nonnegative.
/// Requires guard(t_lo) < 0 ≤ guard(t_hi). Returns a time t with guard(t) ≥ 0
/// and either guard(t) ≤ guard_tol or t - t_lo' ≤ time_tol for the final bracket.
[[nodiscard]] double locate_crossing(const std::function<double(double)>& guard, double t_lo,
                                     double t_hi, double guard_tol, double time_tol = kTimeTolerance);

struct ResolvedJump {
  State state_post;
  JumpFamily family = JumpFamily::Transmission;
};

/// Applies one jump at a state in D. With both families enabled the policy decides.
/// Throws std::logic_error when no family is enabled.
[[nodiscard]] ResolvedJump resolve_jump(const SystemDefinition& sys, const State& state,
                                        JumpPolicy policy, std::mt19937_64& rng);

/// One classical RK4 step of the flow map, followed by the system projection.
[[nodiscard]] State rk4_step(const SystemDefinition& sys, const State& x, double h);

}  // namespace etsyn::solver
