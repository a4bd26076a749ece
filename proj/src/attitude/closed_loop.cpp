#include "etsyn/attitude/closed_loop.hpp"

#include <algorithm>

namespace etsyn::attitude {

namespace {

const Dynamic* dynamic_of(const TriggerParams& trigger) { return std::get_if<Dynamic>(&trigger.kind); }

void check_dimension(const hybrid::State& v, const TriggerParams& trigger) {
  if (static_cast<std::size_t>(v.size()) != state_dimension(trigger.n_ell())) {
    throw ConfigError("closed-loop state has dimension " + std::to_string(v.size()) + ", expected " +
                      std::to_string(state_dimension(trigger.n_ell())));
  }
}

Eigen::VectorXd checked_field(const Dynamic::Field& field, const ClosedLoopState& xi, std::size_t n_ell) {
  Eigen::VectorXd out = field(xi);
  if (static_cast<std::size_t>(out.size()) != n_ell) throw ConfigError("dynamic trigger field has the wrong size");
  return out;
}

}  // namespace

void normalize_quaternion(hybrid::State& v) {
  const double n = v.segment<4>(layout::kQuat).norm();
  if (n > 0.0) v.segment<4>(layout::kQuat) /= n;
}

hybrid::State closed_loop_flow(const hybrid::State& v, const SynergisticParams& p, const TriggerParams& trigger) {
  check_dimension(v, trigger);
  const ClosedLoopState xi = unpack(v);
  const PlantDerivative d = plant_flow(xi.plant, xi.u_hat, p.inertia);
  hybrid::State out = hybrid::State::Zero(v.size());
  out.segment<4>(layout::kQuat) = d.quat_dot;
  out.segment<3>(layout::kOmega) = d.omega_dot;
  if (const auto* dyn = dynamic_of(trigger)) out.tail(dyn->n_ell) = checked_field(dyn->flow, xi, dyn->n_ell);
  return out;
}

hybrid::State transmission_jump(const hybrid::State& v, const SynergisticParams& p, const TriggerParams& trigger) {
  check_dimension(v, trigger);
  const ClosedLoopState xi = unpack(v);
  hybrid::State out = v;
  out.segment<3>(layout::kUHat) = synergistic_feedback(xi.plant, xi.q, p);
  if (const auto* dyn = dynamic_of(trigger)) out.tail(dyn->n_ell) = checked_field(dyn->reset, xi, dyn->n_ell);
  return out;
}

std::vector<hybrid::State> synergistic_jump(const hybrid::State& v, const SynergisticParams& p) {
  std::vector<hybrid::State> out;
  for (int q : synergistic_targets(plant_of(v), p)) {
    out.push_back(v);
    out.back()[layout::kLogic] = q;
  }
  return out;
}

solver::SystemDefinition assemble_closed_loop(const SynergisticParams& p, const TriggerParams& trigger) {
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  trigger.validate();

  const double ell_upper = dynamic_of(trigger) ? dynamic_of(trigger)->ell_upper : hybrid::kInfinity;
  const bool bounded_ell = ell_upper < hybrid::kInfinity;
  // Nonnegative inside the ℓ constraint set.
  const auto ell_margin = [ell_upper, bounded_ell](const hybrid::State& v) {
    return bounded_ell ? ell_upper - v[layout::kEll] : hybrid::kInfinity;
  };
  const auto gamma = [p, trigger](const hybrid::State& v) { return trigger_value(unpack(v), trigger, p); };
  const auto switch_margin = [p](const hybrid::State& v) {
    return synergy_gap(plant_of(v), logic_of(v), p) - p.delta;
  };

  solver::SystemDefinition sys;
  sys.dimension = state_dimension(trigger.n_ell());
  sys.flow_map = [p, trigger](const hybrid::State& v) { return closed_loop_flow(v, p, trigger); };
  sys.flow_guards = [=](const hybrid::State& v) {
    Eigen::VectorXd g(bounded_ell ? 3 : 2);
    g[0] = gamma(v);
    g[1] = switch_margin(v);
    if (bounded_ell) g[2] = -ell_margin(v);
    return g;
  };
  sys.jumps[0] = {hybrid::JumpFamily::Transmission,
                  [=](const hybrid::State& v) { return std::min(gamma(v), ell_margin(v)); },
                  [p, trigger](const hybrid::State& v) { return std::vector{transmission_jump(v, p, trigger)}; }};
  sys.jumps[1] = {hybrid::JumpFamily::Synergistic,
                  [=](const hybrid::State& v) { return std::min(switch_margin(v), ell_margin(v)); },
                  [p](const hybrid::State& v) { return synergistic_jump(v, p); }};
  sys.project = normalize_quaternion;
  return sys;
}

std::array<hybrid::JumpFamilyData, 2> jump_families(const SynergisticParams& p, const TriggerParams& trigger) {
  const auto sys = assemble_closed_loop(p, trigger);
  std::array<hybrid::JumpFamilyData, 2> out;
  for (std::size_t i = 0; i < 2; ++i) {
    const auto& fam = sys.jumps[i];
    out[i] = {fam.map, [guard = fam.guard](const hybrid::State& v) { return guard(v) >= 0.0; }};
  }
  return out;
}

}  // namespace etsyn::attitude
