#pragma once

#include <array>

#include "etsyn/attitude/trigger.hpp"
#include "etsyn/hybrid/jump_image.hpp"
#include "etsyn/solver/solver.hpp"

namespace etsyn::attitude {

/// Flow: (f_p(x_p, û), q̇ = 0, û̇ = 0, ℓ̇ = f_ℓ).
[[nodiscard]] hybrid::State closed_loop_flow(const hybrid::State& v, const SynergisticParams& p,
                                             const TriggerParams& trigger);

/// G1: û⁺ = κ_s(x_p, q), ℓ⁺ = g_ℓ(ξ).
[[nodiscard]] hybrid::State transmission_jump(const hybrid::State& v, const SynergisticParams& p,
                                              const TriggerParams& trigger);

/// G2: q⁺ ∈ argmin V0(x_p, ·), ascending.
[[nodiscard]] std::vector<hybrid::State> synergistic_jump(const hybrid::State& v, const SynergisticParams& p);

/// Closed loop with C = {γ ≤ 0, μ ≤ δ}, D1 = {γ ≥ 0}, D2 = {μ ≥ δ}.
/// A Dynamic trigger adds ℓ[0] ≤ ell_upper to C, D1 and D2.
/// Throws ConfigError for invalid parameters.
[[nodiscard]] solver::SystemDefinition assemble_closed_loop(const SynergisticParams& p,
                                                            const TriggerParams& trigger);

/// Jump families in the form used by the separation checks.
[[nodiscard]] std::array<hybrid::JumpFamilyData, 2> jump_families(const SynergisticParams& p,
                                                                 const TriggerParams& trigger);

/// Rescales the quaternion block to unit length.
void normalize_quaternion(hybrid::State& v);

}  // namespace etsyn::attitude
