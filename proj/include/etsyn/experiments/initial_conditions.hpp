#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "etsyn/attitude/closed_loop_state.hpp"
#include "etsyn/attitude/synergistic.hpp"
#include "etsyn/solver/solver.hpp"

namespace etsyn::experiments {

/// Uniform unit quaternions (normalized 4-D Gaussian), ω uniform in [-b, b]³, q uniform,
/// û = κ_s(x, q) and ℓ = 0 of size n_ell. Reproducible for a fixed seed.
[[nodiscard]] std::vector<attitude::ClosedLoopState> sample_initial_conditions(
    std::uint64_t seed, std::size_t n, double omega_bound, const attitude::SynergisticParams& p,
    std::size_t n_ell = 0);

struct Preset {
  std::string name;
  attitude::ClosedLoopState state;
  std::optional<solver::JumpPolicy> policy;
  std::optional<std::uint64_t> seed;
};

/// Built-in pathology seeds:
///   gamma1-zero    n = 0.8, ω = 0, q = 1, û = κ_s: γ1 = 0 with nothing left to transmit.
///   zhu-pathology  n = -0.9, ω = 0, q = 1, û = κ_s: in D1 ∩ D2, resolved at random.
///   dynamic-rest   n = 0, e = (1, 0, 0), ω = 0, q = 1, û = κ_s.
/// Throws ConfigError for an unknown name.
[[nodiscard]] Preset make_preset(const std::string& name, const attitude::SynergisticParams& p,
                                 std::size_t n_ell);

[[nodiscard]] std::vector<std::string> preset_names();

/// Seed of the random jump policy shipped with zhu-pathology.
inline constexpr std::uint64_t kZhuPathologySeed = 1;

}  // namespace etsyn::experiments
