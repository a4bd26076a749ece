#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>

#include "etsyn/attitude/closed_loop_state.hpp"
#include "etsyn/attitude/synergistic.hpp"

namespace etsyn::attitude {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// ϱ(|û - κ_s|) - ϱ̄ with ϱ(s) = s^rho_power.
struct FixedThreshold {
  double rho_power = 1.0;
  double rho_bar = 0.1;
};

/// γ1 alone: transmit as soon as the Lyapunov decrease margin is lost.
struct Gamma1Only {
  double sigma = 0.5;
};

/// γ1 ⊗ (V1 - c).
struct LyapunovZhu {
  double sigma = 0.5;
  double c = 0.3;
};

/// ℓ̄ - ℓ[0] with ℓ̇ = f_ℓ(ξ), ℓ⁺ = g_ℓ(ξ) and ℓ[0] confined to (-∞, ell_upper].
struct Dynamic {
  using Field = std::function<Eigen::VectorXd(const ClosedLoopState&)>;

  double ell_bar = 0.05;
  std::size_t n_ell = 1;
  double ell_upper = hybrid::kInfinity;
  Field flow;
  Field reset;
};

/// γ1 ⊗ (|ω| - c).
struct Proposed {
  double sigma = 0.5;
  double c = 0.3;
};

using TriggerKind = std::variant<FixedThreshold, Gamma1Only, LyapunovZhu, Dynamic, Proposed>;

struct TriggerParams {
  std::string name;
  TriggerKind kind;

  [[nodiscard]] std::size_t n_ell() const;
  [[nodiscard]] std::string kind_name() const;

  /// Throws ConfigError on inadmissible fields.
  void validate() const;
};

/// V1(ξ) = V0(x_p, q).
[[nodiscard]] double lyapunov_v1(const ClosedLoopState& xi, const SynergisticParams& p);

/// γ1 = k1 φ(q) eᵀω + ωᵀû + σ k2 |ω|².
[[nodiscard]] double gamma1(const ClosedLoopState& xi, double sigma, const SynergisticParams& p);

/// Event-triggering function; transmission is enabled when γ ≥ 0.
/// Throws ConfigError when a Dynamic trigger sees an empty ℓ.
[[nodiscard]] double trigger_value(const ClosedLoopState& xi, const TriggerParams& trigger,
                                   const SynergisticParams& p);

/// Non-empty when the Proposed trigger's c is at or beyond orientation_control_bound.
[[nodiscard]] std::optional<std::string> trigger_warning(const TriggerParams& trigger,
                                                         const SynergisticParams& p);

/// f_ℓ ≡ rate, g_ℓ ≡ value (one-dimensional ℓ).
[[nodiscard]] Dynamic::Field constant_field(double value);

/// f_ℓ = -1 + gain · max(0, 1 - V1 / v_floor). Near the target the clock runs backwards.
[[nodiscard]] Dynamic::Field energy_gated_rate(const SynergisticParams& p, double gain, double v_floor);

}  // namespace etsyn::attitude
