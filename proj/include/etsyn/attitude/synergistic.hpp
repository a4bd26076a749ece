#pragma once

#include <vector>

#include "etsyn/attitude/plant.hpp"

namespace etsyn::attitude {

/// Synergistic controller data for the two-element logic set Q = {0, 1}.
struct SynergisticParams {
  double k1 = 1.0;
  double k2 = 2.0;
  double delta = 2.0;  // synergy gap, 0 < delta < 4 k1
  Mat3 inertia = Eigen::Vector3d(1.0, 2.0, 3.0).asDiagonal();

  /// Throws std::invalid_argument when gains, gap or inertia are inadmissible.
  void validate() const;

  [[nodiscard]] double max_inertia_eigenvalue() const;
};

inline constexpr int kLogicMax = 1;

/// φ(q) = 2q - 1 on Q.
[[nodiscard]] inline double logic_sign(int q) { return 2.0 * q - 1.0; }

/// V0(x, q) = 2 k1 (1 - φ(q) n) + 0.5 ωᵀ J ω.
[[nodiscard]] double lyapunov_v0(const PlantState& x, int q, const SynergisticParams& p);

/// μ(x, q) = V0(x, q) - min_p V0(x, p).
[[nodiscard]] double synergy_gap(const PlantState& x, int q, const SynergisticParams& p);

/// argmin_q V0(x, q) in ascending order. Both values are returned on a tie (n = 0).
[[nodiscard]] std::vector<int> synergistic_targets(const PlantState& x, const SynergisticParams& p);

/// κ_s(x, q) = -k1 φ(q) e - k2 ω.
[[nodiscard]] Vec3 synergistic_feedback(const PlantState& x, int q, const SynergisticParams& p);

/// Level c' of the set A = {V1 ≤ c'} for the |ω| - c regularization:
/// c' = 2 k1 + 0.5 δ + 0.5 λ̄(J) c².
[[nodiscard]] double attractor_level(const SynergisticParams& p, double c);

/// Largest c for which {q n ≥ 1 - c'} is a proper subset of S³ × Q:
/// λ̄(J)^{-1/2} (4 k1 - δ)^{1/2}.
[[nodiscard]] double orientation_control_bound(const SynergisticParams& p);

}  // namespace etsyn::attitude
