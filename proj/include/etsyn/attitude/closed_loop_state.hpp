#pragma once

#include <cstddef>

#include "etsyn/attitude/plant.hpp"
#include "etsyn/hybrid/types.hpp"

namespace etsyn::attitude {

/// ξ = (x_p, q, û, ℓ).
struct ClosedLoopState {
  PlantState plant;
  int q = 1;
  Vec3 u_hat = Vec3::Zero();
  Eigen::VectorXd ell;
};

/// Flat layout used by the solver: [quat(4), omega(3), q, u_hat(3), ell(n_ell)].
namespace layout {
inline constexpr Eigen::Index kQuat = 0;
inline constexpr Eigen::Index kOmega = 4;
inline constexpr Eigen::Index kLogic = 7;
inline constexpr Eigen::Index kUHat = 8;
inline constexpr Eigen::Index kEll = 11;
}  // namespace layout

[[nodiscard]] inline std::size_t state_dimension(std::size_t n_ell) { return layout::kEll + n_ell; }

[[nodiscard]] hybrid::State pack(const ClosedLoopState& xi);

/// Throws std::invalid_argument when the vector is too short or q is not in {0, 1}.
[[nodiscard]] ClosedLoopState unpack(const hybrid::State& v);

/// Reads only the plant block; cheaper than unpack on hot paths.
[[nodiscard]] PlantState plant_of(const hybrid::State& v);
[[nodiscard]] int logic_of(const hybrid::State& v);

}  // namespace etsyn::attitude
