#pragma once

#include <stdexcept>

#include <Eigen/Dense>

namespace etsyn::attitude {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat3 = Eigen::Matrix3d;

/// |q| must stay within this band of 1 for the kinematics to be evaluated.
/// Wide enough for the intermediate stages of one RK4 step.
inline constexpr double kQuaternionNormTolerance = 1e-4;

class StateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rigid body attitude state: unit quaternion (scalar first) and body rate.
struct PlantState {
  Vec4 quat = Vec4(1.0, 0.0, 0.0, 0.0);
  Vec3 omega = Vec3::Zero();

  [[nodiscard]] double scalar() const { return quat[0]; }
  [[nodiscard]] Vec3 vector() const { return quat.tail<3>(); }
};

struct PlantDerivative {
  Vec4 quat_dot;
  Vec3 omega_dot;
};

/// S(v) w = v × w.
[[nodiscard]] Mat3 skew(const Vec3& v);

/// E(q) = [-eᵀ; n I + S(e)], so that q̇ = 0.5 E(q) ω.
[[nodiscard]] Eigen::Matrix<double, 4, 3> quaternion_rate_matrix(const Vec4& quat);

/// Rotational dynamics: q̇ = 0.5 E(q) ω, ω̇ = J⁻¹ (S(Jω) ω + u).
/// Throws StateError when |q| is further than kQuaternionNormTolerance from 1.
[[nodiscard]] PlantDerivative plant_flow(const PlantState& x, const Vec3& torque, const Mat3& inertia,
                                         const Mat3& inertia_inverse);

[[nodiscard]] PlantDerivative plant_flow(const PlantState& x, const Vec3& torque, const Mat3& inertia);

}  // namespace etsyn::attitude
