#include "etsyn/attitude/plant.hpp"

#include <cmath>
#include <sstream>

namespace etsyn::attitude {

Mat3 skew(const Vec3& v) {
  Mat3 s;
  s << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return s;
}

Eigen::Matrix<double, 4, 3> quaternion_rate_matrix(const Vec4& quat) {
  const Vec3 e = quat.tail<3>();
  Eigen::Matrix<double, 4, 3> m;
  m.row(0) = -e.transpose();
  m.bottomRows<3>() = quat[0] * Mat3::Identity() + skew(e);
  return m;
}

PlantDerivative plant_flow(const PlantState& x, const Vec3& torque, const Mat3& inertia,
                           const Mat3& inertia_inverse) {
  const double norm = x.quat.norm();
  if (!(std::abs(norm - 1.0) <= kQuaternionNormTolerance)) {
    std::ostringstream os;
    os << "quaternion norm " << norm << " is not unit";
    throw StateError(os.str());
  }
  const Vec3 momentum = inertia * x.omega;
  return {0.5 * quaternion_rate_matrix(x.quat) * x.omega,
          inertia_inverse * (momentum.cross(x.omega) + torque)};
}

PlantDerivative plant_flow(const PlantState& x, const Vec3& torque, const Mat3& inertia) {
  return plant_flow(x, torque, inertia, inertia.inverse());
}

}  // namespace etsyn::attitude
