#include "etsyn/attitude/synergistic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace etsyn::attitude {

void SynergisticParams::validate() const {
  if (!(k1 > 0.0) || !(k2 > 0.0)) throw std::invalid_argument("gains k1, k2 must be positive");
  if (!(delta > 0.0 && delta < 4.0 * k1)) throw std::invalid_argument("delta must lie in (0, 4 k1)");
  if (!inertia.allFinite() || !inertia.isApprox(inertia.transpose(), 1e-12)) {
    throw std::invalid_argument("inertia must be symmetric");
  }
  if (Eigen::LLT<Mat3>(inertia).info() != Eigen::Success) {
    throw std::invalid_argument("inertia must be positive definite");
  }
}

double SynergisticParams::max_inertia_eigenvalue() const {
  return Eigen::SelfAdjointEigenSolver<Mat3>(inertia, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
}

double lyapunov_v0(const PlantState& x, int q, const SynergisticParams& p) {
  return 2.0 * p.k1 * (1.0 - logic_sign(q) * x.scalar()) + 0.5 * x.omega.dot(p.inertia * x.omega);
}

double synergy_gap(const PlantState& x, int q, const SynergisticParams& p) {
  double best = lyapunov_v0(x, 0, p);
  for (int r = 1; r <= kLogicMax; ++r) best = std::min(best, lyapunov_v0(x, r, p));
  return lyapunov_v0(x, q, p) - best;
}

std::vector<int> synergistic_targets(const PlantState& x, const SynergisticParams& p) {
  std::vector<int> targets;
  for (int q = 0; q <= kLogicMax; ++q) {
    if (synergy_gap(x, q, p) == 0.0) targets.push_back(q);
  }
  return targets;
}

Vec3 synergistic_feedback(const PlantState& x, int q, const SynergisticParams& p) {
  return -p.k1 * logic_sign(q) * x.vector() - p.k2 * x.omega;
}

double attractor_level(const SynergisticParams& p, double c) {
  return 2.0 * p.k1 + 0.5 * p.delta + 0.5 * p.max_inertia_eigenvalue() * c * c;
}

double orientation_control_bound(const SynergisticParams& p) {
  return std::sqrt((4.0 * p.k1 - p.delta) / p.max_inertia_eigenvalue());
}

}  // namespace etsyn::attitude
