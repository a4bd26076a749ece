#include "etsyn/experiments/initial_conditions.hpp"

#include <cmath>
#include <random>

#include "etsyn/attitude/trigger.hpp"

namespace etsyn::experiments {

using attitude::ClosedLoopState;

namespace {

ClosedLoopState at_rest(const attitude::Vec4& quat, int q, const attitude::SynergisticParams& p,
                        std::size_t n_ell) {
  ClosedLoopState xi;
  xi.plant.quat = quat.normalized();
  xi.plant.omega.setZero();
  xi.q = q;
  xi.u_hat = attitude::synergistic_feedback(xi.plant, q, p);
  xi.ell = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_ell));
  return xi;
}

}  // namespace

std::vector<ClosedLoopState> sample_initial_conditions(std::uint64_t seed, std::size_t n, double omega_bound,
                                                       const attitude::SynergisticParams& p, std::size_t n_ell) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> rate(-omega_bound, omega_bound);
  std::bernoulli_distribution coin;

  std::vector<ClosedLoopState> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    ClosedLoopState xi;
    attitude::Vec4 quat;
    do {
      for (auto& c : quat) c = gauss(rng);
    } while (quat.norm() < 1e-8);
    xi.plant.quat = quat / quat.norm();
    for (auto& c : xi.plant.omega) c = rate(rng);
    xi.q = coin(rng) ? 1 : 0;
    xi.u_hat = attitude::synergistic_feedback(xi.plant, xi.q, p);
    xi.ell = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_ell));
    out.push_back(std::move(xi));
  }
  return out;
}

Preset make_preset(const std::string& name, const attitude::SynergisticParams& p, std::size_t n_ell) {
  if (name == "gamma1-zero") return {name, at_rest({0.8, 0.6, 0.0, 0.0}, 1, p, n_ell), std::nullopt, std::nullopt};
  if (name == "zhu-pathology") {
    return {name, at_rest({-0.9, std::sqrt(0.19), 0.0, 0.0}, 1, p, n_ell), solver::JumpPolicy::Random,
            kZhuPathologySeed};
  }
  if (name == "dynamic-rest") return {name, at_rest({0.0, 1.0, 0.0, 0.0}, 1, p, n_ell), std::nullopt, std::nullopt};
  throw attitude::ConfigError("unknown preset '" + name + "'");
}

std::vector<std::string> preset_names() { return {"gamma1-zero", "zhu-pathology", "dynamic-rest"}; }

}  // namespace etsyn::experiments
