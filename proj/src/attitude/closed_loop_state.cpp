#include "etsyn/attitude/closed_loop_state.hpp"

#include <stdexcept>

namespace etsyn::attitude {

hybrid::State pack(const ClosedLoopState& xi) {
  hybrid::State v(state_dimension(static_cast<std::size_t>(xi.ell.size())));
  v.segment<4>(layout::kQuat) = xi.plant.quat;
  v.segment<3>(layout::kOmega) = xi.plant.omega;
  v[layout::kLogic] = xi.q;
  v.segment<3>(layout::kUHat) = xi.u_hat;
  v.tail(xi.ell.size()) = xi.ell;
  return v;
}

PlantState plant_of(const hybrid::State& v) {
  if (v.size() < layout::kEll) throw std::invalid_argument("closed-loop state vector is too short");
  return {v.segment<4>(layout::kQuat), v.segment<3>(layout::kOmega)};
}

int logic_of(const hybrid::State& v) {
  if (v.size() < layout::kEll) throw std::invalid_argument("closed-loop state vector is too short");
  const double q = v[layout::kLogic];
  if (q != 0.0 && q != 1.0) throw std::invalid_argument("logic variable must be 0 or 1");
  return static_cast<int>(q);
}

ClosedLoopState unpack(const hybrid::State& v) {
  ClosedLoopState xi;
  xi.plant = plant_of(v);
  xi.q = logic_of(v);
  xi.u_hat = v.segment<3>(layout::kUHat);
  xi.ell = v.tail(v.size() - layout::kEll);
  return xi;
}

}  // namespace etsyn::attitude
