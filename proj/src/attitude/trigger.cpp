#include "etsyn/attitude/trigger.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "etsyn/hybrid/analytics.hpp"

namespace etsyn::attitude {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

bool in_open_unit(double v) { return v > 0.0 && v < 1.0; }

}  // namespace

std::size_t TriggerParams::n_ell() const {
  if (const auto* d = std::get_if<Dynamic>(&kind)) return d->n_ell;
  return 0;
}

std::string TriggerParams::kind_name() const {
  return std::visit(Overloaded{[](const FixedThreshold&) { return "fixed-threshold"; },
                               [](const Gamma1Only&) { return "gamma1-only"; },
                               [](const LyapunovZhu&) { return "lyapunov-zhu"; },
                               [](const Dynamic&) { return "dynamic"; },
                               [](const Proposed&) { return "proposed"; }},
                    kind);
}

void TriggerParams::validate() const {
  const auto fail = [&](const std::string& what) { throw ConfigError("trigger '" + name + "': " + what); };
  std::visit(Overloaded{[&](const FixedThreshold& k) {
                          if (!(k.rho_power >= 1.0)) fail("rho_power must be >= 1");
                          if (!(k.rho_bar > 0.0)) fail("rho_bar must be positive");
                        },
                        [&](const Gamma1Only& k) {
                          if (!in_open_unit(k.sigma)) fail("sigma must lie in (0, 1)");
                        },
                        [&](const LyapunovZhu& k) {
                          if (!in_open_unit(k.sigma)) fail("sigma must lie in (0, 1)");
                          if (!(k.c > 0.0)) fail("c must be positive");
                        },
                        [&](const Dynamic& k) {
                          if (!(k.ell_bar > 0.0)) fail("ell_bar must be positive");
                          if (k.n_ell == 0) fail("dynamic trigger needs a non-empty ell");
                          if (!k.flow || !k.reset) fail("dynamic trigger needs flow and reset fields");
                          if (!(k.ell_upper > k.ell_bar)) fail("ell_upper must exceed ell_bar");
                        },
                        [&](const Proposed& k) {
                          if (!in_open_unit(k.sigma)) fail("sigma must lie in (0, 1)");
                          if (!(k.c > 0.0)) fail("c must be positive");
                        }},
             kind);
}

double lyapunov_v1(const ClosedLoopState& xi, const SynergisticParams& p) {
  return lyapunov_v0(xi.plant, xi.q, p);
}

double gamma1(const ClosedLoopState& xi, double sigma, const SynergisticParams& p) {
  const Vec3& w = xi.plant.omega;
  return p.k1 * logic_sign(xi.q) * xi.plant.vector().dot(w) + w.dot(xi.u_hat) + sigma * p.k2 * w.squaredNorm();
}

double trigger_value(const ClosedLoopState& xi, const TriggerParams& trigger, const SynergisticParams& p) {
  return std::visit(
      Overloaded{[&](const FixedThreshold& k) {
                   const double err = (xi.u_hat - synergistic_feedback(xi.plant, xi.q, p)).norm();
                   return std::pow(err, k.rho_power) - k.rho_bar;
                 },
                 [&](const Gamma1Only& k) { return gamma1(xi, k.sigma, p); },
                 [&](const LyapunovZhu& k) {
                   return hybrid::otimes(gamma1(xi, k.sigma, p), lyapunov_v1(xi, p) - k.c);
                 },
                 [&](const Dynamic& k) {
                   if (xi.ell.size() == 0) throw ConfigError("dynamic trigger evaluated with empty ell");
                   return k.ell_bar - xi.ell[0];
                 },
                 [&](const Proposed& k) {
                   return hybrid::otimes(gamma1(xi, k.sigma, p), xi.plant.omega.norm() - k.c);
                 }},
      trigger.kind);
}

std::optional<std::string> trigger_warning(const TriggerParams& trigger, const SynergisticParams& p) {
  const auto* k = std::get_if<Proposed>(&trigger.kind);
  if (k == nullptr) return std::nullopt;
  const double bound = orientation_control_bound(p);
  if (k->c < bound) return std::nullopt;
  std::ostringstream os;
  os << "trigger '" << trigger.name << "': c = " << k->c << " is not below " << bound
     << "; the attractor level c' covers every orientation";
  return os.str();
}

Dynamic::Field constant_field(double value) {
  return [value](const ClosedLoopState&) { return Eigen::VectorXd::Constant(1, value); };
}

Dynamic::Field energy_gated_rate(const SynergisticParams& p, double gain, double v_floor) {
  if (!(v_floor > 0.0)) throw ConfigError("energy_gated_rate: v_floor must be positive");
  return [p, gain, v_floor](const ClosedLoopState& xi) {
    const double boost = gain * std::max(0.0, 1.0 - lyapunov_v1(xi, p) / v_floor);
    return Eigen::VectorXd::Constant(1, -1.0 + boost);
  };
}

}  // namespace etsyn::attitude
