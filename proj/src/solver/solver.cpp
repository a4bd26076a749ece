#include "etsyn/solver/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace etsyn::solver {

std::string to_string(JumpPolicy policy) {
  switch (policy) {
    case JumpPolicy::TransmissionFirst:
      return "transmission-first";
    case JumpPolicy::SwitchFirst:
      return "switch-first";
    case JumpPolicy::Random:
      return "random";
  }
  return "?";
}

JumpPolicy jump_policy_from_string(const std::string& name) {
  if (name == "transmission-first") return JumpPolicy::TransmissionFirst;
  if (name == "switch-first") return JumpPolicy::SwitchFirst;
  if (name == "random") return JumpPolicy::Random;
  throw std::invalid_argument("unknown jump policy '" + name + "'");
}

void SolverConfig::validate() const {
  if (!(dt_max > 0.0)) throw std::invalid_argument("solver: dt_max must be positive");
  if (!(guard_tol > 0.0)) throw std::invalid_argument("solver: guard_tol must be positive");
  if (!(t_horizon >= 0.0) || !std::isfinite(t_horizon)) throw std::invalid_argument("solver: horizon must be finite and >= 0");
  if (max_jumps_per_instant < 2) throw std::invalid_argument("solver: max_jumps_per_instant must be >= 2");
}

std::string to_string(TerminationKind kind) {
  switch (kind) {
    case TerminationKind::HorizonReached:
      return "HorizonReached";
    case TerminationKind::JumpBudgetExhausted:
      return "JumpBudgetExhausted";
    case TerminationKind::DiscreteAccumulation:
      return "DiscreteAccumulation";
    case TerminationKind::DeadEnd:
      return "DeadEnd";
    case TerminationKind::NumericalFailure:
      return "NumericalFailure";
  }
  return "?";
}

TerminationKind termination_from_string(const std::string& name) {
  for (auto k : {TerminationKind::HorizonReached, TerminationKind::JumpBudgetExhausted,
                 TerminationKind::DiscreteAccumulation, TerminationKind::DeadEnd,
                 TerminationKind::NumericalFailure}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown termination kind '" + name + "'");
}

double locate_crossing(const std::function<double(double)>& guard, double t_lo, double t_hi,
                       double guard_tol, double time_tol) {
  double g_lo = guard(t_lo);
  double g_hi = guard(t_hi);
  if (!(g_lo < 0.0 && g_hi >= 0.0)) {
    std::ostringstream os;
    os << "no sign change on [" << t_lo << ", " << t_hi << "]: guard " << g_lo << " -> " << g_hi;
    throw BracketError(os.str());
  }
  while (t_hi - t_lo > time_tol && g_hi > guard_tol) {
    const double mid = t_lo + 0.5 * (t_hi - t_lo);
    if (mid <= t_lo || mid >= t_hi) break;
    const double g_mid = guard(mid);
    if (g_mid >= 0.0) {
      t_hi = mid;
      g_hi = g_mid;
    } else {
      t_lo = mid;
      g_lo = g_mid;
    }
  }
  return t_hi;
}

State rk4_step(const SystemDefinition& sys, const State& x, double h) {
  const State k1 = sys.flow_map(x);
  const State k2 = sys.flow_map(x + 0.5 * h * k1);
  const State k3 = sys.flow_map(x + 0.5 * h * k2);
  const State k4 = sys.flow_map(x + h * k3);
  State next = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (sys.project) sys.project(next);
  return next;
}

ResolvedJump resolve_jump(const SystemDefinition& sys, const State& state, JumpPolicy policy,
                          std::mt19937_64& rng) {
  std::array<bool, 2> enabled{};
  for (std::size_t i = 0; i < 2; ++i) enabled[i] = sys.jumps[i].guard(state) >= 0.0;
  if (!enabled[0] && !enabled[1]) throw std::logic_error("resolve_jump: state is in neither jump set");

  std::size_t pick = enabled[0] ? 0 : 1;
  if (enabled[0] && enabled[1]) {
    switch (policy) {
      case JumpPolicy::TransmissionFirst:
      case JumpPolicy::SwitchFirst: {
        const JumpFamily wanted = policy == JumpPolicy::TransmissionFirst ? JumpFamily::Transmission
                                                                          : JumpFamily::Synergistic;
        pick = sys.jumps[0].family == wanted ? 0 : 1;
        break;
      }
      case JumpPolicy::Random:
        pick = static_cast<std::size_t>(rng() % 2);  // engine output is portable; distributions are not
        break;
    }
  }

  auto images = sys.jumps[pick].map(state);
  if (images.empty()) throw std::logic_error("resolve_jump: jump map returned an empty set");
  std::size_t which = 0;
  if (policy == JumpPolicy::Random && images.size() > 1) {
    which = static_cast<std::size_t>(rng() % images.size());
  }
  return {std::move(images[which]), sys.jumps[pick].family};
}

namespace {

class Integrator {
 public:
  Integrator(const SystemDefinition& sys, const SolverConfig& cfg) : sys_(sys), cfg_(cfg), rng_(cfg.seed) {}

  SimulationResult run(const State& x0) {
    const auto started = std::chrono::steady_clock::now();
    SimulationResult result;
    try {
      result.termination = loop(x0, result);
    } catch (const std::exception& e) {
      result.termination = {TerminationKind::NumericalFailure, e.what()};
    }
    finish(result);
    result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return result;
  }

 private:
  bool in_jump_set(const State& x) const {
    return sys_.jumps[0].guard(x) >= 0.0 || sys_.jumps[1].guard(x) >= 0.0;
  }

  double max_flow_guard(const State& x) const {
    const Eigen::VectorXd g = sys_.flow_guards(x);
    return g.size() == 0 ? -hybrid::kInfinity : g.maxCoeff();
  }

  bool in_flow_set(const State& x) const { return max_flow_guard(x) <= cfg_.guard_tol; }

  // Nonnegative when flow has to stop: the state entered D (eager mode) or left C.
  double event_value(const State& x) const {
    double value = max_flow_guard(x) - cfg_.guard_tol;
    if (cfg_.eager_jump) {
      value = std::max({value, sys_.jumps[0].guard(x), sys_.jumps[1].guard(x)});
    }
    return value;
  }

  void push_sample(double t, const State& x) { samples_.back().push_back({t, x}); }

  void open_interval(double t, const State& x) {
    intervals_.push_back({t, t, intervals_.size()});
    samples_.emplace_back();
    push_sample(t, x);
  }

  TerminationReason loop(const State& x0, SimulationResult& result) {
    if (static_cast<std::size_t>(x0.size()) != sys_.dimension) {
      throw std::invalid_argument("simulate: initial state has the wrong dimension");
    }
    double t = 0.0;
    State x = x0;
    open_interval(t, x);
    std::size_t jumps_here = 0;

    while (true) {
      const bool in_d = in_jump_set(x);
      const bool in_c = in_flow_set(x);

      if (in_d && (cfg_.eager_jump || !in_c)) {
        if (jumps_here >= cfg_.max_jumps_per_instant) {
          std::ostringstream os;
          os << jumps_here << " consecutive jumps at t=" << t;
          return {TerminationKind::DiscreteAccumulation, os.str()};
        }
        if (intervals_.size() - 1 >= cfg_.j_max) {
          return {TerminationKind::JumpBudgetExhausted, "jump budget exhausted"};
        }
        auto jump = resolve_jump(sys_, x, cfg_.jump_policy, rng_);
        result.jumps.push_back({t, intervals_.size() - 1, jump.family, x, jump.state_post});
        intervals_.back().t_end = t;
        x = std::move(jump.state_post);
        open_interval(t, x);
        ++jumps_here;
        continue;
      }
      if (!in_c) {
        std::ostringstream os;
        os << "state outside C and D at t=" << t;
        return {TerminationKind::DeadEnd, os.str()};
      }
      if (t >= cfg_.t_horizon) return {TerminationKind::HorizonReached, ""};

      const double remaining = cfg_.t_horizon - t;
      const double h = std::min(cfg_.dt_max, remaining);
      if (event_value(x) >= 0.0) {
        // On the boundary of C with no jump available: probe one step ahead.
        State probe = rk4_step(sys_, x, std::min(h, cfg_.dt_max * 1e-3));
        if (!in_flow_set(probe)) {
          std::ostringstream os;
          os << "flow leaves C immediately at t=" << t;
          return {TerminationKind::DeadEnd, os.str()};
        }
      }
      State next = rk4_step(sys_, x, h);
      if (!next.allFinite()) {
        std::ostringstream os;
        os << "non-finite state after step at t=" << t;
        return {TerminationKind::NumericalFailure, os.str()};
      }

      if (event_value(x) < 0.0 && event_value(next) >= 0.0) {
        const auto along = [&](double s) { return event_value(rk4_step(sys_, x, s)); };
        const double s_hi = locate_crossing(along, 0.0, h, cfg_.guard_tol);
        State hit = rk4_step(sys_, x, s_hi);
        if (in_jump_set(hit)) {
          t += s_hi;
          x = std::move(hit);
          push_sample(t, x);
          jumps_here = 0;
          continue;
        }
        // Left C without reaching D: keep the last admissible point and stop.
        double s_lo = 0.0;
        double s_out = s_hi;
        while (s_out - s_lo > kTimeTolerance) {
          const double mid = s_lo + 0.5 * (s_out - s_lo);
          (in_flow_set(rk4_step(sys_, x, mid)) ? s_lo : s_out) = mid;
        }
        if (s_lo > 0.0) {
          t += s_lo;
          x = rk4_step(sys_, x, s_lo);
          push_sample(t, x);
        }
        std::ostringstream os;
        os << "flow leaves C outside D at t=" << t;
        return {TerminationKind::DeadEnd, os.str()};
      }

      t = (h == remaining) ? cfg_.t_horizon : t + h;
      x = std::move(next);
      push_sample(t, x);
      jumps_here = 0;
    }
  }

  void finish(SimulationResult& result) {
    if (intervals_.empty()) intervals_.push_back({0.0, 0.0, 0});
    if (samples_.empty()) samples_.emplace_back();
    intervals_.back().t_end = samples_.back().empty() ? intervals_.back().t_start : samples_.back().back().t;
    result.arc.domain = hybrid::HybridTimeDomain(std::move(intervals_));
    result.arc.samples = std::move(samples_);
    result.arc.dimension = sys_.dimension;
  }

  const SystemDefinition& sys_;
  const SolverConfig& cfg_;
  std::mt19937_64 rng_;
  std::vector<hybrid::Interval> intervals_;
  std::vector<std::vector<hybrid::Sample>> samples_;
};

}  // namespace

SimulationResult simulate(const SystemDefinition& sys, const State& x0, const SolverConfig& cfg) {
  cfg.validate();
  return Integrator(sys, cfg).run(x0);
}

}  // namespace etsyn::solver
