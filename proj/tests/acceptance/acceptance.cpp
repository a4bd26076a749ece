#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "etsyn/attitude/closed_loop.hpp"
#include "etsyn/experiments/comparison.hpp"
#include "etsyn/hybrid/analytics.hpp"
#include "etsyn/hybrid/jump_image.hpp"
#include "oracles.hpp"

using namespace etsyn;
using attitude::ClosedLoopState;
using attitude::SynergisticParams;
using attitude::Vec3;
using attitude::Vec4;
using hybrid::State;

namespace {

int g_failures = 0;

void report(const std::string& name, bool pass, const std::string& detail) {
  std::cout << (pass ? "PASS " : "FAIL ") << name << ": " << detail << "\n";
  if (!pass) ++g_failures;
}

void info(const std::string& name, const std::string& detail) { std::cout << "INFO " << name << ": " << detail << "\n"; }

template <class... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Three-branch table written out independently of the library.
double otimes_reference(double a, double b) {
  if (a < 0.0 && b < 0.0) return -a * b;
  if (a > 0.0 || b > 0.0) return a * b;
  return std::min(a, b);
}

void check_otimes() {
  int matches = 0;
  for (int a = -2; a <= 2; ++a) {
    for (int b = -2; b <= 2; ++b) {
      if (hybrid::otimes(a, b) == otimes_reference(a, b)) ++matches;
    }
  }
  report("otimes-grid", matches == 25, fmt("%d/25 grid points match", matches));
}

void check_analytics_oracle() {
  std::mt19937_64 rng(20240101);
  int agree = 0;
  std::size_t total_jumps = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto log = testing::random_log(rng, rng() % 1001, trial % 2 == 0);
    total_jumps += log.size();
    const double t_end = log.empty() ? 1.0 : log.back().t + 0.5;
    const auto domain = hybrid::domain_from_records(log, t_end);
    const auto fast = hybrid::dwell_time(domain);
    const auto slow = testing::brute_dwell(domain);
    if (hybrid::delta_t(log) == testing::brute_delta_t(log) && fast.has_dwell == slow.has_dwell &&
        fast.tau == slow.tau) {
      ++agree;
    }
  }
  report("analytics-oracle", agree == 200,
         fmt("%d/200 logs agree exactly (%zu jumps in total)", agree, total_jumps));
}

struct ProposedBatch {
  std::vector<experiments::CellResult> results;
  double wall_seconds = 0.0;
};

ProposedBatch run_proposed(experiments::ExperimentConfig cfg) {
  ProposedBatch out;
  const auto start = std::chrono::steady_clock::now();
  for (const auto& cell : experiments::plan_cells(cfg)) out.results.push_back(experiments::run_cell(cfg, cell));
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

double min_delta_t(const ProposedBatch& b) {
  double m = hybrid::kInfinity;
  for (const auto& r : b.results) m = std::min(m, r.outcome.delta_t);
  return m;
}

experiments::ExperimentConfig proposed_config() {
  auto cfg = experiments::default_comparison_config();
  cfg.triggers.resize(1);
  return cfg;
}

void check_proposed(const ProposedBatch& coarse) {
  auto cfg = proposed_config();
  const double c_prime = attitude::attractor_level(cfg.params, cfg.c);
  std::size_t horizon = 0;
  std::size_t gas = 0;
  for (const auto& r : coarse.results) {
    if (r.outcome.termination == solver::TerminationKind::HorizonReached) ++horizon;
    if (experiments::gas_reached(r.simulation, cfg.params, c_prime, cfg.solver.t_horizon)) ++gas;
  }
  cfg.solver.dt_max /= 2.0;
  const auto fine = run_proposed(cfg);
  const double a = min_delta_t(coarse);
  const double b = min_delta_t(fine);
  const bool stable = std::isfinite(a) && a > 0.0 && b > 0.0 && std::abs(b - a) <= 0.2 * a;
  const std::size_t n = coarse.results.size();
  const bool pass = horizon == n && gas == n && stable && coarse.wall_seconds < 60.0;
  report("proposed-controller", pass,
         fmt("%zu/%zu horizon reached, %zu/%zu with V1 <= %.4g in the final 10%%, min dt %.6g vs %.6g at dt/2 "
             "(%.1f%% apart), batch %.2f s",
             horizon, n, gas, n, c_prime, a, b, 100.0 * std::abs(b - a) / a, coarse.wall_seconds));
}

const experiments::RunOutcome* find_run(const experiments::BatchResult& batch, const std::string& trigger,
                                        const std::string& run_id) {
  for (const auto& r : batch.runs) {
    if (r.trigger == trigger && r.run_id == run_id) return &r;
  }
  return nullptr;
}

void check_table(const experiments::BatchResult& batch, double horizon) {
  const auto* g1 = find_run(batch, "gamma1-only", "gamma1-zero");
  const auto* zhu = find_run(batch, "zhu", "zhu-pathology");
  const auto* dyn = find_run(batch, "dynamic", "dynamic-rest");
  const bool a = g1 && g1->termination == solver::TerminationKind::DiscreteAccumulation;
  const bool b = zhu && zhu->delta_t == 0.0 && zhu->max_transmissions_per_instant >= 2;
  const bool c = dyn && dyn->termination == solver::TerminationKind::DeadEnd && dyn->t_end < horizon;

  const std::map<std::string, std::array<bool, 3>> expected = {{"ours", {true, true, true}},
                                                               {"gamma1-only", {true, false, false}},
                                                               {"zhu", {true, true, false}},
                                                               {"dynamic", {false, false, true}}};
  std::size_t rows = 0;
  std::ostringstream pattern;
  for (const auto& v : batch.verdicts) {
    const std::array<bool, 3> got = {v.complete(), v.gas_reached, v.dwell_transmission};
    const auto it = expected.find(v.trigger_name);
    if (it != expected.end() && it->second == got) ++rows;
    pattern << " " << v.trigger_name << "=" << (got[0] ? "Y" : "N") << (got[1] ? "Y" : "N") << (got[2] ? "Y" : "N");
  }
  const bool table = rows == expected.size() && batch.verdicts.size() == expected.size();
  report("table-1-reproduction", a && b && c && table,
         fmt("(a) %s (b) %s (c) %s, verdict pattern %zu/4 rows:%s", a ? "discrete accumulation" : "missing",
             b ? "zero inter-transmission" : "missing", c ? "dead end" : "missing", rows, pattern.str().c_str()));
}

void check_lyapunov(const ProposedBatch& batch) {
  const auto cfg = proposed_config();
  const auto& p = cfg.params;
  const double sigma = cfg.sigma;
  const double c_prime = attitude::attractor_level(p, cfg.c);
  double worst_drop = hybrid::kInfinity;
  double worst_hold = 0.0;
  double worst_rate = -hybrid::kInfinity;
  double worst_rate_outside = -hybrid::kInfinity;
  std::size_t flow_samples = 0;
  std::size_t rate_violations = 0;
  std::size_t outside_samples = 0;
  for (const auto& r : batch.results) {
    for (const auto& jump : r.simulation.jumps) {
      const auto pre = attitude::unpack(jump.state_pre);
      const auto post = attitude::unpack(jump.state_post);
      if (jump.family == hybrid::JumpFamily::Synergistic) {
        worst_drop = std::min(worst_drop, attitude::lyapunov_v0(pre.plant, pre.q, p) -
                                              attitude::lyapunov_v0(post.plant, post.q, p));
      } else {
        worst_hold = std::max(worst_hold, std::abs(attitude::lyapunov_v1(pre, p) - attitude::lyapunov_v1(post, p)));
      }
    }
    for (const auto& interval : r.simulation.arc.samples) {
      for (const auto& s : interval) {
        const auto xi = attitude::unpack(s.x);
        const double rate = attitude::gamma1(xi, sigma, p) - sigma * p.k2 * xi.plant.omega.squaredNorm();
        ++flow_samples;
        worst_rate = std::max(worst_rate, rate);
        if (rate > 1e-6) ++rate_violations;
        if (attitude::lyapunov_v1(xi, p) > c_prime) {
          ++outside_samples;
          worst_rate_outside = std::max(worst_rate_outside, rate);
        }
      }
    }
  }
  const bool pass = worst_drop >= p.delta - 1e-9 && worst_hold <= 1e-12 && rate_violations == 0;
  report("lyapunov-invariants", pass,
         fmt("switch drop >= %.6g (need %.6g), transmission |dV1| <= %.3g, flow dV1/dt max %.4g "
             "with %zu/%zu samples above 1e-6",
             worst_drop, p.delta - 1e-9, worst_hold, worst_rate, rate_violations, flow_samples));
  info("lyapunov-invariants",
       fmt("outside the attractor level V1 > %.4g: flow dV1/dt max %.4g over %zu samples", c_prime,
           worst_rate_outside, outside_samples));
}

void check_single_transmission(const ProposedBatch& batch, const experiments::BatchResult& table) {
  std::size_t proposed_max = 0;
  for (const auto& r : batch.results) {
    proposed_max = std::max(proposed_max, hybrid::max_transmissions_per_instant(r.simulation.jumps));
  }
  const auto* zhu = find_run(table, "zhu", "zhu-pathology");
  const std::size_t zhu_max = zhu ? zhu->max_transmissions_per_instant : 0;
  report("single-transmission-per-instant", proposed_max <= 1 && zhu_max >= 2,
         fmt("proposed logs max %zu per instant over %zu runs, Zhu pathology log max %zu", proposed_max,
             batch.results.size(), zhu_max));
}

hybrid::Sampler box_sampler(double omega_bound, double u_bound) {
  return [=](std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> w(-omega_bound, omega_bound);
    std::uniform_real_distribution<double> u(-u_bound, u_bound);
    ClosedLoopState xi;
    xi.plant.quat = Vec4(g(rng), g(rng), g(rng), g(rng)).normalized();
    xi.plant.omega = omega_bound > 0.0 ? Vec3(w(rng), w(rng), w(rng)) : Vec3::Zero();
    xi.q = static_cast<int>(rng() % 2);
    xi.u_hat = Vec3(u(rng), u(rng), u(rng));
    return attitude::pack(xi);
  };
}

void check_separation() {
  const SynergisticParams p;
  hybrid::SeparationOptions options;
  options.n_samples = 10000;
  options.seed = 7;
  const auto ours = hybrid::check_separation(attitude::jump_families(p, {"ours", attitude::Proposed{0.5, 0.3}}),
                                             box_sampler(2.0, 3.0), options);
  const auto example = hybrid::check_separation(
      attitude::jump_families(p, {"gamma1-only", attitude::Gamma1Only{0.5}}), box_sampler(0.0, 3.0), options);
  bool sampled = true;
  for (const auto* c : {&ours.c1[0], &ours.c1[1], &ours.c2[0], &ours.c2[1]}) sampled = sampled && !c->sampling_failed;
  const bool pass = sampled && ours.c1_violations() == 0 && ours.c2_violations() == 0 && example.c1_violations() >= 1;
  report("separation", pass,
         fmt("proposed C1' %zu/%zu, C2' %zu/%zu violations (transmission %zu, switch %zu); "
             "gamma1-only from rest C1' %zu violations",
             ours.c1_violations(), ours.c1[0].samples + ours.c1[1].samples, ours.c2_violations(),
             ours.c2[0].samples + ours.c2[1].samples, ours.c2[0].violations, ours.c2[1].violations,
             example.c1_violations()));
}

// V1 after flowing for s with û frozen, by RK4.
double v1_after(const ClosedLoopState& xi, const SynergisticParams& p, double s) {
  const attitude::TriggerParams frozen{"f", attitude::Proposed{}};
  State v = attitude::pack(xi);
  const int n = 4;
  const double h = s / n;
  const auto f = [&](const State& z) { return attitude::closed_loop_flow(z, p, frozen); };
  for (int k = 0; k < n; ++k) {
    const State k1 = f(v);
    const State k2 = f(v + h / 2 * k1);
    const State k3 = f(v + h / 2 * k2);
    const State k4 = f(v + h * k3);
    v += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return attitude::lyapunov_v1(attitude::unpack(v), p);
}

double fd_rate(const ClosedLoopState& xi, const SynergisticParams& p) {
  const double h = 1e-6;
  return (v1_after(xi, p, h) - v1_after(xi, p, -h)) / (2 * h);
}

void check_gradient() {
  const SynergisticParams p;
  const double sigma = 0.5;
  std::mt19937_64 rng(99);
  std::normal_distribution<double> g;
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    ClosedLoopState xi;
    xi.plant.quat = Vec4(g(rng), g(rng), g(rng), g(rng)).normalized();
    xi.plant.omega = Vec3(g(rng), g(rng), g(rng));
    xi.q = static_cast<int>(rng() % 2);
    xi.u_hat = 2.0 * Vec3(g(rng), g(rng), g(rng));
    // Rate along the nominal closed loop: û replaced by the continuous feedback.
    ClosedLoopState nominal = xi;
    nominal.u_hat = attitude::synergistic_feedback(xi.plant, xi.q, p);
    const double fd = fd_rate(xi, p) - sigma * fd_rate(nominal, p);
    worst = std::max(worst, std::abs(fd - attitude::gamma1(xi, sigma, p)));
  }
  report("gamma1-gradient", worst <= 1e-6, fmt("max |gamma1 - finite difference| = %.3g over 1000 states", worst));
}

}  // namespace

int main() {
  try {
    check_otimes();
    check_analytics_oracle();

    const auto proposed = run_proposed(proposed_config());
    check_proposed(proposed);

    auto table_cfg = experiments::default_comparison_config();
    table_cfg.output_dir = "acceptance_out";
    const auto table = experiments::run_comparison(table_cfg, {4, true});
    check_table(table, table_cfg.solver.t_horizon);

    check_lyapunov(proposed);
    check_single_transmission(proposed, table);
    check_separation();
    check_gradient();
  } catch (const std::exception& e) {
    std::cout << "FAIL acceptance aborted: " << e.what() << "\n";
    return 1;
  }
  std::cout << (g_failures == 0 ? "all criteria passed" : std::to_string(g_failures) + " criteria failed") << "\n";
  return g_failures == 0 ? 0 : 1;
}
