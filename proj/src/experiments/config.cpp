#include "etsyn/experiments/config.hpp"

#include <fstream>
#include <set>

#include "etsyn/experiments/initial_conditions.hpp"

namespace etsyn::experiments {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

double number(const json& obj, const std::string& key, double fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + " must be a number");
  return v.get<double>();
}

std::uint64_t unsigned_int(const json& obj, const std::string& key, std::uint64_t fallback,
                           const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_unsigned()) throw ConfigError(where + "." + key + " must be a non-negative integer");
  return v.get<std::uint64_t>();
}

std::string text(const json& obj, const std::string& key, const std::string& fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(where + "." + key + " must be a string");
  return v.get<std::string>();
}

solver::JumpPolicy policy(const std::string& name, const std::string& where) {
  try {
    return solver::jump_policy_from_string(name);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

attitude::Mat3 parse_inertia(const json& v) {
  if (!v.is_array()) throw ConfigError("inertia must be an array");
  attitude::Mat3 m = attitude::Mat3::Zero();
  if (v.size() == 3 && v[0].is_number()) {
    for (int i = 0; i < 3; ++i) {
      if (!v[i].is_number()) throw ConfigError("inertia diagonal entries must be numbers");
      m(i, i) = v[i].get<double>();
    }
    return m;
  }
  if (v.size() != 3) throw ConfigError("inertia must have 3 diagonal entries or 3 rows");
  for (int i = 0; i < 3; ++i) {
    if (!v[i].is_array() || v[i].size() != 3) throw ConfigError("inertia rows must have 3 entries");
    for (int j = 0; j < 3; ++j) {
      if (!v[i][j].is_number()) throw ConfigError("inertia entries must be numbers");
      m(i, j) = v[i][j].get<double>();
    }
  }
  return m;
}

attitude::Dynamic::Field parse_ell_rate(const json& v, const attitude::SynergisticParams& p,
                                        const std::string& where) {
  if (v.is_number()) return attitude::constant_field(v.get<double>());
  if (!v.is_object()) throw ConfigError(where + ".ell_rate must be a number or an object");
  reject_unknown_keys(v, {"kind", "value", "gain", "v_floor"}, where + ".ell_rate");
  const std::string kind = text(v, "kind", "constant", where + ".ell_rate");
  if (kind == "constant") return attitude::constant_field(number(v, "value", 1.0, where + ".ell_rate"));
  if (kind == "energy-gated") {
    return attitude::energy_gated_rate(p, number(v, "gain", 2.0, where + ".ell_rate"),
                                       number(v, "v_floor", 0.5, where + ".ell_rate"));
  }
  throw ConfigError(where + ".ell_rate: unknown kind '" + kind + "'");
}

TriggerSpec parse_trigger(const json& v, std::size_t index, const ExperimentConfig& cfg) {
  const std::string where = "triggers[" + std::to_string(index) + "]";
  if (!v.is_object()) throw ConfigError(where + " must be an object");
  reject_unknown_keys(v,
                      {"name", "kind", "sigma", "c", "rho_power", "rho_bar", "ell_bar", "ell_upper", "ell_rate",
                       "ell_reset", "random_runs", "presets"},
                      where);
  TriggerSpec spec;
  const std::string kind = text(v, "kind", "", where);
  spec.trigger.name = text(v, "name", kind, where);
  const double sigma = number(v, "sigma", cfg.sigma, where);
  const double c = number(v, "c", cfg.c, where);
  if (kind == "proposed") {
    spec.trigger.kind = attitude::Proposed{sigma, c};
  } else if (kind == "lyapunov-zhu") {
    spec.trigger.kind = attitude::LyapunovZhu{sigma, c};
  } else if (kind == "gamma1-only") {
    spec.trigger.kind = attitude::Gamma1Only{sigma};
  } else if (kind == "fixed-threshold") {
    spec.trigger.kind = attitude::FixedThreshold{number(v, "rho_power", 1.0, where), number(v, "rho_bar", 0.1, where)};
  } else if (kind == "dynamic") {
    attitude::Dynamic d;
    d.ell_bar = number(v, "ell_bar", 0.05, where);
    d.ell_upper = number(v, "ell_upper", hybrid::kInfinity, where);
    d.flow = v.contains("ell_rate") ? parse_ell_rate(v.at("ell_rate"), cfg.params, where) : attitude::constant_field(1.0);
    d.reset = attitude::constant_field(number(v, "ell_reset", 0.0, where));
    spec.trigger.kind = std::move(d);
  } else {
    throw ConfigError(where + ": unknown trigger kind '" + kind + "'");
  }
  if (spec.trigger.name.empty()) throw ConfigError(where + ": empty name");

  if (v.contains("random_runs")) {
    if (!v.at("random_runs").is_boolean()) throw ConfigError(where + ".random_runs must be a boolean");
    spec.random_runs = v.at("random_runs").get<bool>();
  }
  if (v.contains("presets")) {
    const auto& list = v.at("presets");
    if (!list.is_array()) throw ConfigError(where + ".presets must be an array");
    for (const auto& item : list) {
      PresetRef ref;
      if (item.is_string()) {
        ref.name = item.get<std::string>();
      } else if (item.is_object()) {
        reject_unknown_keys(item, {"name", "policy", "seed"}, where + ".presets");
        ref.name = text(item, "name", "", where + ".presets");
        if (item.contains("policy")) ref.policy = policy(text(item, "policy", "", where), where + ".presets");
        if (item.contains("seed")) ref.seed = unsigned_int(item, "seed", 0, where + ".presets");
      } else {
        throw ConfigError(where + ".presets entries must be names or objects");
      }
      (void)make_preset(ref.name, cfg.params, 0);  // reject unknown names early
      spec.presets.push_back(std::move(ref));
    }
  }
  spec.trigger.validate();
  return spec;
}

}  // namespace

void ExperimentConfig::validate() const {
  try {
    params.validate();
    solver.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (triggers.empty()) throw ConfigError("at least one trigger is required");
  std::set<std::string> names;
  for (const auto& t : triggers) {
    t.trigger.validate();
    if (!names.insert(t.trigger.name).second) throw ConfigError("duplicate trigger name '" + t.trigger.name + "'");
  }
  if (n_initial_conditions < 1) throw ConfigError("initial_conditions.count must be >= 1");
  if (!(omega_bound > 0.0)) throw ConfigError("initial_conditions.omega_bound must be positive");
  if (!(c > 0.0)) throw ConfigError("c must be positive");
  if (csv_stride < 1) throw ConfigError("csv_stride must be >= 1");
}

ExperimentConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
  reject_unknown_keys(doc,
                      {"inertia", "k1", "k2", "delta", "sigma", "c", "triggers", "solver", "initial_conditions",
                       "output_dir", "csv_stride"},
                      "config");
  ExperimentConfig cfg;
  if (doc.contains("inertia")) cfg.params.inertia = parse_inertia(doc.at("inertia"));
  cfg.params.k1 = number(doc, "k1", cfg.params.k1, "config");
  cfg.params.k2 = number(doc, "k2", cfg.params.k2, "config");
  cfg.params.delta = number(doc, "delta", cfg.params.delta, "config");
  cfg.sigma = number(doc, "sigma", cfg.sigma, "config");
  cfg.c = number(doc, "c", cfg.c, "config");
  cfg.output_dir = text(doc, "output_dir", cfg.output_dir, "config");
  cfg.csv_stride = unsigned_int(doc, "csv_stride", cfg.csv_stride, "config");

  if (doc.contains("solver")) {
    const auto& s = doc.at("solver");
    if (!s.is_object()) throw ConfigError("solver must be an object");
    reject_unknown_keys(s, {"dt_max", "horizon", "policy", "seed", "guard_tol", "j_max", "max_jumps_per_instant"},
                        "solver");
    cfg.solver.dt_max = number(s, "dt_max", cfg.solver.dt_max, "solver");
    cfg.solver.t_horizon = number(s, "horizon", cfg.solver.t_horizon, "solver");
    cfg.solver.guard_tol = number(s, "guard_tol", cfg.solver.guard_tol, "solver");
    cfg.solver.j_max = unsigned_int(s, "j_max", cfg.solver.j_max, "solver");
    cfg.solver.max_jumps_per_instant =
        unsigned_int(s, "max_jumps_per_instant", cfg.solver.max_jumps_per_instant, "solver");
    cfg.solver.seed = unsigned_int(s, "seed", cfg.solver.seed, "solver");
    if (s.contains("policy")) cfg.solver.jump_policy = policy(text(s, "policy", "", "solver"), "solver");
  }
  if (doc.contains("initial_conditions")) {
    const auto& ic = doc.at("initial_conditions");
    if (!ic.is_object()) throw ConfigError("initial_conditions must be an object");
    reject_unknown_keys(ic, {"count", "seed", "omega_bound"}, "initial_conditions");
    cfg.n_initial_conditions = unsigned_int(ic, "count", cfg.n_initial_conditions, "initial_conditions");
    cfg.rng_seed = unsigned_int(ic, "seed", cfg.rng_seed, "initial_conditions");
    cfg.omega_bound = number(ic, "omega_bound", cfg.omega_bound, "initial_conditions");
  }
  if (!doc.contains("triggers") || !doc.at("triggers").is_array()) throw ConfigError("triggers must be an array");
  const auto& list = doc.at("triggers");
  for (std::size_t i = 0; i < list.size(); ++i) cfg.triggers.push_back(parse_trigger(list[i], i, cfg));
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration '" + path + "'");
  json doc;
  try {
    doc = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return parse_config(doc);
}

ExperimentConfig default_comparison_config() {
  return parse_config(json::parse(R"({
    "triggers": [
      {"name": "ours", "kind": "proposed"},
      {"name": "gamma1-only", "kind": "gamma1-only", "presets": ["gamma1-zero"]},
      {"name": "zhu", "kind": "lyapunov-zhu", "presets": ["zhu-pathology"]},
      {"name": "dynamic", "kind": "dynamic", "ell_bar": 0.05, "ell_upper": 1.0,
       "ell_rate": {"kind": "energy-gated", "gain": 2.0, "v_floor": 0.5}, "ell_reset": 0.1,
       "presets": ["dynamic-rest"]}
    ]
  })"));
}

}  // namespace etsyn::experiments
