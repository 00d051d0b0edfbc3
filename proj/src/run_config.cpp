#include "majorana/run_config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace majorana {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& section) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!allowed.count(key))
      throw ConfigError("unknown config key '" + (section.empty() ? key : section + "." + key) +
                        "'");
  }
}

const json* member(const json& obj, const std::string& key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

json require_object(const json& v, const std::string& key) {
  if (!v.is_object()) throw ConfigError("config key '" + key + "' must be an object");
  return v;
}

double number(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError("config key '" + key + "' must be a number");
  return v.get<double>();
}

long integer(const json& v, const std::string& key) {
  if (!v.is_number_integer()) throw ConfigError("config key '" + key + "' must be an integer");
  return v.get<long>();
}

bool boolean(const json& v, const std::string& key) {
  if (!v.is_boolean()) throw ConfigError("config key '" + key + "' must be true or false");
  return v.get<bool>();
}

std::string string(const json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError("config key '" + key + "' must be a string");
  return v.get<std::string>();
}

std::vector<double> numbers(const json& v, const std::string& key) {
  if (v.is_number()) return {v.get<double>()};
  if (!v.is_array()) throw ConfigError("config key '" + key + "' must be a number or a list");
  std::vector<double> out;
  for (const auto& e : v) out.push_back(number(e, key));
  return out;
}

Component parse_component(const std::string& s, const std::string& key) {
  if (s == "x") return Component::x;
  if (s == "y") return Component::y;
  if (s == "z") return Component::z;
  throw ConfigError("config key '" + key + "' must be one of x, y, z");
}

std::string component_name(Component c) {
  switch (c) {
    case Component::x: return "x";
    case Component::y: return "y";
    case Component::z: return "z";
  }
  return "z";
}

template <typename Fn>
void with_key(const std::string& key, Fn&& fn) {
  try {
    fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("config key '" + key + "': " + e.what());
  }
}

}  // namespace

std::vector<HalfInteger> RunConfig::spins() const {
  std::vector<HalfInteger> out;
  for (double j : j_values) out.push_back(HalfInteger::from_double(j));
  return out;
}

void RunConfig::validate() const {
  if (schema_version != kConfigSchemaVersion)
    throw ConfigError("unsupported schema_version " + std::to_string(schema_version));
  with_key("model", [&] { model.validate(); });
  if (j_values.empty()) throw ConfigError("config key 'j' must not be empty");
  with_key("j", [&] { (void)spins(); });
  if (gamma_values.empty()) throw ConfigError("config key 'gamma' must not be empty (empty gamma grid)");
  for (double g : gamma_values)
    if (!(g >= 0.0) || !std::isfinite(g)) throw ConfigError("config key 'gamma': values must be >= 0");
  if (temperatures.empty()) throw ConfigError("config key 'temperatures' must not be empty");
  for (double t : temperatures)
    if (!(t >= 0.0) || !std::isfinite(t))
      throw ConfigError("config key 'temperatures': values must be >= 0");
  if (channels.empty()) throw ConfigError("config key 'channels' must not be empty");
  for (Coupling c : channels)
    if (c == Coupling::Custom) throw ConfigError("config key 'channels': only Jz and Jx are supported");
  with_key("integrator", [&] { integrator.validate(); });
  if (checkpoints < 1) throw ConfigError("config key 'factorization.checkpoints' must be >= 1");
  if (qubit_cap < 1 || qubit_cap > 10)
    throw ConfigError("config key 'factorization.qubit_cap' must be in [1, 10]");
  with_key("classical_noise", [&] { classical.validate(qubit_cap); });
  if (workers < 0) throw ConfigError("config key 'workers' must be >= 0");
}

SweepSpec RunConfig::sweep_spec() const {
  SweepSpec s;
  s.j_list = spins();
  s.gamma_grid = gamma_values;
  s.channels = channels;
  s.temperatures = temperatures;
  s.model = model;
  s.integrator = integrator;
  return s;
}

RunConfig parse_run_config(const std::string& text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  if (!root.is_object()) throw ConfigError(origin + ": top level must be a JSON object");

  RunConfig c;
  reject_unknown(root,
                 {"schema_version", "model", "j", "gamma", "channels", "temperatures",
                  "integrator", "factorization", "classical_noise", "seed", "workers",
                  "record_wall_time", "out", "description"},
                 "");

  if (auto v = member(root, "schema_version")) c.schema_version = static_cast<int>(integer(*v, "schema_version"));
  if (auto v = member(root, "model")) {
    const json m = require_object(*v, "model");
    reject_unknown(m, {"omega", "kappa", "t0", "kappa_t0_over_omega"}, "model");
    if (auto x = member(m, "omega")) c.model.omega_rabi = number(*x, "model.omega");
    if (auto x = member(m, "kappa")) c.model.kappa = number(*x, "model.kappa");
    if (member(m, "t0") && member(m, "kappa_t0_over_omega"))
      throw ConfigError("config keys 'model.t0' and 'model.kappa_t0_over_omega' are exclusive");
    if (auto x = member(m, "t0")) c.model.t0 = number(*x, "model.t0");
    if (auto x = member(m, "kappa_t0_over_omega"))
      c.model.t0 = number(*x, "model.kappa_t0_over_omega") * c.model.omega_rabi / c.model.kappa;
  }
  if (auto v = member(root, "j")) c.j_values = numbers(*v, "j");
  if (auto v = member(root, "gamma")) {
    if (v->is_object()) {
      reject_unknown(*v, {"min", "max", "points"}, "gamma");
      const json* lo = member(*v, "min");
      const json* hi = member(*v, "max");
      const json* pts = member(*v, "points");
      if (!lo || !hi || !pts) throw ConfigError("config key 'gamma' needs min, max and points");
      const long n = integer(*pts, "gamma.points");
      if (n < 1) throw ConfigError("config key 'gamma.points' must be >= 1 (empty gamma grid)");
      with_key("gamma", [&] {
        c.gamma_values = log_grid(number(*lo, "gamma.min"), number(*hi, "gamma.max"), static_cast<int>(n));
      });
    } else {
      c.gamma_values = numbers(*v, "gamma");
    }
  }
  if (auto v = member(root, "channels")) {
    if (!v->is_array()) throw ConfigError("config key 'channels' must be a list");
    c.channels.clear();
    for (const auto& e : *v)
      with_key("channels", [&] { c.channels.push_back(parse_coupling(string(e, "channels"))); });
  }
  if (auto v = member(root, "temperatures")) c.temperatures = numbers(*v, "temperatures");
  if (auto v = member(root, "integrator")) {
    const json m = require_object(*v, "integrator");
    reject_unknown(m, {"method", "dt", "rel_tol", "max_steps", "validity_tol", "dt_min",
                       "positivity_interval"},
                   "integrator");
    if (auto x = member(m, "method"))
      with_key("integrator.method",
               [&] { c.integrator.method = parse_step_method(string(*x, "integrator.method")); });
    if (auto x = member(m, "dt")) c.integrator.dt = number(*x, "integrator.dt");
    if (auto x = member(m, "rel_tol")) c.integrator.rel_tol = number(*x, "integrator.rel_tol");
    if (auto x = member(m, "max_steps")) c.integrator.max_steps = integer(*x, "integrator.max_steps");
    if (auto x = member(m, "validity_tol")) c.integrator.validity_tol = number(*x, "integrator.validity_tol");
    if (auto x = member(m, "dt_min")) c.integrator.dt_min = number(*x, "integrator.dt_min");
    if (auto x = member(m, "positivity_interval"))
      c.integrator.positivity_interval = static_cast<int>(integer(*x, "integrator.positivity_interval"));
  }
  if (auto v = member(root, "factorization")) {
    const json m = require_object(*v, "factorization");
    reject_unknown(m, {"checkpoints", "qubit_cap"}, "factorization");
    if (auto x = member(m, "checkpoints")) c.checkpoints = static_cast<int>(integer(*x, "factorization.checkpoints"));
    if (auto x = member(m, "qubit_cap")) c.qubit_cap = static_cast<int>(integer(*x, "factorization.qubit_cap"));
  }
  if (auto v = member(root, "classical_noise")) {
    const json m = require_object(*v, "classical_noise");
    reject_unknown(m, {"n_spins", "component", "alpha", "n_traj", "dt"}, "classical_noise");
    if (auto x = member(m, "n_spins")) c.classical.n_spins = static_cast<int>(integer(*x, "classical_noise.n_spins"));
    if (auto x = member(m, "component"))
      c.classical.v_component = parse_component(string(*x, "classical_noise.component"), "classical_noise.component");
    if (auto x = member(m, "alpha")) c.classical.alpha = number(*x, "classical_noise.alpha");
    if (auto x = member(m, "n_traj")) c.classical.n_traj = integer(*x, "classical_noise.n_traj");
    if (auto x = member(m, "dt")) c.classical.dt = number(*x, "classical_noise.dt");
  }
  if (auto v = member(root, "seed")) {
    if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<long>() >= 0))
      throw ConfigError("config key 'seed' must be a non-negative integer");
    c.seed = v->get<std::uint64_t>();
  }
  if (auto v = member(root, "workers")) c.workers = static_cast<int>(integer(*v, "workers"));
  if (auto v = member(root, "record_wall_time")) c.record_wall_time = boolean(*v, "record_wall_time");
  if (auto v = member(root, "out")) c.out = string(*v, "out");
  if (auto v = member(root, "description")) (void)string(*v, "description");

  c.validate();
  return c;
}

std::string resolve_config_path(const std::string& path) {
  namespace fs = std::filesystem;
  if (fs::exists(path)) return path;
  const fs::path bundled = fs::path(MAJORANA_PRESET_DIR) / fs::path(path).filename();
  if (fs::exists(bundled)) return bundled.string();
  throw ConfigError("config file '" + path + "' not found");
}

RunConfig load_run_config(const std::string& path) {
  const std::string resolved = resolve_config_path(path);
  std::ifstream in(resolved, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + resolved + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str(), resolved);
}

json to_json(const RunConfig& c) {
  json channels = json::array();
  for (Coupling ch : c.channels) channels.push_back(std::string(to_string(ch)));
  return json{
      {"schema_version", c.schema_version},
      {"model", {{"omega", c.model.omega_rabi}, {"kappa", c.model.kappa}, {"t0", c.model.t0}}},
      {"j", c.j_values},
      {"gamma", c.gamma_values},
      {"channels", channels},
      {"temperatures", c.temperatures},
      {"integrator",
       {{"method", std::string(to_string(c.integrator.method))},
        {"dt", c.integrator.dt},
        {"rel_tol", c.integrator.rel_tol},
        {"max_steps", c.integrator.max_steps},
        {"validity_tol", c.integrator.validity_tol},
        {"dt_min", c.integrator.dt_min},
        {"positivity_interval", c.integrator.positivity_interval}}},
      {"factorization", {{"checkpoints", c.checkpoints}, {"qubit_cap", c.qubit_cap}}},
      {"classical_noise",
       {{"n_spins", c.classical.n_spins},
        {"component", component_name(c.classical.v_component)},
        {"alpha", c.classical.alpha},
        {"n_traj", c.classical.n_traj},
        {"dt", c.classical.dt}}},
      {"seed", c.seed},
      {"workers", c.workers},
      {"record_wall_time", c.record_wall_time},
      {"out", c.out}};
}

json run_metadata(const RunConfig& c, const std::string& command) {
  return json{{"artifact", "majorana"},
              {"artifact_version", MAJORANA_VERSION},
              {"command", command},
              {"seed", c.seed},
              {"config", to_json(c)}};
}

json to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back({m(i, k).real(), m(i, k).imag()});
    rows.push_back(row);
  }
  return rows;
}

}  // namespace majorana
