#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "majorana/errors.hpp"
#include "majorana/experiments.hpp"
#include "majorana/factorization.hpp"

namespace majorana {

/// Malformed or inconsistent run configuration (CLI exit code 2).
class ConfigError : public InvalidParameter {
 public:
  using InvalidParameter::InvalidParameter;
};

inline constexpr int kConfigSchemaVersion = 1;

/// Everything a CLI run needs. Loaded from JSON (comments allowed); keys not
/// listed here are rejected, missing keys keep these defaults.
struct RunConfig {
  int schema_version = kConfigSchemaVersion;
  ModelParams model = ModelParams::figure_defaults(HalfInteger(1));
  std::vector<double> j_values{0.5, 1.0, 1.5, 2.0, 2.5};
  std::vector<double> gamma_values = log_grid(1e-4, 1.0, 25);
  std::vector<Coupling> channels{Coupling::Jz};
  std::vector<double> temperatures{0.001};
  IntegratorConfig integrator;
  int checkpoints = 1;
  int qubit_cap = kDefaultQubitCap;
  ClassicalNoiseConfig classical{};
  std::uint64_t seed = 0;
  int workers = 0;
  bool record_wall_time = false;
  std::string out;

  /// Throws ConfigError naming the offending key.
  void validate() const;
  SweepSpec sweep_spec() const;
  std::vector<HalfInteger> spins() const;
};

/// Parses JSON text. Syntax errors report line and column; `origin` names
/// the source in messages.
RunConfig parse_run_config(const std::string& text, const std::string& origin = "<config>");

/// Reads a config file. A bare name such as "fig1.preset" that does not
/// exist relative to the working directory is looked up among the bundled
/// presets.
RunConfig load_run_config(const std::string& path);

std::string resolve_config_path(const std::string& path);

nlohmann::json to_json(const RunConfig& c);

/// Full resolved config plus seed and version, attached to every output.
nlohmann::json run_metadata(const RunConfig& c, const std::string& command);

nlohmann::json to_json(const ComplexMatrix& m);

}  // namespace majorana
