// Command-line front end: single runs, figure sweeps, factorization checks
// and the classical-noise ensemble. Exit codes: 0 ok, 1 numerical failure,
// 2 usage or configuration error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "majorana/experiments.hpp"
#include "majorana/factorization.hpp"
#include "majorana/run_config.hpp"

namespace {

using majorana::RunConfig;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitNumerical = 1;
constexpr int kExitUsage = 2;

struct Overrides {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<double> j;
  std::optional<double> gamma;
  std::optional<double> temp;
  std::optional<std::string> channel;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "JSON run config or bundled preset name");
  cmd->add_option("--out", o.out, "output path");
  cmd->add_option("--seed", o.seed, "RNG seed");
  cmd->add_option("--workers", o.workers, "worker threads (0 = all)");
  cmd->add_option("--j", o.j, "spin quantum number (0.5, 1, 1.5, ...)");
  cmd->add_option("--gamma", o.gamma, "flat bath rate gamma / Omega");
  cmd->add_option("--temp", o.temp, "temperature k_B T / Omega");
  cmd->add_option("--channel", o.channel, "coupling operator")
      ->check(CLI::IsMember({"Jz", "Jx"}));
}

RunConfig resolve(const Overrides& o) {
  RunConfig c = o.config.empty() ? RunConfig{} : majorana::load_run_config(o.config);
  if (!o.out.empty()) c.out = o.out;
  if (o.seed) c.seed = *o.seed;
  if (o.workers) c.workers = *o.workers;
  if (o.j) c.j_values = {*o.j};
  if (o.gamma) c.gamma_values = {*o.gamma};
  if (o.temp) c.temperatures = {*o.temp};
  if (o.channel) c.channels = {majorana::parse_coupling(*o.channel)};
  c.validate();
  c.classical.seed = c.seed;
  c.classical.workers = c.workers;
  return c;
}

void write_json(const std::string& path, const json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << doc.dump(2) << '\n';
}

majorana::NoiseConfig first_noise(const RunConfig& c) {
  majorana::NoiseConfig n;
  n.coupling = c.channels.front();
  n.gamma_flat = c.gamma_values.front();
  n.temperature = c.temperatures.front();
  return n;
}

json record_json(const majorana::ResultRecord& r) {
  return json{{"j", r.j.value()},
              {"gamma_over_omega", r.gamma},
              {"kBT_over_omega", r.temperature},
              {"channel", std::string(majorana::to_string(r.channel))},
              {"efficiency", r.efficiency},
              {"trace_drift", r.trace_drift},
              {"hermiticity_drift", r.hermiticity_drift},
              {"min_eigenvalue", r.min_eigenvalue},
              {"failed", r.failed},
              {"failure_reason", r.failure_reason},
              {"wall_time_s", r.wall_time_s}};
}

int cmd_single(const RunConfig& c) {
  const auto j = c.spins().front();
  auto r = majorana::transfer_efficiency(j, first_noise(c), c.model, c.integrator);
  if (!c.record_wall_time) r.wall_time_s = 0.0;
  std::cout << "j = " << j.to_string() << "\n"
            << "channel = " << majorana::to_string(r.channel) << "\n"
            << "gamma_over_omega = " << majorana::format_double(r.gamma) << "\n"
            << "kBT_over_omega = " << majorana::format_double(r.temperature) << "\n"
            << "efficiency = " << majorana::format_double(r.efficiency) << "\n"
            << "trace_drift = " << majorana::format_double(r.trace_drift) << "\n"
            << "hermiticity_drift = " << majorana::format_double(r.hermiticity_drift) << "\n"
            << "min_eigenvalue = " << majorana::format_double(r.min_eigenvalue) << "\n";
  if (!c.out.empty())
    write_json(c.out, json{{"metadata", majorana::run_metadata(c, "single")},
                           {"result", record_json(r)}});
  if (r.failed) {
    std::cerr << "propagation failed: " << r.failure_reason << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}

int cmd_sweep(const RunConfig& c) {
  const std::string out = c.out.empty() ? "sweep.csv" : c.out;
  const auto records = majorana::run_sweep(c.sweep_spec(), {c.workers, c.record_wall_time});
  majorana::write_csv_file(out, records);
  write_json(out + ".meta.json", majorana::run_metadata(c, "sweep"));
  long failed = 0;
  for (const auto& r : records) failed += r.failed ? 1 : 0;
  std::cout << "wrote " << records.size() << " records to " << out << " (" << failed
            << " failed)\n";
  return failed > 0 ? kExitNumerical : kExitOk;
}

int cmd_factorization(const RunConfig& c) {
  const auto j = c.spins().front();
  const auto n = first_noise(c);
  const auto report =
      majorana::run_factorization(j, n, c.model, c.integrator, c.checkpoints, c.qubit_cap);
  std::cout << "j = " << j.to_string() << "\n"
            << "channel = " << majorana::to_string(n.coupling) << "\n"
            << "gamma_over_omega = " << majorana::format_double(n.gamma_flat) << "\n"
            << "unitary_residual = " << majorana::format_double(report.unitary_residual) << "\n"
            << "lindblad_trace_distance = "
            << majorana::format_double(report.lindblad_trace_distance) << "\n";
  if (!c.out.empty()) {
    json cps = json::array();
    for (const auto& cp : report.checkpoints)
      cps.push_back({{"t", cp.t},
                     {"unitary_residual", cp.unitary_residual},
                     {"lindblad_trace_distance", cp.lindblad_trace_distance}});
    write_json(c.out, json{{"metadata", majorana::run_metadata(c, "factorization")},
                           {"j", j.value()},
                           {"unitary_residual", report.unitary_residual},
                           {"lindblad_trace_distance", report.lindblad_trace_distance},
                           {"checkpoints", cps}});
    std::ofstream csv(c.out + ".checkpoints.csv", std::ios::binary);
    csv << "t,unitary_residual,lindblad_trace_distance\n";
    for (const auto& cp : report.checkpoints)
      csv << majorana::format_double(cp.t) << ',' << majorana::format_double(cp.unitary_residual)
          << ',' << majorana::format_double(cp.lindblad_trace_distance) << '\n';
  }
  return kExitOk;
}

int cmd_classical_noise(const RunConfig& c) {
  const auto r = majorana::classical_noise_ensemble(c.model, c.classical, c.integrator);
  const double deviation = (r.mc_difference - r.analytic_cross_term).norm();
  std::cout << "alpha = " << majorana::format_double(r.alpha) << "\n"
            << "n_traj = " << r.n_traj << "\n"
            << "seed = " << c.seed << "\n"
            << "mc_difference_norm = " << majorana::format_double(r.mc_difference.norm()) << "\n"
            << "analytic_cross_term_norm = "
            << majorana::format_double(r.analytic_cross_term.norm()) << "\n"
            << "deviation_norm = " << majorana::format_double(deviation) << "\n"
            << "statistical_error = " << majorana::format_double(r.statistical_error) << "\n";
  if (!r.warning.empty()) std::cerr << "warning: " << r.warning << "\n";
  if (!c.out.empty())
    write_json(c.out, json{{"metadata", majorana::run_metadata(c, "classical-noise")},
                           {"alpha", r.alpha},
                           {"n_traj", r.n_traj},
                           {"mc_difference", majorana::to_json(r.mc_difference)},
                           {"analytic_cross_term", majorana::to_json(r.analytic_cross_term)},
                           {"standard_error", majorana::to_json(r.standard_error)},
                           {"statistical_error", r.statistical_error},
                           {"warning", r.warning}});
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Open multistate Majorana model: simulation and factorization checks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(MAJORANA_VERSION));

  Overrides single_o, sweep_o, fact_o, noise_o;
  auto* single = app.add_subcommand("single", "one transfer-efficiency run");
  auto* sweep = app.add_subcommand("sweep", "efficiency sweep over j, channel, T and gamma");
  auto* fact = app.add_subcommand("factorization", "spin-1/2 factorization checks");
  auto* noise = app.add_subcommand("classical-noise", "white classical noise ensemble");
  add_common(single, single_o);
  add_common(sweep, sweep_o);
  add_common(fact, fact_o);
  add_common(noise, noise_o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (single->parsed()) return cmd_single(resolve(single_o));
    if (sweep->parsed()) return cmd_sweep(resolve(sweep_o));
    if (fact->parsed()) return cmd_factorization(resolve(fact_o));
    if (noise->parsed()) return cmd_classical_noise(resolve(noise_o));
  } catch (const majorana::InvalidParameter& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const majorana::ResourceLimit& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const majorana::NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
