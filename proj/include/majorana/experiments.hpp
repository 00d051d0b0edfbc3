#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "majorana/integrator.hpp"

namespace majorana {

struct SweepSpec {
  std::vector<HalfInteger> j_list;
  std::vector<double> gamma_grid;       // gamma / Omega
  std::vector<Coupling> channels;
  std::vector<double> temperatures;     // k_B T / Omega
  ModelParams model;                    // model.j is ignored
  IntegratorConfig integrator;

  /// Throws InvalidParameter on empty grids or negative values.
  void validate() const;
  std::size_t size() const;
};

struct ResultRecord {
  HalfInteger j;
  double gamma = 0.0;
  double temperature = 0.0;
  Coupling channel = Coupling::Jz;
  double efficiency = 0.0;
  double trace_drift = 0.0;
  double hermiticity_drift = 0.0;  // not part of the CSV schema
  double min_eigenvalue = 0.0;
  bool failed = false;
  std::string failure_reason;      // not part of the CSV schema
  double wall_time_s = 0.0;
};

/// `n` points log-spaced over [lo, hi] (inclusive).
std::vector<double> log_grid(double lo, double hi, int n);

/// Starts in |j,-j>_z at -t0 and returns the population of |j,j>_z at +t0.
/// A failed propagation is reported through the record, not thrown.
ResultRecord transfer_efficiency(HalfInteger j, const NoiseConfig& n, const ModelParams& p,
                                 const IntegratorConfig& cfg);

struct SweepOptions {
  int workers = 0;                // 0 = all available threads
  bool record_wall_time = false;  // off keeps the CSV byte-reproducible
};

/// Grid points run data-parallel; records come back in the fixed order
/// (j, channel, T, gamma) whatever the completion order.
std::vector<ResultRecord> run_sweep(const SweepSpec& spec, const SweepOptions& opts = {});

/// Single-threaded reference for run_sweep.
std::vector<ResultRecord> run_sweep_serial(const SweepSpec& spec,
                                           const SweepOptions& opts = {});

inline constexpr const char* kCsvHeader =
    "j,gamma_over_omega,kBT_over_omega,channel,efficiency,trace_drift,min_eigenvalue,"
    "failed,wall_time_s";

/// Shortest round-trip decimal form of a double.
std::string format_double(double x);

void write_csv(std::ostream& out, const std::vector<ResultRecord>& records);
/// Throws InvalidParameter on a header mismatch or a malformed row.
std::vector<ResultRecord> read_csv(std::istream& in);

void write_csv_file(const std::string& path, const std::vector<ResultRecord>& records);

}  // namespace majorana
