#include "majorana/experiments.hpp"

#include <omp.h>

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "majorana/errors.hpp"

namespace majorana {

void SweepSpec::validate() const {
  if (j_list.empty()) throw InvalidParameter("sweep: j list is empty");
  if (gamma_grid.empty()) throw InvalidParameter("sweep: gamma grid is empty");
  if (channels.empty()) throw InvalidParameter("sweep: channel list is empty");
  if (temperatures.empty()) throw InvalidParameter("sweep: temperature list is empty");
  for (double g : gamma_grid)
    if (!(g >= 0.0)) throw InvalidParameter("sweep: gamma values must be >= 0");
  for (double t : temperatures)
    if (!(t >= 0.0)) throw InvalidParameter("sweep: temperatures must be >= 0");
  for (Coupling c : channels)
    if (c == Coupling::Custom)
      throw InvalidParameter("sweep: only Jz and Jx channels can be swept");
  model.validate();
  integrator.validate();
}

std::size_t SweepSpec::size() const {
  return j_list.size() * channels.size() * temperatures.size() * gamma_grid.size();
}

std::vector<double> log_grid(double lo, double hi, int n) {
  if (n < 1 || !(lo > 0.0) || !(hi >= lo))
    throw InvalidParameter("log_grid: need n >= 1 and 0 < lo <= hi");
  std::vector<double> out(static_cast<std::size_t>(n));
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = std::pow(10.0, a + (b - a) * i / (n - 1));
  out.back() = hi;
  return out;
}

ResultRecord transfer_efficiency(HalfInteger j, const NoiseConfig& n, const ModelParams& p,
                                 const IntegratorConfig& cfg) {
  const auto started = std::chrono::steady_clock::now();
  ModelParams model = p;
  model.j = j;

  const int d = j.dim();
  ComplexMatrix rho0 = ComplexMatrix::Zero(d, d);
  rho0(d - 1, d - 1) = 1.0;  // |j,-j>_z

  const auto report = propagate_density(model, n, rho0, {-model.t0, model.t0}, cfg);

  ResultRecord r;
  r.j = j;
  r.gamma = n.gamma_flat;
  r.temperature = n.temperature;
  r.channel = n.coupling;
  r.efficiency = report.final_state(0, 0).real();  // |j,j>_z
  r.trace_drift = report.max_trace_drift;
  r.hermiticity_drift = report.max_hermiticity_drift;
  r.min_eigenvalue = report.min_eigenvalue_seen;
  r.failed = report.failed;
  r.failure_reason = report.failure_reason;
  r.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return r;
}

namespace {

struct GridPoint {
  HalfInteger j;
  Coupling channel;
  double temperature;
  double gamma;
};

std::vector<GridPoint> enumerate(const SweepSpec& spec) {
  std::vector<GridPoint> points;
  points.reserve(spec.size());
  for (HalfInteger j : spec.j_list)
    for (Coupling c : spec.channels)
      for (double temp : spec.temperatures)
        for (double g : spec.gamma_grid) points.push_back({j, c, temp, g});
  return points;
}

ResultRecord run_point(const SweepSpec& spec, const GridPoint& g, const SweepOptions& opts) {
  NoiseConfig noise;
  noise.coupling = g.channel;
  noise.gamma_flat = g.gamma;
  noise.temperature = g.temperature;
  ResultRecord r;
  try {
    r = transfer_efficiency(g.j, noise, spec.model, spec.integrator);
  } catch (const std::exception& e) {
    r.j = g.j;
    r.gamma = g.gamma;
    r.temperature = g.temperature;
    r.channel = g.channel;
    r.failed = true;
    r.failure_reason = e.what();
  }
  if (!opts.record_wall_time) r.wall_time_s = 0.0;
  return r;
}

}  // namespace

std::vector<ResultRecord> run_sweep(const SweepSpec& spec, const SweepOptions& opts) {
  spec.validate();
  const auto points = enumerate(spec);
  std::vector<ResultRecord> records(points.size());
  const int workers = opts.workers > 0 ? opts.workers : omp_get_max_threads();
  const auto count = static_cast<long>(points.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
  for (long i = 0; i < count; ++i) {
    const auto k = static_cast<std::size_t>(i);
    records[k] = run_point(spec, points[k], opts);
  }
  return records;
}

std::vector<ResultRecord> run_sweep_serial(const SweepSpec& spec, const SweepOptions& opts) {
  spec.validate();
  std::vector<ResultRecord> records;
  for (const auto& g : enumerate(spec)) records.push_back(run_point(spec, g, opts));
  return records;
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& out, const std::vector<ResultRecord>& records) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    out << format_double(r.j.value()) << ',' << format_double(r.gamma) << ','
        << format_double(r.temperature) << ',' << to_string(r.channel) << ','
        << format_double(r.efficiency) << ',' << format_double(r.trace_drift) << ','
        << format_double(r.min_eigenvalue) << ',' << (r.failed ? 1 : 0) << ','
        << format_double(r.wall_time_s) << '\n';
  }
}

namespace {

double parse_double(const std::string& field, std::size_t line) {
  double v = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size())
    throw InvalidParameter("csv line " + std::to_string(line) + ": bad number '" + field + "'");
  return v;
}

}  // namespace

std::vector<ResultRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader)
    throw InvalidParameter("csv: header does not match the result schema");
  std::vector<ResultRecord> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 9)
      throw InvalidParameter("csv line " + std::to_string(line_no) + ": expected 9 fields");
    ResultRecord r;
    r.j = HalfInteger::from_double(parse_double(f[0], line_no));
    r.gamma = parse_double(f[1], line_no);
    r.temperature = parse_double(f[2], line_no);
    r.channel = parse_coupling(f[3]);
    r.efficiency = parse_double(f[4], line_no);
    r.trace_drift = parse_double(f[5], line_no);
    r.min_eigenvalue = parse_double(f[6], line_no);
    r.failed = f[7] == "1";
    r.wall_time_s = parse_double(f[8], line_no);
    out.push_back(r);
  }
  return out;
}

void write_csv_file(const std::string& path, const std::vector<ResultRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_csv(out, records);
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace majorana
