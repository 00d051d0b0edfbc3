#include "majorana/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "majorana/errors.hpp"

namespace majorana {

std::string_view to_string(StepMethod m) {
  return m == StepMethod::rk4_fixed ? "rk4_fixed" : "rk4_doubling";
}

StepMethod parse_step_method(std::string_view name) {
  if (name == "rk4_fixed") return StepMethod::rk4_fixed;
  if (name == "rk4_doubling") return StepMethod::rk4_doubling;
  throw InvalidParameter("unknown integrator method '" + std::string(name) +
                         "' (expected rk4_fixed or rk4_doubling)");
}

void IntegratorConfig::validate() const {
  if (!(dt > 0.0)) throw InvalidParameter("integrator dt must be positive");
  if (!(rel_tol > 0.0)) throw InvalidParameter("integrator rel_tol must be positive");
  if (max_steps < 1) throw InvalidParameter("integrator max_steps must be >= 1");
  if (!(validity_tol > 0.0)) throw InvalidParameter("validity_tol must be positive");
  if (!(dt_min > 0.0)) throw InvalidParameter("dt_min must be positive");
  if (positivity_interval < 1) throw InvalidParameter("positivity_interval must be >= 1");
}

namespace {

ComplexMatrix rk4_from(const DensityRhs& f, double t, const ComplexMatrix& y, double h,
                       const ComplexMatrix& k1) {
  const ComplexMatrix k2 = f(t + 0.5 * h, y + (0.5 * h) * k1);
  const ComplexMatrix k3 = f(t + 0.5 * h, y + (0.5 * h) * k2);
  const ComplexMatrix k4 = f(t + h, y + h * k3);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

ComplexMatrix rk4_step(const DensityRhs& f, double t, const ComplexMatrix& y, double h) {
  return rk4_from(f, t, y, h, f(t, y));
}

namespace {

enum class Outcome { done, step_budget, step_underflow, observer_stop };

// Drives rk4 over `span`. `accept(t, y)` runs after every accepted step and
// returns false to stop. Step doubling compares one step of h against two of
// h/2 and keeps the latter, extrapolated.
template <typename Accept>
Outcome drive(const DensityRhs& f, ComplexMatrix& y, TimeSpan span,
              const IntegratorConfig& cfg, long& steps, long& rejected,
              Accept&& accept) {
  const double length = span.end - span.start;
  if (length == 0.0) return Outcome::done;
  const double direction = length > 0.0 ? 1.0 : -1.0;
  double t = span.start;
  double h = std::min(cfg.dt, std::abs(length));
  double t_carry = 0.0;

  if (cfg.method == StepMethod::rk4_fixed) {
    const long n = std::max(1L, static_cast<long>(std::ceil(std::abs(length) / cfg.dt - 1e-9)));
    const double step = length / static_cast<double>(n);
    if (n > cfg.max_steps) return Outcome::step_budget;
    for (long i = 0; i < n; ++i) {
      y = rk4_step(f, t, y, step);
      t = span.start + static_cast<double>(i + 1) * step;
      ++steps;
      if (!accept(t, y)) return Outcome::observer_stop;
    }
    return Outcome::done;
  }

  while (direction * (span.end - t) > 0.0) {
    if (steps + rejected >= cfg.max_steps) return Outcome::step_budget;
    const double remaining = std::abs(span.end - t);
    const bool last = h >= remaining * (1.0 - 1e-12);
    const double used = last ? remaining : h;
    const double signed_h = direction * used;

    const ComplexMatrix k1 = f(t, y);  // shared by the full and first half step
    const ComplexMatrix full = rk4_from(f, t, y, signed_h, k1);
    const ComplexMatrix mid = rk4_from(f, t, y, 0.5 * signed_h, k1);
    ComplexMatrix halves = rk4_step(f, t + 0.5 * signed_h, mid, 0.5 * signed_h);
    const double err = (halves - full).norm();
    const double tol = cfg.rel_tol * std::max(1.0, y.norm());

    if (err > tol && used > cfg.dt_min) {
      ++rejected;
      h = std::max(0.5 * used, cfg.dt_min);
      continue;
    }
    if (err > tol) return Outcome::step_underflow;

    // Local extrapolation: the difference is 15/16 of the error of `full`,
    // so this removes the leading h^5 term of the two-half-step result.
    y = halves + (halves - full) / 15.0;
    if (last) {
      t = span.end;
    } else {
      // Compensated sum: over 1e5+ steps plain accumulation drifts t by
      // ~1e-9, which shows up as phase error where kappa t is large.
      const double inc = signed_h - t_carry;
      const double next = t + inc;
      t_carry = (next - t) - inc;
      t = next;
    }
    ++steps;
    if (!accept(t, y)) return Outcome::observer_stop;
    if (!last && 32.0 * err < tol) h = 2.0 * used;
  }
  return Outcome::done;
}

}  // namespace

PropagationReport propagate_density(const DensityRhs& rhs, const ComplexMatrix& rho0,
                                    TimeSpan span, const IntegratorConfig& cfg) {
  cfg.validate();
  if (rho0.rows() != rho0.cols())
    throw InvalidParameter("propagate_density: initial state must be square");
  if (!is_hermitian(rho0, cfg.validity_tol))
    throw InvalidParameter("propagate_density: initial state is not Hermitian");
  if (std::abs(rho0.trace().real() - 1.0) > cfg.validity_tol)
    throw InvalidParameter("propagate_density: initial state must have unit trace");
  const double min0 = hermitian_eigensystem(rho0, cfg.validity_tol).values(0);
  if (min0 < -cfg.validity_tol)
    throw InvalidParameter("propagate_density: initial state is not positive semidefinite");

  PropagationReport report;
  report.min_eigenvalue_seen = min0;
  ComplexMatrix y = rho0;

  auto monitor = [&](double t, const ComplexMatrix& rho, bool force_eigen) {
    report.max_trace_drift =
        std::max(report.max_trace_drift, std::abs(rho.trace() - Complex(1.0, 0.0)));
    report.max_hermiticity_drift =
        std::max(report.max_hermiticity_drift, (rho - rho.adjoint()).norm());
    if (force_eigen || report.steps_taken % cfg.positivity_interval == 0) {
      const ComplexMatrix sym = 0.5 * (rho + rho.adjoint());
      report.min_eigenvalue_seen =
          std::min(report.min_eigenvalue_seen, hermitian_eigensystem(sym).values(0));
    }
    if (report.max_trace_drift > cfg.validity_tol ||
        report.min_eigenvalue_seen < -cfg.validity_tol) {
      report.failed = true;
      report.failure_reason = "state validity lost at t = " + std::to_string(t) +
                              " (trace drift " + std::to_string(report.max_trace_drift) +
                              ", min eigenvalue " +
                              std::to_string(report.min_eigenvalue_seen) + ")";
      return false;
    }
    return true;
  };

  const Outcome outcome = drive(rhs, y, span, cfg, report.steps_taken,
                                report.steps_rejected, [&](double t, const ComplexMatrix& rho) {
                                  return monitor(t, rho, false);
                                });
  if (outcome == Outcome::done) monitor(span.end, y, true);
  if (outcome == Outcome::step_budget) {
    report.failed = true;
    report.failure_reason = "max_steps exceeded";
  } else if (outcome == Outcome::step_underflow) {
    report.failed = true;
    report.failure_reason = "step size fell below dt_min";
  }
  report.final_state = std::move(y);
  return report;
}

PropagationReport propagate_density(const ModelParams& p, const NoiseConfig& n,
                                    const ComplexMatrix& rho0, TimeSpan span,
                                    const IntegratorConfig& cfg) {
  const MasterEquation equation(p, n);
  return propagate_density(
      [&equation](double t, const ComplexMatrix& rho) { return equation(t, rho); }, rho0,
      span, cfg);
}

ComplexMatrix propagate_unitary(const HamiltonianFn& h_of_t, const ComplexMatrix& u0,
                                TimeSpan span, const IntegratorConfig& cfg) {
  cfg.validate();
  const DensityRhs rhs = [&h_of_t](double t, const ComplexMatrix& u) -> ComplexMatrix {
    return -kI * (h_of_t(t) * u);
  };
  ComplexMatrix u = u0;
  long steps = 0;
  long rejected = 0;
  const Outcome outcome =
      drive(rhs, u, span, cfg, steps, rejected, [](double, const ComplexMatrix&) { return true; });
  if (outcome == Outcome::step_budget)
    throw NumericalFailure("propagate_unitary: max_steps exceeded");
  if (outcome == Outcome::step_underflow)
    throw NumericalFailure("propagate_unitary: step size fell below dt_min");
  return u;
}

ComplexMatrix propagate_unitary(const HamiltonianFn& h_of_t, TimeSpan span,
                                const IntegratorConfig& cfg) {
  const Eigen::Index d = h_of_t(span.start).rows();
  return propagate_unitary(h_of_t, ComplexMatrix::Identity(d, d), span, cfg);
}

}  // namespace majorana
