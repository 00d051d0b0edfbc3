#pragma once

#include <functional>
#include <string>

#include "majorana/dissipator.hpp"

namespace majorana {

enum class StepMethod { rk4_fixed, rk4_doubling };

std::string_view to_string(StepMethod m);
StepMethod parse_step_method(std::string_view name);

struct IntegratorConfig {
  StepMethod method = StepMethod::rk4_doubling;
  double dt = 0.01;               // initial (or fixed) step, units 1/Omega
  double rel_tol = 1e-8;          // local error target per step
  long max_steps = 50'000'000;
  double validity_tol = 1e-7;     // trace / positivity monitor threshold
  double dt_min = 1e-5;
  int positivity_interval = 100;  // accepted steps between eigen checks

  void validate() const;
};

struct TimeSpan {
  double start = 0.0;
  double end = 0.0;
};

struct PropagationReport {
  ComplexMatrix final_state;
  long steps_taken = 0;
  long steps_rejected = 0;
  double max_trace_drift = 0.0;
  double max_hermiticity_drift = 0.0;
  double min_eigenvalue_seen = 0.0;
  bool failed = false;
  std::string failure_reason;
};

using DensityRhs = std::function<ComplexMatrix(double, const ComplexMatrix&)>;
using HamiltonianFn = std::function<ComplexMatrix(double)>;

/// Integrates d rho / dt = rhs(t, rho). Trace, Hermiticity and positivity
/// are monitored, never corrected. A breach of validity_tol or of
/// max_steps ends the run with `failed` set.
PropagationReport propagate_density(const DensityRhs& rhs, const ComplexMatrix& rho0,
                                    TimeSpan span, const IntegratorConfig& cfg);

/// The Davies-Spohn master equation of the Majorana model.
PropagationReport propagate_density(const ModelParams& p, const NoiseConfig& n,
                                    const ComplexMatrix& rho0, TimeSpan span,
                                    const IntegratorConfig& cfg);

/// Solves i dU/dt = H(t) U with U(start) = I. Throws NumericalFailure when the
/// step budget runs out or the step underflows dt_min.
ComplexMatrix propagate_unitary(const HamiltonianFn& h_of_t, TimeSpan span,
                                const IntegratorConfig& cfg);

/// As above but starting from `u0` instead of the identity.
ComplexMatrix propagate_unitary(const HamiltonianFn& h_of_t, const ComplexMatrix& u0,
                                TimeSpan span, const IntegratorConfig& cfg);

/// One classic RK4 step of dy/dt = f(t, y).
ComplexMatrix rk4_step(const DensityRhs& f, double t, const ComplexMatrix& y, double h);

}  // namespace majorana
