#pragma once

#include <vector>

#include "majorana/spin_algebra.hpp"

namespace majorana {

/// Majorana model H(t) = kappa t Jz + sqrt(2) Omega Jx in units where
/// Omega (omega_rabi) is the frequency unit.
struct ModelParams {
  double omega_rabi = 1.0;
  double kappa = 0.1;   // sweep rate, units of Omega^2
  double t0 = 250.0;    // half window, the sweep runs over [-t0, t0]
  HalfInteger j{2};

  /// kappa / Omega^2 = 0.1 and kappa t0 / Omega = 25.
  static ModelParams figure_defaults(HalfInteger j);

  /// Throws InvalidParameter unless omega_rabi, kappa and t0 are positive.
  void validate() const;
};

/// theta = atan2(sqrt(2) Omega, kappa t), in (0, pi).
double mixing_angle(double t, const ModelParams& p);

/// omega(t) = sqrt((kappa t)^2 + 2 Omega^2).
double gap(double t, const ModelParams& p);

ComplexMatrix hamiltonian(double t, const ModelParams& p, const SpinSet& s);

struct InstantaneousFrame {
  double t = 0.0;
  double theta = 0.0;
  double omega = 0.0;
  // Column i is |j, m>_theta = U_y(-theta) |j, m>_z with m = j - i; its
  // energy is m * omega.
  ComplexMatrix eigvecs;
  std::vector<ComplexMatrix> projectors;

  int dim() const { return static_cast<int>(eigvecs.cols()); }
};

InstantaneousFrame frame(double t, const ModelParams& p, const SpinSet& s);

/// Eigenvector matrix of `frame` without the projectors.
ComplexMatrix adiabatic_basis(double t, const ModelParams& p, const SpinSet& s);

}  // namespace majorana
