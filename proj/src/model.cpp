#include "majorana/model.hpp"

#include <cmath>

#include "majorana/errors.hpp"

namespace majorana {

ModelParams ModelParams::figure_defaults(HalfInteger j) {
  ModelParams p;
  p.omega_rabi = 1.0;
  p.kappa = 0.1;
  p.t0 = 25.0 * p.omega_rabi / p.kappa;
  p.j = j;
  return p;
}

void ModelParams::validate() const {
  if (!(omega_rabi > 0.0) || !std::isfinite(omega_rabi))
    throw InvalidParameter("omega_rabi must be positive");
  if (!(kappa > 0.0) || !std::isfinite(kappa))
    throw InvalidParameter("kappa must be positive");
  if (!(t0 > 0.0) || !std::isfinite(t0))
    throw InvalidParameter("t0 must be positive");
}

double mixing_angle(double t, const ModelParams& p) {
  return std::atan2(std::sqrt(2.0) * p.omega_rabi, p.kappa * t);
}

double gap(double t, const ModelParams& p) {
  const double sweep = p.kappa * t;
  return std::sqrt(sweep * sweep + 2.0 * p.omega_rabi * p.omega_rabi);
}

namespace {

void check_spin(const ModelParams& p, const SpinSet& s) {
  if (p.j != s.j)
    throw InvalidParameter("spin set j = " + s.j.to_string() +
                           " does not match model j = " + p.j.to_string());
}

}  // namespace

ComplexMatrix hamiltonian(double t, const ModelParams& p, const SpinSet& s) {
  check_spin(p, s);
  return (p.kappa * t) * s.jz + (std::sqrt(2.0) * p.omega_rabi) * s.jx;
}

ComplexMatrix adiabatic_basis(double t, const ModelParams& p, const SpinSet& s) {
  check_spin(p, s);
  return rotation_y(s, -mixing_angle(t, p));
}

InstantaneousFrame frame(double t, const ModelParams& p, const SpinSet& s) {
  InstantaneousFrame f;
  f.t = t;
  f.theta = mixing_angle(t, p);
  f.omega = gap(t, p);
  f.eigvecs = adiabatic_basis(t, p, s);
  f.projectors.reserve(static_cast<std::size_t>(s.dim()));
  for (int i = 0; i < s.dim(); ++i)
    f.projectors.push_back(f.eigvecs.col(i) * f.eigvecs.col(i).adjoint());
  return f;
}

}  // namespace majorana
