#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "majorana/model.hpp"

namespace majorana {

enum class Coupling { Jz, Jx, Custom };

std::string_view to_string(Coupling c);
/// "Jz", "Jx" or "custom"; throws InvalidParameter otherwise.
Coupling parse_coupling(std::string_view name);

/// System-bath coupling X (x) B with a flat bath spectrum. All bath details
/// are absorbed into the single rate gamma_flat.
struct NoiseConfig {
  Coupling coupling = Coupling::Jz;
  ComplexMatrix custom;        // used when coupling == Custom
  double gamma_flat = 0.0;     // units of Omega
  double temperature = 0.0;    // k_B T in units of Omega
  bool include_nu_zero = false;
  double nu_zero_rate = 0.0;   // rate of the nu = 0 term when included

  void validate() const;
};

/// The coupling operator X for a given spin.
ComplexMatrix coupling_operator(const NoiseConfig& n, const SpinSet& s);

struct LindbladTerm {
  int nu = 0;          // X(nu) lowers the adiabatic label m by nu
  ComplexMatrix x_nu;
  double rate = 0.0;
};

struct LindbladTerms {
  std::vector<LindbladTerm> terms;

  const LindbladTerm* find(int nu) const;
};

/// X(nu) = sum over m' - m = nu of Pi_m X Pi_m', for nu in [-2j, 2j].
/// nu = 0 is included only when include_nu_zero is set. Rates are left 0.
LindbladTerms jump_operators(const InstantaneousFrame& f, const ComplexMatrix& x,
                             bool include_nu_zero = false);
LindbladTerms jump_operators(const InstantaneousFrame& f, const NoiseConfig& n,
                             const SpinSet& s);

/// Mean thermal occupation 1 / (exp(nu_bar / T) - 1); zero at T = 0.
double bose_occupation(double nu_bar, double temperature);

/// gamma (N + 1) for nu > 0 (emission), gamma N for nu < 0 (absorption),
/// with N evaluated at the Bohr frequency |nu| * omega_gap.
double rate(int nu, double omega_gap, const NoiseConfig& n);

void assign_rates(LindbladTerms& terms, double omega_gap, const NoiseConfig& n);

/// sum_k rate_k (X_k rho X_k^dagger - 1/2 {X_k^dagger X_k, rho}).
ComplexMatrix apply_dissipator(const LindbladTerms& terms, const ComplexMatrix& rho);

/// Full Davies-Spohn right-hand side at time t.
ComplexMatrix lindblad_rhs(double t, const ComplexMatrix& rho, const ModelParams& p,
                           const NoiseConfig& n, const SpinSet& s);

/// Same generator built the slow way: explicit projectors, dense X(nu) and
/// apply_dissipator. Kept as the reference for the banded kernel.
ComplexMatrix lindblad_rhs_reference(double t, const ComplexMatrix& rho,
                                     const ModelParams& p, const NoiseConfig& n,
                                     const SpinSet& s);

/// Reusable generator for the integrator. Works in the instantaneous
/// eigenbasis, where every X(nu) is a single band. The frame at the last few
/// evaluation times is cached, so one instance must not be shared between
/// threads.
class MasterEquation {
 public:
  MasterEquation(const ModelParams& p, const NoiseConfig& n);

  ComplexMatrix operator()(double t, const ComplexMatrix& rho) const;

  const SpinSet& spin() const { return spin_; }
  const ModelParams& params() const { return params_; }
  const NoiseConfig& noise() const { return noise_; }

 private:
  struct Band {
    int nu = 0;
    Eigen::VectorXcd values;  // sqrt(rate) X(nu)(a, a - nu)
  };
  struct FrameData {
    bool valid = false;
    double t = 0.0;
    double omega = 0.0;
    ComplexMatrix w;
    std::vector<Band> bands;
    Eigen::VectorXd decay;
  };

  const FrameData& frame_at(double t) const;

  ModelParams params_;
  NoiseConfig noise_;
  SpinSet spin_;
  ComplexMatrix coupling_;
  // An RK4 doubling step evaluates at five distinct times.
  mutable std::array<FrameData, 6> cache_;
  mutable std::size_t next_slot_ = 0;
};

}  // namespace majorana
