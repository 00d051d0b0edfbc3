#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "majorana/integrator.hpp"

namespace majorana {

/// ||U_j - V^dagger u^{(x)2j} V||_F where U_j evolves the spin-j model and u a
/// single spin-1/2 in the same field over `span` (default [-t0, t0]).
double unitary_factorization_check(HalfInteger j, const ModelParams& p,
                                   const IntegratorConfig& cfg,
                                   std::optional<TimeSpan> span = std::nullopt,
                                   int qubit_cap = kDefaultQubitCap);

/// D[A1 + A2](rho) - (D[A1](rho) + D[A2](rho)) with D[A] the unit-rate
/// Lindblad dissipator.
ComplexMatrix dissipator_identity_gap(const ComplexMatrix& a1, const ComplexMatrix& a2,
                                      const ComplexMatrix& rho);

/// A1 rho A2^dagger + A2 rho A1^dagger - 1/2 {A1^dagger A2 + A2^dagger A1, rho}.
ComplexMatrix dissipator_cross_terms(const ComplexMatrix& a1, const ComplexMatrix& a2,
                                     const ComplexMatrix& rho);

/// Right-hand side for 2j spin-1/2 particles in the common field, each with
/// its own Davies-Spohn bath built from the single-spin frame.
DensityRhs independent_spins_rhs(const ModelParams& p, const NoiseConfig& n, int n_spins,
                                 int qubit_cap = kDefaultQubitCap);

/// Trace distance at +t0 between the spin-j master equation (embedded with
/// the Dicke isometry) and the independent-spin model, both started in
/// the all-down state at -t0. Coupling must be Jz or Jx.
double lindblad_factorization_residual(HalfInteger j, const NoiseConfig& n,
                                       const ModelParams& p, const IntegratorConfig& cfg,
                                       int qubit_cap = kDefaultQubitCap);

struct FactorizationCheckpoint {
  double t = 0.0;
  double unitary_residual = 0.0;
  double lindblad_trace_distance = 0.0;
};

struct FactorizationReport {
  HalfInteger j;
  double unitary_residual = 0.0;
  double lindblad_trace_distance = 0.0;
  std::vector<FactorizationCheckpoint> checkpoints;
};

/// Both checks over [-t0, t0], sampled at `n_checkpoints` evenly spaced
/// times (the last one is +t0).
FactorizationReport run_factorization(HalfInteger j, const NoiseConfig& n,
                                      const ModelParams& p, const IntegratorConfig& cfg,
                                      int n_checkpoints = 1,
                                      int qubit_cap = kDefaultQubitCap);

struct ClassicalNoiseConfig {
  int n_spins = 2;
  Component v_component = Component::z;
  double alpha = 0.0;        // noise strength
  long n_traj = 1000;
  std::uint64_t seed = 0;
  double dt = 0.01;          // trajectory step; eta is constant within it
  int workers = 0;           // 0 = all available threads

  void validate(int qubit_cap = kDefaultQubitCap) const;
};

struct ClassicalNoiseReport {
  double alpha = 0.0;
  long n_traj = 0;
  ComplexMatrix mean_full;            // <U~> of the whole system
  ComplexMatrix mean_single;          // <U~_k>, identical for every k
  ComplexMatrix mc_difference;        // <U~> - (x)_k <U~_k>
  ComplexMatrix analytic_cross_term;  // second-order prediction
  ComplexMatrix standard_error;       // per-entry jackknife error of mc_difference
  double statistical_error = 0.0;     // ||standard_error||_F
  std::string warning;
};

/// Monte Carlo over white-noise realizations of
///   i dU/dt = [sum_k H_k(t) + alpha eta(t) sum_k V_k] U
/// with eta piecewise constant, variance 1/dt per step. Whole-system and
/// single-spin propagators share each realization. Trajectories are summed
/// in fixed chunks, so the result is bitwise identical for any worker count.
ClassicalNoiseReport classical_noise_ensemble(const ModelParams& p,
                                              const ClassicalNoiseConfig& c,
                                              const IntegratorConfig& quadrature_cfg);

/// Single-threaded reference for classical_noise_ensemble.
ClassicalNoiseReport classical_noise_ensemble_serial(const ModelParams& p,
                                                     const ClassicalNoiseConfig& c,
                                                     const IntegratorConfig& quadrature_cfg);

/// W_(2)(t) - (x)_k W_k(2)(t)
///   = -(alpha^2 / 2) [(x)_k U_k(t)] sum_{k != l} int V'_k(s) V'_l(s) ds
/// over `span`, with V'_k(s) = U_k^dagger(s) V_k U_k(s). Simpson quadrature,
/// refined until two levels agree to 1e-10 relative.
ComplexMatrix second_order_cross_term(const HamiltonianFn& h_single,
                                      const ComplexMatrix& v_single, int n_spins,
                                      double alpha, TimeSpan span,
                                      const IntegratorConfig& cfg,
                                      int qubit_cap = kDefaultQubitCap);

/// Majorana single-spin field, window starting at -t0 and lasting `duration`.
ComplexMatrix second_order_cross_term(const ModelParams& p, int n_spins, Component v,
                                      double alpha, double duration,
                                      const IntegratorConfig& cfg,
                                      int qubit_cap = kDefaultQubitCap);

/// Field of one spin-1/2: kappa t S_z + sqrt(2) Omega S_x.
HamiltonianFn single_spin_hamiltonian(const ModelParams& p);

}  // namespace majorana
