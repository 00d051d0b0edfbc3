#include "majorana/factorization.hpp"

#include <omp.h>

#include <cmath>
#include <random>

#include "majorana/errors.hpp"

namespace majorana {

namespace {

ModelParams as_spin_half(ModelParams p) {
  p.j = HalfInteger(1);
  return p;
}

TimeSpan full_window(const ModelParams& p) { return {-p.t0, p.t0}; }

}  // namespace

HamiltonianFn single_spin_hamiltonian(const ModelParams& p) {
  const ComplexMatrix sz = spin_half(Component::z);
  const ComplexMatrix sx = spin_half(Component::x);
  return [sz, sx, p](double t) -> ComplexMatrix {
    return (p.kappa * t) * sz + (std::sqrt(2.0) * p.omega_rabi) * sx;
  };
}

double unitary_factorization_check(HalfInteger j, const ModelParams& p,
                                   const IntegratorConfig& cfg,
                                   std::optional<TimeSpan> span, int qubit_cap) {
  p.validate();
  const DickeIsometry iso = dicke_isometry(j, qubit_cap);
  ModelParams model = p;
  model.j = j;
  const SpinSet spin = build_spin(j);
  const TimeSpan window = span.value_or(full_window(p));

  const ComplexMatrix u_j = propagate_unitary(
      [&](double t) { return hamiltonian(t, model, spin); }, window, cfg);
  const ComplexMatrix u_half = propagate_unitary(single_spin_hamiltonian(p), window, cfg);
  const ComplexMatrix restricted =
      iso.v.adjoint() * tensor_power(u_half, j.twice(), qubit_cap) * iso.v;
  return (u_j - restricted).norm();
}

ComplexMatrix dissipator_identity_gap(const ComplexMatrix& a1, const ComplexMatrix& a2,
                                      const ComplexMatrix& rho) {
  if (a1.rows() != rho.rows() || a2.rows() != rho.rows() || a1.cols() != rho.cols() ||
      a2.cols() != rho.cols())
    throw InvalidParameter("dissipator_identity_gap: dimension mismatch");
  const auto single = [&rho](const ComplexMatrix& a) -> ComplexMatrix {
    const ComplexMatrix ada = a.adjoint() * a;
    return a * rho * a.adjoint() - 0.5 * (ada * rho + rho * ada);
  };
  return single(a1 + a2) - (single(a1) + single(a2));
}

ComplexMatrix dissipator_cross_terms(const ComplexMatrix& a1, const ComplexMatrix& a2,
                                     const ComplexMatrix& rho) {
  const ComplexMatrix mix = a1.adjoint() * a2 + a2.adjoint() * a1;
  return a1 * rho * a2.adjoint() + a2 * rho * a1.adjoint() - 0.5 * (mix * rho + rho * mix);
}

DensityRhs independent_spins_rhs(const ModelParams& p, const NoiseConfig& n, int n_spins,
                                 int qubit_cap) {
  if (n.coupling == Coupling::Custom)
    throw InvalidParameter("independent_spins_rhs: coupling must be Jz or Jx");
  n.validate();
  const ModelParams half = as_spin_half(p);
  const SpinSet s = build_spin(half.j);
  const ComplexMatrix x = coupling_operator(n, s);

  struct Collective {
    ComplexMatrix sz, sx;
  };
  const Collective ops{collective_operator(Component::z, n_spins, qubit_cap),
                       collective_operator(Component::x, n_spins, qubit_cap)};

  return [half, s, x, ops, n, n_spins, qubit_cap](double t,
                                                  const ComplexMatrix& rho) -> ComplexMatrix {
    const ComplexMatrix h =
        (half.kappa * t) * ops.sz + (std::sqrt(2.0) * half.omega_rabi) * ops.sx;
    ComplexMatrix out = -kI * (h * rho - rho * h);
    const InstantaneousFrame f = frame(t, half, s);
    LindbladTerms single = jump_operators(f, x, n.include_nu_zero);
    assign_rates(single, f.omega, n);
    LindbladTerms all;
    for (int k = 0; k < n_spins; ++k)
      for (const auto& term : single.terms)
        all.terms.push_back({term.nu, embed_single(term.x_nu, k, n_spins, qubit_cap), term.rate});
    out += apply_dissipator(all, rho);
    return out;
  };
}

namespace {

struct DensityPair {
  ComplexMatrix collective;   // spin-j, embedded
  ComplexMatrix independent;  // 2j spins
};

DensityPair evolve_pair(HalfInteger j, const NoiseConfig& n, const ModelParams& p,
                        const IntegratorConfig& cfg, TimeSpan span,
                        const ComplexMatrix& rho_j, const ComplexMatrix& rho_q,
                        int qubit_cap) {
  ModelParams model = p;
  model.j = j;
  const auto a = propagate_density(model, n, rho_j, span, cfg);
  if (a.failed) throw NumericalFailure("spin-j propagation failed: " + a.failure_reason);
  const auto b = propagate_density(independent_spins_rhs(p, n, j.twice(), qubit_cap), rho_q,
                                   span, cfg);
  if (b.failed) throw NumericalFailure("independent-spin propagation failed: " + b.failure_reason);
  return {a.final_state, b.final_state};
}

}  // namespace

FactorizationReport run_factorization(HalfInteger j, const NoiseConfig& n,
                                      const ModelParams& p, const IntegratorConfig& cfg,
                                      int n_checkpoints, int qubit_cap) {
  p.validate();
  if (n_checkpoints < 1) throw InvalidParameter("run_factorization: n_checkpoints must be >= 1");
  if (n.coupling == Coupling::Custom)
    throw InvalidParameter("run_factorization: coupling must be Jz or Jx");
  const DickeIsometry iso = dicke_isometry(j, qubit_cap);
  const int nq = j.twice();
  ModelParams model = p;
  model.j = j;
  const SpinSet spin = build_spin(j);
  const auto h_j = [&](double t) { return hamiltonian(t, model, spin); };
  const HamiltonianFn h_half = single_spin_hamiltonian(p);

  ComplexMatrix u_j = ComplexMatrix::Identity(j.dim(), j.dim());
  ComplexMatrix u_half = ComplexMatrix::Identity(2, 2);
  ComplexMatrix rho_j = ComplexMatrix::Zero(j.dim(), j.dim());
  rho_j(j.dim() - 1, j.dim() - 1) = 1.0;
  const Eigen::Index full = Eigen::Index{1} << nq;
  ComplexMatrix rho_q = ComplexMatrix::Zero(full, full);
  rho_q(full - 1, full - 1) = 1.0;  // all spins down

  FactorizationReport report;
  report.j = j;
  double t = -p.t0;
  for (int c = 1; c <= n_checkpoints; ++c) {
    const double next = c == n_checkpoints ? p.t0 : -p.t0 + 2.0 * p.t0 * c / n_checkpoints;
    const TimeSpan seg{t, next};
    u_j = propagate_unitary(h_j, u_j, seg, cfg);
    u_half = propagate_unitary(h_half, u_half, seg, cfg);
    auto pair = evolve_pair(j, n, p, cfg, seg, rho_j, rho_q, qubit_cap);
    rho_j = std::move(pair.collective);
    rho_q = std::move(pair.independent);

    FactorizationCheckpoint cp;
    cp.t = next;
    cp.unitary_residual =
        (u_j - iso.v.adjoint() * tensor_power(u_half, nq, qubit_cap) * iso.v).norm();
    cp.lindblad_trace_distance = trace_distance(iso.v * rho_j * iso.v.adjoint(), rho_q);
    report.checkpoints.push_back(cp);
    t = next;
  }
  report.unitary_residual = report.checkpoints.back().unitary_residual;
  report.lindblad_trace_distance = report.checkpoints.back().lindblad_trace_distance;
  return report;
}

double lindblad_factorization_residual(HalfInteger j, const NoiseConfig& n,
                                       const ModelParams& p, const IntegratorConfig& cfg,
                                       int qubit_cap) {
  p.validate();
  if (n.coupling == Coupling::Custom)
    throw InvalidParameter("lindblad_factorization_residual: coupling must be Jz or Jx");
  const DickeIsometry iso = dicke_isometry(j, qubit_cap);
  ComplexMatrix rho_j = ComplexMatrix::Zero(j.dim(), j.dim());
  rho_j(j.dim() - 1, j.dim() - 1) = 1.0;
  const Eigen::Index full = Eigen::Index{1} << j.twice();
  ComplexMatrix rho_q = ComplexMatrix::Zero(full, full);
  rho_q(full - 1, full - 1) = 1.0;
  const auto pair = evolve_pair(j, n, p, cfg, full_window(p), rho_j, rho_q, qubit_cap);
  return trace_distance(iso.v * pair.collective * iso.v.adjoint(), pair.independent);
}

// ---------------------------------------------------------------------------
// Classical white noise

void ClassicalNoiseConfig::validate(int qubit_cap) const {
  if (n_spins < 1) throw InvalidParameter("classical noise: n_spins must be >= 1");
  if (n_spins > qubit_cap)
    throw ResourceLimit("classical noise: n_spins exceeds the qubit cap");
  if (n_traj < 2) throw InvalidParameter("classical noise: need at least 2 trajectories");
  if (!(dt > 0.0)) throw InvalidParameter("classical noise: dt must be positive");
  if (!(alpha >= 0.0) || !std::isfinite(alpha))
    throw InvalidParameter("classical noise: alpha must be finite and >= 0");
}

namespace {

// Operators of one noisy system: H(t) = kappa t sz + sqrt(2) Omega sx, noise v.
struct NoisySystem {
  ComplexMatrix sz, sx, v;
};

struct ChunkSum {
  ComplexMatrix full;
  ComplexMatrix single;
  long count = 0;
};

class TrajectoryRunner {
 public:
  TrajectoryRunner(const ModelParams& p, const ClassicalNoiseConfig& c)
      : p_(p), c_(c) {
    single_ = {spin_half(Component::z), spin_half(Component::x), spin_half(c.v_component)};
    full_ = {collective_operator(Component::z, c.n_spins),
             collective_operator(Component::x, c.n_spins),
             collective_operator(c.v_component, c.n_spins)};
    const double span = 2.0 * p.t0;
    steps_ = std::max(1L, static_cast<long>(std::ceil(span / c.dt - 1e-9)));
    h_ = span / static_cast<double>(steps_);
  }

  void run(long index, ComplexMatrix& u_full, ComplexMatrix& u_single) const {
    std::seed_seq seq{static_cast<std::uint32_t>(c_.seed), static_cast<std::uint32_t>(c_.seed >> 32),
                      static_cast<std::uint32_t>(index),
                      static_cast<std::uint32_t>(static_cast<std::uint64_t>(index) >> 32)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double scale = c_.alpha / std::sqrt(h_);

    u_full = ComplexMatrix::Identity(full_.sz.rows(), full_.sz.cols());
    u_single = ComplexMatrix::Identity(2, 2);
    for (long n = 0; n < steps_; ++n) {
      const double t = -p_.t0 + static_cast<double>(n) * h_;
      const double noise = scale * normal(rng);
      step(full_, t, noise, u_full);
      step(single_, t, noise, u_single);
    }
  }

  ChunkSum run_chunk(long begin, long end) const {
    ChunkSum s;
    const Eigen::Index d = full_.sz.rows();
    s.full = ComplexMatrix::Zero(d, d);
    s.single = ComplexMatrix::Zero(2, 2);
    ComplexMatrix uf, us;
    for (long i = begin; i < end; ++i) {
      run(i, uf, us);
      s.full += uf;
      s.single += us;
      ++s.count;
    }
    return s;
  }

 private:
  void step(const NoisySystem& sys, double t, double noise, ComplexMatrix& u) const {
    const double rabi = std::sqrt(2.0) * p_.omega_rabi;
    const auto gen = [&](double time) -> ComplexMatrix {
      return -kI * ((p_.kappa * time) * sys.sz + rabi * sys.sx + noise * sys.v);
    };
    const ComplexMatrix g0 = gen(t);
    const ComplexMatrix gm = gen(t + 0.5 * h_);
    const ComplexMatrix g1 = gen(t + h_);
    const ComplexMatrix k1 = g0 * u;
    const ComplexMatrix k2 = gm * (u + (0.5 * h_) * k1);
    const ComplexMatrix k3 = gm * (u + (0.5 * h_) * k2);
    const ComplexMatrix k4 = g1 * (u + h_ * k3);
    u += (h_ / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }

  ModelParams p_;
  ClassicalNoiseConfig c_;
  NoisySystem single_, full_;
  long steps_ = 1;
  double h_ = 0.0;
};

long chunk_count(long n_traj) { return std::min<long>(n_traj, 64); }

long chunk_begin(long c, long chunks, long n_traj) { return c * n_traj / chunks; }

ClassicalNoiseReport reduce(const ModelParams& p, const ClassicalNoiseConfig& c,
                            const IntegratorConfig& quadrature_cfg,
                            const std::vector<ChunkSum>& chunks) {
  ClassicalNoiseReport r;
  r.alpha = c.alpha;
  r.n_traj = c.n_traj;

  ComplexMatrix sum_full = ComplexMatrix::Zero(chunks.front().full.rows(), chunks.front().full.cols());
  ComplexMatrix sum_single = ComplexMatrix::Zero(2, 2);
  for (const auto& ch : chunks) {
    sum_full += ch.full;
    sum_single += ch.single;
  }
  const double n = static_cast<double>(c.n_traj);
  r.mean_full = sum_full / n;
  r.mean_single = sum_single / n;

  const auto difference = [&](const ComplexMatrix& full, const ComplexMatrix& single) {
    return ComplexMatrix(full - tensor_power(single, c.n_spins));
  };

  if (c.alpha == 0.0 || c.n_spins == 1) {
    // Without noise every realization is the noiseless propagator, which
    // factorizes exactly; with one spin both averages are the same object.
    r.mc_difference = ComplexMatrix::Zero(r.mean_full.rows(), r.mean_full.cols());
    r.standard_error = r.mc_difference;
  } else {
    r.mc_difference = difference(r.mean_full, r.mean_single);
    // Delete-one-chunk jackknife.
    const auto k = static_cast<double>(chunks.size());
    std::vector<ComplexMatrix> loo;
    ComplexMatrix loo_mean = ComplexMatrix::Zero(r.mc_difference.rows(), r.mc_difference.cols());
    for (const auto& ch : chunks) {
      const double m = n - static_cast<double>(ch.count);
      loo.push_back(difference((sum_full - ch.full) / m, (sum_single - ch.single) / m));
      loo_mean += loo.back();
    }
    loo_mean /= k;
    Eigen::MatrixXd var = Eigen::MatrixXd::Zero(loo_mean.rows(), loo_mean.cols());
    for (const auto& d : loo) var += (d - loo_mean).cwiseAbs2();
    var *= (k - 1.0) / k;
    r.standard_error = var.cwiseSqrt().cast<Complex>();
  }
  r.statistical_error = r.standard_error.norm();

  const ComplexMatrix v = spin_half(c.v_component);
  r.analytic_cross_term = second_order_cross_term(single_spin_hamiltonian(p), v, c.n_spins,
                                                  c.alpha, full_window(p), quadrature_cfg);

  if (c.alpha * c.alpha * 2.0 * p.t0 > 0.1)
    r.warning = "alpha^2 * span exceeds 0.1; second-order prediction may be inaccurate";
  return r;
}

}  // namespace

ClassicalNoiseReport classical_noise_ensemble(const ModelParams& p,
                                              const ClassicalNoiseConfig& c,
                                              const IntegratorConfig& quadrature_cfg) {
  p.validate();
  c.validate();
  const TrajectoryRunner runner(p, c);
  const long chunks = chunk_count(c.n_traj);
  std::vector<ChunkSum> sums(static_cast<std::size_t>(chunks));
  const int workers = c.workers > 0 ? c.workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
  for (long k = 0; k < chunks; ++k)
    sums[static_cast<std::size_t>(k)] =
        runner.run_chunk(chunk_begin(k, chunks, c.n_traj), chunk_begin(k + 1, chunks, c.n_traj));
  return reduce(p, c, quadrature_cfg, sums);
}

ClassicalNoiseReport classical_noise_ensemble_serial(const ModelParams& p,
                                                     const ClassicalNoiseConfig& c,
                                                     const IntegratorConfig& quadrature_cfg) {
  p.validate();
  c.validate();
  const TrajectoryRunner runner(p, c);
  const long chunks = chunk_count(c.n_traj);
  std::vector<ChunkSum> sums;
  for (long k = 0; k < chunks; ++k)
    sums.push_back(
        runner.run_chunk(chunk_begin(k, chunks, c.n_traj), chunk_begin(k + 1, chunks, c.n_traj)));
  return reduce(p, c, quadrature_cfg, sums);
}

namespace {

// sum_{k != l} V'_k V'_l for identical single-spin V' on every site.
ComplexMatrix pair_sum(const ComplexMatrix& vp, int n_spins, int qubit_cap) {
  const Eigen::Index d = Eigen::Index{1} << n_spins;
  ComplexMatrix total = ComplexMatrix::Zero(d, d);
  ComplexMatrix squares = ComplexMatrix::Zero(d, d);
  const ComplexMatrix vp2 = vp * vp;
  for (int k = 0; k < n_spins; ++k) {
    total += embed_single(vp, k, n_spins, qubit_cap);
    squares += embed_single(vp2, k, n_spins, qubit_cap);
  }
  return total * total - squares;
}

ComplexMatrix simpson(const HamiltonianFn& h_single, const ComplexMatrix& v_single,
                      int n_spins, TimeSpan span, long intervals, const IntegratorConfig& cfg,
                      int qubit_cap) {
  const double h = (span.end - span.start) / static_cast<double>(intervals);
  ComplexMatrix u = ComplexMatrix::Identity(2, 2);
  const Eigen::Index d = Eigen::Index{1} << n_spins;
  ComplexMatrix acc = ComplexMatrix::Zero(d, d);
  double t = span.start;
  for (long i = 0; i <= intervals; ++i) {
    if (i > 0) {
      const double next = span.start + static_cast<double>(i) * h;
      u = propagate_unitary(h_single, u, {t, next}, cfg);
      t = next;
    }
    const double w = (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    acc += w * pair_sum(u.adjoint() * v_single * u, n_spins, qubit_cap);
  }
  return acc * (h / 3.0);
}

}  // namespace

ComplexMatrix second_order_cross_term(const HamiltonianFn& h_single,
                                      const ComplexMatrix& v_single, int n_spins,
                                      double alpha, TimeSpan span,
                                      const IntegratorConfig& cfg, int qubit_cap) {
  if (n_spins < 1) throw InvalidParameter("second_order_cross_term: n_spins must be >= 1");
  if (n_spins > qubit_cap) throw ResourceLimit("second_order_cross_term: too many spins");
  const Eigen::Index d = Eigen::Index{1} << n_spins;
  if (span.end == span.start || n_spins == 1 || alpha == 0.0)
    return ComplexMatrix::Zero(d, d);

  constexpr long kMinIntervals = 64;
  constexpr long kMaxIntervals = 1L << 18;
  ComplexMatrix coarse =
      simpson(h_single, v_single, n_spins, span, kMinIntervals, cfg, qubit_cap);
  ComplexMatrix integral;
  bool converged = false;
  for (long n = 2 * kMinIntervals; n <= kMaxIntervals; n *= 2) {
    integral = simpson(h_single, v_single, n_spins, span, n, cfg, qubit_cap);
    if ((integral - coarse).norm() <= 1e-10 * std::max(integral.norm(), 1e-300)) {
      converged = true;
      break;
    }
    coarse = integral;
  }
  if (!converged)
    throw NumericalFailure("second_order_cross_term: quadrature refinement did not converge");

  const ComplexMatrix u_end = propagate_unitary(h_single, span, cfg);
  return (-0.5 * alpha * alpha) * tensor_power(u_end, n_spins, qubit_cap) * integral;
}

ComplexMatrix second_order_cross_term(const ModelParams& p, int n_spins, Component v,
                                      double alpha, double duration,
                                      const IntegratorConfig& cfg, int qubit_cap) {
  p.validate();
  if (!(duration >= 0.0)) throw InvalidParameter("second_order_cross_term: duration must be >= 0");
  return second_order_cross_term(single_spin_hamiltonian(p), spin_half(v), n_spins, alpha,
                                 {-p.t0, -p.t0 + duration}, cfg, qubit_cap);
}

}  // namespace majorana
