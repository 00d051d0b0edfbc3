#include <doctest.h>

#include <cmath>
#include <random>

#include "majorana/errors.hpp"
#include "majorana/factorization.hpp"
#include "oracles.hpp"

using namespace majorana;

namespace {

ModelParams short_window() {
  ModelParams p = ModelParams::figure_defaults(HalfInteger(1));
  p.kappa = 1.0;
  p.t0 = 2.0;
  return p;
}

NoiseConfig channel(Coupling c, double gamma, double temp) {
  NoiseConfig n;
  n.coupling = c;
  n.gamma_flat = gamma;
  n.temperature = temp;
  return n;
}

IntegratorConfig tight() {
  IntegratorConfig cfg;
  cfg.rel_tol = 1e-11;
  return cfg;
}

}  // namespace

TEST_CASE("unitary factorization") {
  const auto p = ModelParams::figure_defaults(HalfInteger(1));
  CHECK(unitary_factorization_check(HalfInteger(1), p, IntegratorConfig{}) <= 1e-9);
  CHECK(unitary_factorization_check(HalfInteger(2), p, IntegratorConfig{}, TimeSpan{-1.0, 1.0}) <=
        1e-7);
  CHECK(unitary_factorization_check(HalfInteger(4), p, IntegratorConfig{}, TimeSpan{-15.0, 15.0}) <=
        1e-6);
  CHECK_THROWS_AS(unitary_factorization_check(HalfInteger(5), p, {}, std::nullopt, 4),
                  ResourceLimit);
}

TEST_CASE("dissipator identity gap") {
  SUBCASE("trivial cases") {
    std::mt19937_64 rng(1);
    const ComplexMatrix a = oracle::random_matrix(3, rng);
    const ComplexMatrix rho = oracle::random_density(3, rng);
    CHECK(dissipator_identity_gap(a, ComplexMatrix::Zero(3, 3), rho).norm() <= 1e-13);
    const ComplexMatrix id = ComplexMatrix::Identity(3, 3);
    CHECK(dissipator_identity_gap(id, id, rho).norm() <= 1e-13);
    CHECK_THROWS_AS(dissipator_identity_gap(a, ComplexMatrix::Zero(2, 2), rho), InvalidParameter);
  }
  SUBCASE("equals the explicit cross terms on random input") {
    std::mt19937_64 rng(2);
    for (int k = 0; k < 40; ++k) {
      const int d = 2 + k % 5;
      const ComplexMatrix a1 = oracle::random_matrix(d, rng);
      const ComplexMatrix a2 = oracle::random_matrix(d, rng);
      const ComplexMatrix rho = oracle::random_density(d, rng);
      const ComplexMatrix gap = dissipator_identity_gap(a1, a2, rho);
      const ComplexMatrix cross = dissipator_cross_terms(a1, a2, rho);
      CHECK((gap - cross).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
  SUBCASE("two qubits, independent lowering") {
    // Basis |uu>, |ud>, |du>, |dd>.
    ComplexMatrix sm = ComplexMatrix::Zero(2, 2);
    sm(1, 0) = 1.0;
    const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
    ComplexMatrix a1(4, 4), a2(4, 4);
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) {
        a1(r, c) = sm(r / 2, c / 2) * id(r % 2, c % 2);
        a2(r, c) = id(r / 2, c / 2) * sm(r % 2, c % 2);
      }
    ComplexMatrix rho = ComplexMatrix::Zero(4, 4);
    rho(0, 0) = 1.0;
    // A1 rho A2^dag = |du><ud| and its mirror; the anticommutator vanishes.
    ComplexMatrix expect = ComplexMatrix::Zero(4, 4);
    expect(2, 1) = 1.0;
    expect(1, 2) = 1.0;
    const ComplexMatrix gap = dissipator_identity_gap(a1, a2, rho);
    CHECK((gap - expect).norm() <= 1e-15);
    CHECK(gap.norm() == doctest::Approx(std::sqrt(2.0)));
  }
}

TEST_CASE("independent spins generator") {
  const auto p = ModelParams::figure_defaults(HalfInteger(1));
  const auto n = channel(Coupling::Jx, 0.2, 1.0);
  SUBCASE("one spin reproduces the spin-1/2 master equation") {
    const auto rhs = independent_spins_rhs(p, n, 1);
    std::mt19937_64 rng(4);
    const MasterEquation eq(p, n);
    for (double t : {-10.0, 0.0, 3.0}) {
      const ComplexMatrix rho = oracle::random_density(2, rng);
      CHECK(approx_equal(rhs(t, rho), eq(t, rho), 1e-12));
    }
  }
  SUBCASE("product states of independent spins stay products") {
    const auto rhs = independent_spins_rhs(p, n, 2);
    std::mt19937_64 rng(6);
    const ComplexMatrix r1 = oracle::random_density(2, rng);
    const ComplexMatrix r2 = oracle::random_density(2, rng);
    const MasterEquation eq(p, n);
    const double t = 1.5;
    const ComplexMatrix lhs = rhs(t, kron(r1, r2));
    const ComplexMatrix expect = kron(eq(t, r1), r2) + kron(r1, eq(t, r2));
    CHECK(approx_equal(lhs, expect, 1e-12));
  }
  CHECK_THROWS_AS(independent_spins_rhs(p, channel(Coupling::Custom, 0.1, 0), 2),
                  InvalidParameter);
}

TEST_CASE("lindblad factorization residual") {
  const auto p = ModelParams::figure_defaults(HalfInteger(1));
  const IntegratorConfig cfg;
  CHECK(lindblad_factorization_residual(HalfInteger(2), NoiseConfig{}, p, cfg) <= 1e-6);
  // Strong cold damping pulls both models to the same product ground state,
  // so the gap is small here; it is still far above integrator error.
  // Regression value from the first validated run.
  CHECK(lindblad_factorization_residual(HalfInteger(2), channel(Coupling::Jx, 0.1, 0.001), p,
                                        cfg) == doctest::Approx(1.3728e-4).epsilon(2e-3));
  CHECK(lindblad_factorization_residual(HalfInteger(2), channel(Coupling::Jx, 0.01, 0.001), p,
                                        cfg) > 1e-1);
  CHECK(lindblad_factorization_residual(HalfInteger(2), channel(Coupling::Jz, 0.1, 0.001), p,
                                        cfg) > 1e-4);
  // One spin is its own independent model.
  CHECK(lindblad_factorization_residual(HalfInteger(1), channel(Coupling::Jx, 0.1, 1.0), p,
                                        cfg) <= 1e-9);
}

TEST_CASE("run_factorization checkpoints") {
  auto p = ModelParams::figure_defaults(HalfInteger(1));
  p.t0 = 30.0;
  const auto r = run_factorization(HalfInteger(2), channel(Coupling::Jx, 0.1, 0.001), p,
                                   IntegratorConfig{}, 4);
  REQUIRE(r.checkpoints.size() == 4);
  CHECK(r.checkpoints[0].t == doctest::Approx(-15.0));
  CHECK(r.checkpoints[3].t == 30.0);
  for (const auto& c : r.checkpoints) CHECK(c.unitary_residual <= 1e-6);
  CHECK(r.lindblad_trace_distance == r.checkpoints.back().lindblad_trace_distance);
  CHECK(r.lindblad_trace_distance > 100.0 * r.unitary_residual);
  // Same endpoint as a single segment.
  const auto direct =
      lindblad_factorization_residual(HalfInteger(2), channel(Coupling::Jx, 0.1, 0.001), p, {});
  CHECK(r.lindblad_trace_distance == doctest::Approx(direct).epsilon(1e-6));
  CHECK_THROWS_AS(run_factorization(HalfInteger(2), NoiseConfig{}, p, {}, 0), InvalidParameter);
}

TEST_CASE("second order cross term") {
  const auto p = short_window();
  CHECK(second_order_cross_term(p, 2, Component::z, 0.1, 0.0, tight()).norm() == 0.0);
  CHECK(second_order_cross_term(p, 1, Component::z, 0.1, 3.0, tight()).norm() == 0.0);

  SUBCASE("constant Rabi field against the Heisenberg-picture closed form") {
    const double w = std::sqrt(2.0);
    const ComplexMatrix sx = spin_half(Component::x);
    const ComplexMatrix sy = spin_half(Component::y);
    const ComplexMatrix sz = spin_half(Component::z);
    const HamiltonianFn h = [&](double) { return ComplexMatrix(w * sx); };
    const double t = 3.3;
    const double alpha = 0.2;
    const ComplexMatrix got = second_order_cross_term(h, sz, 2, alpha, {0.0, t}, tight());

    // V'(s) = Sz cos(ws) + Sy sin(ws); sum over k != l gives 2 V' (x) V'.
    const double cc = t / 2 + std::sin(2 * w * t) / (4 * w);
    const double ss = t / 2 - std::sin(2 * w * t) / (4 * w);
    const double cs = std::pow(std::sin(w * t), 2) / (2 * w);
    const ComplexMatrix integral =
        2.0 * (cc * kron(sz, sz) + ss * kron(sy, sy) + cs * (kron(sz, sy) + kron(sy, sz)));
    const ComplexMatrix u = oracle::exp_series(-kI * w * t * sx, 40);
    const ComplexMatrix expect = -0.5 * alpha * alpha * kron(u, u) * integral;
    CHECK((got - expect).norm() <= 1e-8);
  }
}

TEST_CASE("classical noise ensemble") {
  const auto p = short_window();
  ClassicalNoiseConfig c;
  c.n_spins = 2;
  c.alpha = 0.08;
  c.n_traj = 40;
  c.seed = 17;
  c.dt = 0.05;

  SUBCASE("alpha = 0 and one spin give exactly zero") {
    ClassicalNoiseConfig quiet = c;
    quiet.alpha = 0.0;
    const auto r = classical_noise_ensemble(p, quiet, tight());
    CHECK(r.mc_difference.norm() == 0.0);
    CHECK(r.analytic_cross_term.norm() == 0.0);
    ClassicalNoiseConfig single = c;
    single.n_spins = 1;
    CHECK(classical_noise_ensemble(p, single, tight()).mc_difference.norm() == 0.0);
  }
  SUBCASE("seeded runs are reproducible and worker-count independent") {
    const auto a = classical_noise_ensemble(p, c, tight());
    ClassicalNoiseConfig more = c;
    more.workers = 4;
    const auto b = classical_noise_ensemble(p, more, tight());
    const auto s = classical_noise_ensemble_serial(p, c, tight());
    CHECK(a.mean_full == b.mean_full);
    CHECK(a.mc_difference == b.mc_difference);
    CHECK(a.mc_difference == s.mc_difference);
    CHECK(a.standard_error == s.standard_error);
    ClassicalNoiseConfig other = c;
    other.seed = 18;
    CHECK(classical_noise_ensemble(p, other, tight()).mc_difference != a.mc_difference);
  }
  SUBCASE("each trajectory stays unitary, so the mean is a contraction") {
    const auto r = classical_noise_ensemble(p, c, tight());
    Eigen::JacobiSVD<ComplexMatrix> svd(r.mean_full);
    CHECK(svd.singularValues()(0) <= 1.0 + 1e-8);
    CHECK(r.statistical_error > 0.0);
    CHECK(r.warning.empty());
  }
  SUBCASE("strong noise warns") {
    ClassicalNoiseConfig loud = c;
    loud.alpha = 0.5;
    CHECK_FALSE(classical_noise_ensemble(p, loud, tight()).warning.empty());
  }
  SUBCASE("validation") {
    ClassicalNoiseConfig bad = c;
    bad.n_traj = 1;
    CHECK_THROWS_AS(classical_noise_ensemble(p, bad, tight()), InvalidParameter);
    bad = c;
    bad.n_spins = 7;
    CHECK_THROWS_AS(classical_noise_ensemble(p, bad, tight()), ResourceLimit);
  }
}
