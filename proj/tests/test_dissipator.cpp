#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "majorana/dissipator.hpp"
#include "majorana/errors.hpp"
#include "majorana/integrator.hpp"
#include "oracles.hpp"

using namespace majorana;

namespace {

NoiseConfig noise(Coupling c, double gamma, double temp) {
  NoiseConfig n;
  n.coupling = c;
  n.gamma_flat = gamma;
  n.temperature = temp;
  return n;
}

double upper_norm(const ComplexMatrix& m) {
  return m.triangularView<Eigen::StrictlyUpper>().toDenseMatrix().norm();
}

}  // namespace

TEST_CASE("jump_operators structure") {
  for (int twice = 1; twice <= 5; ++twice) {
    CAPTURE(twice);
    const auto p = ModelParams::figure_defaults(HalfInteger(twice));
    const auto s = build_spin(p.j);
    for (double t : {-250.0, -20.0, -1.0, 0.0, 0.5, 9.0, 250.0}) {
      const auto f = frame(t, p, s);
      for (const ComplexMatrix& x : {s.jz, s.jx, s.jy}) {
        const auto terms = jump_operators(f, x, true);
        ComplexMatrix sum = ComplexMatrix::Zero(s.dim(), s.dim());
        for (const auto& term : terms.terms) sum += term.x_nu;
        CHECK((sum - x).cwiseAbs().maxCoeff() <= 1e-12);
        for (const auto& term : terms.terms) {
          const auto* mirror = terms.find(-term.nu);
          REQUIRE(mirror != nullptr);
          CHECK(approx_equal(mirror->x_nu, term.x_nu.adjoint(), 1e-12));
          if (std::abs(term.nu) >= 2) CHECK(term.x_nu.norm() <= 1e-12);
          // Pi_a X(nu) Pi_b vanishes unless m_b - m_a = nu.
          for (int a = 0; a < s.dim(); ++a)
            for (int b = 0; b < s.dim(); ++b)
              if (s.m(b) - s.m(a) != term.nu)
                CHECK((f.projectors[a] * term.x_nu * f.projectors[b]).norm() <= 1e-12);
        }
      }
    }
  }
}

TEST_CASE("jump_operators examples") {
  SUBCASE("nu = 0 is excluded by default") {
    const auto p = ModelParams::figure_defaults(HalfInteger(2));
    const auto s = build_spin(p.j);
    const auto terms = jump_operators(frame(0.0, p, s), noise(Coupling::Jz, 1, 0), s);
    CHECK(terms.find(0) == nullptr);
    CHECK(terms.terms.size() == 4);
  }
  SUBCASE("Jz commutes with H far on the positive side") {
    const auto p = ModelParams::figure_defaults(HalfInteger(3));
    const auto s = build_spin(p.j);
    const auto terms = jump_operators(frame(1e12, p, s), noise(Coupling::Jz, 1, 0), s);
    for (const auto& t : terms.terms) CHECK(t.x_nu.norm() <= 1e-9);
  }
  SUBCASE("j=1, t=0, X=Jz: ||X(+1)|| = ||X(-1)|| = 1") {
    const auto p = ModelParams::figure_defaults(HalfInteger(2));
    const auto s = build_spin(p.j);
    const auto terms = jump_operators(frame(0.0, p, s), s.jz, false);
    CHECK(terms.find(1)->x_nu.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(terms.find(-1)->x_nu.norm() == doctest::Approx(1.0).epsilon(1e-12));

    // Oracle: eigenprojectors of H(0) = sqrt(2) Jx from Eigen's solver.
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(std::sqrt(2.0) * s.jx);
    ComplexMatrix up = ComplexMatrix::Zero(3, 3);  // lowering blocks, energy gap +1 step
    for (int lo = 0; lo < 2; ++lo) {
      const ComplexMatrix pl = es.eigenvectors().col(lo) * es.eigenvectors().col(lo).adjoint();
      const ComplexMatrix ph =
          es.eigenvectors().col(lo + 1) * es.eigenvectors().col(lo + 1).adjoint();
      up += pl * s.jz * ph;
    }
    CHECK(up.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(approx_equal(up, terms.find(1)->x_nu, 1e-12));
  }
  SUBCASE("Jz sideband norm is sin(theta) times the upper part of Jx") {
    for (int twice = 1; twice <= 5; ++twice) {
      const auto p = ModelParams::figure_defaults(HalfInteger(twice));
      const auto s = build_spin(p.j);
      const double c = upper_norm(s.jx);
      for (double t : {-250.0, -30.0, -2.0, 0.0, 4.0, 60.0, 250.0}) {
        const auto terms = jump_operators(frame(t, p, s), s.jz, false);
        const double bound = c * std::sin(mixing_angle(t, p));
        CHECK(terms.find(1)->x_nu.norm() == doctest::Approx(bound).epsilon(1e-10));
        CHECK(terms.find(-1)->x_nu.norm() == doctest::Approx(bound).epsilon(1e-10));
      }
    }
  }
  SUBCASE("dimension mismatch") {
    const auto p = ModelParams::figure_defaults(HalfInteger(2));
    const auto s = build_spin(p.j);
    CHECK_THROWS_AS(jump_operators(frame(0.0, p, s), ComplexMatrix::Identity(2, 2)),
                    InvalidParameter);
  }
}

TEST_CASE("bose_occupation") {
  CHECK(bose_occupation(1.0, 0.0) == 0.0);
  CHECK(bose_occupation(std::log(2.0), 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(bose_occupation(std::sqrt(2.0), 10.0) == doctest::Approx(6.582848998383962).epsilon(1e-12));
  CHECK(bose_occupation(std::sqrt(2.0), 1e-3) == 0.0);
  CHECK(bose_occupation(1e-3, 1e3) == doctest::Approx(1e6).epsilon(1e-6));
  CHECK_THROWS_AS(bose_occupation(0.0, 1.0), InvalidParameter);
  CHECK_THROWS_AS(bose_occupation(-1.0, 1.0), InvalidParameter);
}

TEST_CASE("rates") {
  const auto cold = noise(Coupling::Jx, 0.3, 0.0);
  CHECK(rate(1, 2.0, cold) == doctest::Approx(0.3));
  CHECK(rate(2, 2.0, cold) == doctest::Approx(0.3));
  CHECK(rate(-1, 2.0, cold) == 0.0);
  CHECK_THROWS_AS(rate(0, 2.0, cold), InvalidParameter);

  const auto hot = noise(Coupling::Jx, 1.0, 10.0);
  CHECK(rate(1, std::sqrt(2.0), hot) / rate(-1, std::sqrt(2.0), hot) ==
        doctest::Approx(1.151909910168909).epsilon(1e-12));

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> omega(1.0, 30.0), temp(0.05, 20.0);
  for (int i = 0; i < 20; ++i) {
    const double w = omega(rng);
    const auto n = noise(Coupling::Jz, 0.7, temp(rng));
    for (int nu : {1, 2, 3}) {
      const double expect = std::exp(-nu * w / n.temperature);
      CHECK(rate(-nu, w, n) / rate(nu, w, n) == doctest::Approx(expect).epsilon(1e-12));
    }
  }
}

TEST_CASE("lindblad_rhs") {
  std::mt19937_64 rng(5);
  SUBCASE("banded kernel equals the dense reference") {
    for (int twice = 1; twice <= 5; ++twice) {
      const auto p = ModelParams::figure_defaults(HalfInteger(twice));
      const auto s = build_spin(p.j);
      for (auto c : {Coupling::Jz, Coupling::Jx})
        for (double temp : {0.0, 0.001, 10.0})
          for (double t : {-250.0, -3.0, 0.0, 1.5, 250.0}) {
            const ComplexMatrix rho = oracle::random_density(s.dim(), rng);
            const auto n = noise(c, 0.37, temp);
            CHECK(approx_equal(lindblad_rhs(t, rho, p, n, s),
                               lindblad_rhs_reference(t, rho, p, n, s), 1e-12));
          }
    }
  }
  SUBCASE("custom coupling and nu = 0 term go through the same machinery") {
    const auto p = ModelParams::figure_defaults(HalfInteger(3));
    const auto s = build_spin(p.j);
    NoiseConfig n = noise(Coupling::Custom, 0.2, 1.0);
    n.custom = s.jy + 0.3 * s.jz * s.jz;
    n.include_nu_zero = true;
    n.nu_zero_rate = 0.05;
    for (double t : {-5.0, 0.0, 2.0}) {
      const ComplexMatrix rho = oracle::random_density(4, rng);
      CHECK(approx_equal(lindblad_rhs(t, rho, p, n, s), lindblad_rhs_reference(t, rho, p, n, s),
                         1e-12));
    }
    n.custom(0, 1) += 1.0;
    CHECK_THROWS_AS(MasterEquation(p, n), InvalidParameter);
  }
  SUBCASE("gamma = 0 is the von Neumann term") {
    const auto p = ModelParams::figure_defaults(HalfInteger(2));
    const auto s = build_spin(p.j);
    const ComplexMatrix rho = oracle::random_density(3, rng);
    const ComplexMatrix h = hamiltonian(2.0, p, s);
    const ComplexMatrix out = lindblad_rhs(2.0, rho, p, noise(Coupling::Jx, 0, 1), s);
    CHECK(approx_equal(out, -kI * (h * rho - rho * h), 1e-13));
    CHECK(std::abs(out.trace()) <= 1e-13);
  }
  SUBCASE("output is traceless and Hermitian for random states") {
    for (int k = 0; k < 50; ++k) {
      const int twice = 1 + k % 5;
      const auto p = ModelParams::figure_defaults(HalfInteger(twice));
      const auto s = build_spin(p.j);
      const ComplexMatrix rho = oracle::random_density(s.dim(), rng);
      const auto n = noise(k % 2 ? Coupling::Jz : Coupling::Jx, 1.0, k % 3 ? 10.0 : 0.0);
      const ComplexMatrix out = lindblad_rhs(-10.0 + k, rho, p, n, s);
      CHECK(std::abs(out.trace()) <= 1e-12);
      CHECK((out - out.adjoint()).norm() <= 1e-12 * std::max(out.norm(), 1.0));
    }
  }
  SUBCASE("spin mismatch") {
    const auto p = ModelParams::figure_defaults(HalfInteger(2));
    CHECK_THROWS_AS(lindblad_rhs(0.0, ComplexMatrix::Identity(3, 3) / 3.0, p,
                                 noise(Coupling::Jz, 1, 0), build_spin(HalfInteger(1))),
                    InvalidParameter);
  }
}

TEST_CASE("frozen H(0), j=1/2, T=0: transverse noise relaxes to the ground state") {
  const auto p = ModelParams::figure_defaults(HalfInteger(1));
  const auto s = build_spin(p.j);
  // Ground state of sqrt(2) Jx: (|up> - |down>)/sqrt(2).
  Eigen::VectorXcd g(2);
  g << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
  const ComplexMatrix ground = g * g.adjoint();

  const auto n = noise(Coupling::Jz, 0.5, 0.0);
  CHECK(lindblad_rhs(0.0, ground, p, n, s).norm() <= 1e-14);

  // Amplitude damping in the dressed basis: the excited population decays
  // as exp(-gamma |<g|Jz|e>|^2 t) with |<g|Jz|e>|^2 = 1/4.
  const MasterEquation eq(p, n);
  const DensityRhs frozen = [&eq](double, const ComplexMatrix& rho) { return eq(0.0, rho); };
  ComplexMatrix start = ComplexMatrix::Identity(2, 2) - ground;
  IntegratorConfig cfg;
  cfg.rel_tol = 1e-11;
  const auto r = propagate_density(frozen, start, {0.0, 8.0}, cfg);
  const double excited = 1.0 - (g.adjoint() * r.final_state * g)(0, 0).real();
  CHECK(excited == doctest::Approx(std::exp(-0.5 * 0.25 * 8.0)).epsilon(1e-8));

  const auto long_run = propagate_density(frozen, start, {0.0, 400.0}, cfg);
  CHECK(approx_equal(long_run.final_state, ground, 1e-9));

  // Jx commutes with H(0): no transitions, only the nu = 0 block which the
  // default generator leaves out.
  CHECK(lindblad_rhs(0.0, start, p, noise(Coupling::Jx, 0.5, 0.0), s).norm() <= 1e-14);
}
