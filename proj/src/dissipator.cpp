#include "majorana/dissipator.hpp"

#include <cmath>
#include <utility>
#include <string>

#include "majorana/errors.hpp"

namespace majorana {

std::string_view to_string(Coupling c) {
  switch (c) {
    case Coupling::Jz: return "Jz";
    case Coupling::Jx: return "Jx";
    case Coupling::Custom: return "custom";
  }
  return "custom";
}

Coupling parse_coupling(std::string_view name) {
  if (name == "Jz") return Coupling::Jz;
  if (name == "Jx") return Coupling::Jx;
  if (name == "custom") return Coupling::Custom;
  throw InvalidParameter("unknown channel '" + std::string(name) +
                         "' (expected Jz, Jx or custom)");
}

void NoiseConfig::validate() const {
  if (!(gamma_flat >= 0.0) || !std::isfinite(gamma_flat))
    throw InvalidParameter("gamma must be finite and >= 0");
  if (!(temperature >= 0.0) || !std::isfinite(temperature))
    throw InvalidParameter("temperature must be finite and >= 0");
  if (!(nu_zero_rate >= 0.0)) throw InvalidParameter("nu_zero_rate must be >= 0");
  if (coupling == Coupling::Custom && !is_hermitian(custom))
    throw InvalidParameter("custom coupling operator must be square and Hermitian");
}

ComplexMatrix coupling_operator(const NoiseConfig& n, const SpinSet& s) {
  switch (n.coupling) {
    case Coupling::Jz: return s.jz;
    case Coupling::Jx: return s.jx;
    case Coupling::Custom:
      if (n.custom.rows() != s.dim() || n.custom.cols() != s.dim())
        throw InvalidParameter("custom coupling dimension does not match 2j+1");
      return n.custom;
  }
  return s.jz;
}

const LindbladTerm* LindbladTerms::find(int nu) const {
  for (const auto& t : terms)
    if (t.nu == nu) return &t;
  return nullptr;
}

LindbladTerms jump_operators(const InstantaneousFrame& f, const ComplexMatrix& x,
                             bool include_nu_zero) {
  const int d = f.dim();
  if (x.rows() != d || x.cols() != d)
    throw InvalidParameter("jump_operators: coupling and frame dimensions differ");
  LindbladTerms out;
  // Row/column i of the frame carries label m = j - i, so the block
  // Pi_a X Pi_b has nu = m_b - m_a = a - b.
  for (int nu = -(d - 1); nu <= d - 1; ++nu) {
    if (nu == 0 && !include_nu_zero) continue;
    ComplexMatrix x_nu = ComplexMatrix::Zero(d, d);
    for (int a = 0; a < d; ++a) {
      const int b = a - nu;
      if (b < 0 || b >= d) continue;
      x_nu += f.projectors[static_cast<std::size_t>(a)] * x *
              f.projectors[static_cast<std::size_t>(b)];
    }
    out.terms.push_back({nu, std::move(x_nu), 0.0});
  }
  return out;
}

LindbladTerms jump_operators(const InstantaneousFrame& f, const NoiseConfig& n,
                             const SpinSet& s) {
  return jump_operators(f, coupling_operator(n, s), n.include_nu_zero);
}

double bose_occupation(double nu_bar, double temperature) {
  if (!(nu_bar > 0.0))
    throw InvalidParameter("bose_occupation: frequency must be positive");
  if (!(temperature >= 0.0))
    throw InvalidParameter("bose_occupation: temperature must be >= 0");
  if (temperature == 0.0) return 0.0;
  return 1.0 / std::expm1(nu_bar / temperature);
}

double rate(int nu, double omega_gap, const NoiseConfig& n) {
  if (nu == 0) {
    if (!n.include_nu_zero)
      throw InvalidParameter("rate: nu = 0 requested but include_nu_zero is off");
    return n.nu_zero_rate;
  }
  const double occupation = bose_occupation(std::abs(nu) * omega_gap, n.temperature);
  return nu > 0 ? n.gamma_flat * (occupation + 1.0) : n.gamma_flat * occupation;
}

void assign_rates(LindbladTerms& terms, double omega_gap, const NoiseConfig& n) {
  for (auto& t : terms.terms) t.rate = rate(t.nu, omega_gap, n);
}

ComplexMatrix apply_dissipator(const LindbladTerms& terms, const ComplexMatrix& rho) {
  ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
  for (const auto& t : terms.terms) {
    if (t.rate == 0.0) continue;
    const ComplexMatrix xdx = t.x_nu.adjoint() * t.x_nu;
    out += t.rate * (t.x_nu * rho * t.x_nu.adjoint() - 0.5 * (xdx * rho + rho * xdx));
  }
  return out;
}

ComplexMatrix lindblad_rhs_reference(double t, const ComplexMatrix& rho,
                                     const ModelParams& p, const NoiseConfig& n,
                                     const SpinSet& s) {
  const ComplexMatrix h = hamiltonian(t, p, s);
  const InstantaneousFrame f = frame(t, p, s);
  LindbladTerms terms = jump_operators(f, n, s);
  assign_rates(terms, f.omega, n);
  return -kI * (h * rho - rho * h) + apply_dissipator(terms, rho);
}

MasterEquation::MasterEquation(const ModelParams& p, const NoiseConfig& n)
    : params_(p), noise_(n), spin_(build_spin(p.j)) {
  params_.validate();
  noise_.validate();
  coupling_ = coupling_operator(noise_, spin_);
}

const MasterEquation::FrameData& MasterEquation::frame_at(double t) const {
  for (const auto& f : cache_)
    if (f.valid && f.t == t) return f;
  FrameData& f = cache_[next_slot_];
  next_slot_ = (next_slot_ + 1) % cache_.size();

  const int d = spin_.dim();
  f.valid = true;
  f.t = t;
  f.w = adiabatic_basis(t, params_, spin_);
  f.omega = gap(t, params_);
  f.bands.clear();
  f.decay = Eigen::VectorXd::Zero(d);
  if (noise_.gamma_flat > 0.0 || (noise_.include_nu_zero && noise_.nu_zero_rate > 0.0)) {
    const ComplexMatrix x_a = f.w.adjoint() * coupling_ * f.w;
    for (int nu = -(d - 1); nu <= d - 1; ++nu) {
      if (nu == 0 && !noise_.include_nu_zero) continue;
      const double k = rate(nu, f.omega, noise_);
      if (k == 0.0) continue;
      // X(nu) in this frame has entries (a, a - nu) only.
      Band b{nu, Eigen::VectorXcd::Zero(d)};
      for (int a = 0; a < d; ++a) {
        const int col = a - nu;
        if (col < 0 || col >= d) continue;
        b.values(a) = std::sqrt(k) * x_a(a, col);
        f.decay(col) += std::norm(b.values(a));
      }
      f.bands.push_back(std::move(b));
    }
  }
  return f;
}

ComplexMatrix MasterEquation::operator()(double t, const ComplexMatrix& rho) const {
  const int d = spin_.dim();
  if (rho.rows() != d || rho.cols() != d)
    throw InvalidParameter("lindblad_rhs: density matrix dimension does not match 2j+1");

  const FrameData& f = frame_at(t);
  ComplexMatrix rho_a(d, d);
  rho_a.noalias() = f.w.adjoint() * rho * f.w;

  // H is diag(m * omega) here; decay(b) is the diagonal of
  // sum_nu rate X(nu)^dagger X(nu).
  ComplexMatrix out(d, d);
  for (int c = 0; c < d; ++c)
    for (int a = 0; a < d; ++a)
      out(a, c) = (-kI * (f.omega * (spin_.m(a) - spin_.m(c))) - 0.5 * (f.decay(a) + f.decay(c))) *
                  rho_a(a, c);
  for (const auto& b : f.bands)
    for (int c = 0; c < d; ++c) {
      const int e = c - b.nu;
      if (e < 0 || e >= d) continue;
      for (int a = 0; a < d; ++a) {
        const int r = a - b.nu;
        if (r < 0 || r >= d) continue;
        out(a, c) += b.values(a) * rho_a(r, e) * std::conj(b.values(c));
      }
    }
  ComplexMatrix lab(d, d);
  lab.noalias() = f.w * out * f.w.adjoint();
  return lab;
}

ComplexMatrix lindblad_rhs(double t, const ComplexMatrix& rho, const ModelParams& p,
                           const NoiseConfig& n, const SpinSet& s) {
  if (p.j != s.j) throw InvalidParameter("lindblad_rhs: spin set does not match model j");
  return MasterEquation(p, n)(t, rho);
}

}  // namespace majorana
