#include "majorana/spin_algebra.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "majorana/errors.hpp"

namespace majorana {

HalfInteger::HalfInteger(int twice_j) : twice_(twice_j) {
  if (twice_j < 1)
    throw InvalidParameter("j must be a positive half-integer (2j >= 1), got 2j = " +
                           std::to_string(twice_j));
}

HalfInteger HalfInteger::from_double(double j) {
  const double twice = 2.0 * j;
  const double rounded = std::round(twice);
  if (!std::isfinite(j) || std::abs(twice - rounded) > 1e-12 || rounded < 1.0)
    throw InvalidParameter("j must be a positive half-integer (0.5, 1, 1.5, ...), got " +
                           std::to_string(j));
  return HalfInteger(static_cast<int>(rounded));
}

std::string HalfInteger::to_string() const {
  return twice_ % 2 == 0 ? std::to_string(twice_ / 2)
                         : std::to_string(twice_) + "/2";
}

SpinSet build_spin(HalfInteger j) {
  const int d = j.dim();
  const double jv = j.value();
  SpinSet s;
  s.j = j;
  s.jz = ComplexMatrix::Zero(d, d);
  s.jplus = ComplexMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i) s.jz(i, i) = s.m(i);
  // J+ |j,m> = sqrt(j(j+1) - m(m+1)) |j,m+1>; row i-1 carries m+1.
  for (int i = 1; i < d; ++i) {
    const double m = s.m(i);
    s.jplus(i - 1, i) = std::sqrt(jv * (jv + 1.0) - m * (m + 1.0));
  }
  s.jminus = s.jplus.adjoint();
  s.jx = 0.5 * (s.jplus + s.jminus);
  s.jy = (-0.5 * kI) * (s.jplus - s.jminus);

  auto eig = hermitian_eigensystem(s.jy);
  s.jy_vectors = std::move(eig.vectors);
  s.jy_values = RealVector(d);
  for (int i = 0; i < d; ++i) s.jy_values(i) = -jv + i;  // ascending m
  return s;
}

ComplexMatrix rotation_y(const SpinSet& spin, double theta) {
  if (!std::isfinite(theta))
    throw InvalidParameter("rotation_y: theta must be finite");
  Eigen::VectorXcd phases(spin.dim());
  for (int i = 0; i < spin.dim(); ++i)
    phases(i) = std::exp(kI * (theta * spin.jy_values(i)));
  return spin.jy_vectors * phases.asDiagonal() * spin.jy_vectors.adjoint();
}

namespace {

void check_qubits(int n_spins, int qubit_cap) {
  if (n_spins < 1)
    throw InvalidParameter("number of spins must be >= 1");
  if (n_spins > qubit_cap)
    throw ResourceLimit(std::to_string(n_spins) + " spins exceed the qubit cap of " +
                        std::to_string(qubit_cap));
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

DickeIsometry dicke_isometry(HalfInteger j, int qubit_cap) {
  const int n = j.twice();
  check_qubits(n, qubit_cap);
  const int full = 1 << n;
  DickeIsometry out{j, ComplexMatrix::Zero(full, j.dim())};
  // Column i = |j, j - i> has i down-spins, i.e. i set bits.
  for (int state = 0; state < full; ++state) {
    const int downs = std::popcount(static_cast<unsigned>(state));
    out.v(state, downs) = 1.0 / std::sqrt(binomial(n, downs));
  }
  return out;
}

ComplexMatrix spin_half(Component c) {
  ComplexMatrix s = ComplexMatrix::Zero(2, 2);
  switch (c) {
    case Component::x:
      s(0, 1) = s(1, 0) = 0.5;
      break;
    case Component::y:
      s(0, 1) = -0.5 * kI;
      s(1, 0) = 0.5 * kI;
      break;
    case Component::z:
      s(0, 0) = 0.5;
      s(1, 1) = -0.5;
      break;
  }
  return s;
}

ComplexMatrix embed_single(const ComplexMatrix& op, int site, int n_spins,
                           int qubit_cap) {
  check_qubits(n_spins, qubit_cap);
  if (site < 0 || site >= n_spins)
    throw InvalidParameter("embed_single: site out of range");
  const Eigen::Index cap = Eigen::Index{1} << qubit_cap;
  const Eigen::Index left = Eigen::Index{1} << site;
  const Eigen::Index right = Eigen::Index{1} << (n_spins - site - 1);
  return kron(kron(ComplexMatrix::Identity(left, left), op, cap),
              ComplexMatrix::Identity(right, right), cap);
}

ComplexMatrix collective_operator(Component c, int n_spins, int qubit_cap) {
  check_qubits(n_spins, qubit_cap);
  const ComplexMatrix s = spin_half(c);
  const Eigen::Index d = Eigen::Index{1} << n_spins;
  ComplexMatrix total = ComplexMatrix::Zero(d, d);
  for (int k = 0; k < n_spins; ++k) total += embed_single(s, k, n_spins, qubit_cap);
  return total;
}

ComplexMatrix tensor_power(const ComplexMatrix& op, int n, int qubit_cap) {
  if (n < 1) throw InvalidParameter("tensor_power: n must be >= 1");
  const Eigen::Index cap = Eigen::Index{1} << qubit_cap;
  ComplexMatrix out = op;
  for (int k = 1; k < n; ++k) out = kron(out, op, cap);
  return out;
}

}  // namespace majorana
