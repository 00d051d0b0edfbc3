#pragma once

#include <complex>

#include <Eigen/Dense>

namespace majorana {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

/// Default relative tolerance for operator equality (Frobenius norm).
inline constexpr double kDefaultRelTol = 1e-10;

/// ||a - b||_F <= rel_tol * max(||a||_F, ||b||_F, 1).
bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b,
                  double rel_tol = kDefaultRelTol);

bool is_hermitian(const ComplexMatrix& m, double rel_tol = kDefaultRelTol);

struct Eigensystem {
  RealVector values;      // ascending
  ComplexMatrix vectors;  // columns are eigenvectors
};

// Cyclic complex Jacobi. Eigenvalue clusters closer than 1e-9 get an
// orthonormal but otherwise arbitrary basis. Throws ContractViolation if
// `m` is not Hermitian to `herm_tol`.
Eigensystem hermitian_eigensystem(const ComplexMatrix& m,
                                  double herm_tol = kDefaultRelTol);

/// Tensor product a (x) b. Throws ResourceLimit when the result would exceed
/// max_dim rows.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b,
                   Eigen::Index max_dim = 1024);

/// Trace norm distance 0.5 * ||a - b||_1 of two Hermitian matrices.
double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace majorana
