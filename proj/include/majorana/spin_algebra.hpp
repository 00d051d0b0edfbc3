#pragma once

#include <compare>
#include <string>

#include "majorana/linalg.hpp"

namespace majorana {

/// Spin quantum number j, stored as the integer 2j >= 1.
class HalfInteger {
 public:
  constexpr HalfInteger() = default;
  /// Throws InvalidParameter unless twice_j >= 1.
  explicit HalfInteger(int twice_j);

  /// Accepts 0.5, 1, 1.5, ...; anything else throws InvalidParameter.
  static HalfInteger from_double(double j);

  constexpr int twice() const { return twice_; }
  constexpr double value() const { return 0.5 * twice_; }
  constexpr int dim() const { return twice_ + 1; }

  std::string to_string() const;

  friend constexpr auto operator<=>(HalfInteger, HalfInteger) = default;

 private:
  int twice_ = 1;
};

/// Angular momentum operators for one j in the descending-m basis
/// |j,j>, |j,j-1>, ..., |j,-j>.
struct SpinSet {
  HalfInteger j;
  ComplexMatrix jx, jy, jz, jplus, jminus;
  // Jy = jy_vectors * diag(jy_values) * jy_vectors^dagger with jy_values
  // snapped to the exact m values. Used for closed-form y rotations.
  RealVector jy_values;
  ComplexMatrix jy_vectors;

  int dim() const { return j.dim(); }
  /// Magnetic quantum number of basis row `index`.
  double m(int index) const { return j.value() - index; }
};

SpinSet build_spin(HalfInteger j);

/// exp(i theta Jy), from the exact spectrum of Jy.
ComplexMatrix rotation_y(const SpinSet& spin, double theta);

enum class Component { x, y, z };

inline constexpr int kDefaultQubitCap = 6;

/// Embeds the symmetric (Dicke) subspace of 2j spin-1/2 particles.
/// Row index encodes the product state with bit k (from the most significant)
/// set when spin k points down; column i is |j, j - i>.
struct DickeIsometry {
  HalfInteger j;
  ComplexMatrix v;

  /// Projector onto the maximal-S^2 subspace, V V^dagger.
  ComplexMatrix projector() const { return v * v.adjoint(); }
};

DickeIsometry dicke_isometry(HalfInteger j, int qubit_cap = kDefaultQubitCap);

/// Single spin-1/2 component S_c = sigma_c / 2.
ComplexMatrix spin_half(Component c);

/// I (x) ... (x) op (x) ... (x) I with `op` on spin `site` of `n_spins`.
ComplexMatrix embed_single(const ComplexMatrix& op, int site, int n_spins,
                           int qubit_cap = kDefaultQubitCap);

/// Sum over k of the spin-1/2 component c acting on spin k.
ComplexMatrix collective_operator(Component c, int n_spins,
                                  int qubit_cap = kDefaultQubitCap);

/// op (x) op (x) ... (n factors).
ComplexMatrix tensor_power(const ComplexMatrix& op, int n,
                           int qubit_cap = kDefaultQubitCap);

}  // namespace majorana
