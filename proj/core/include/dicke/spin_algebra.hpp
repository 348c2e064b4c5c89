#pragma once

#include <cstdint>

#include "dicke/types.hpp"

namespace dicke {

/// Symmetric Dicke basis |D^m_N>, m = 0 (all spins down) .. N (all up).
class DickeBasis {
public:
  explicit DickeBasis(int n_ions);

  int n_ions() const noexcept { return n_ions_; }
  int dimension() const noexcept { return n_ions_ + 1; }
  double j_max() const noexcept { return 0.5 * n_ions_; }
  /// J_z eigenvalue m - N/2 of basis state m.
  double jz_eigenvalue(int m) const;

  friend bool operator==(const DickeBasis &, const DickeBasis &) = default;

private:
  int n_ions_;
};

enum class Collective { JPlus, JMinus, Jx, Jy, Jz, JSquared };

/// Operator on the (N+1)-dimensional symmetric sector. Immutable.
class CollectiveOperator {
public:
  CollectiveOperator(DickeBasis basis, Matrix matrix, bool hermitian);

  const DickeBasis &basis() const noexcept { return basis_; }
  const Matrix &matrix() const noexcept { return matrix_; }
  bool hermitian() const noexcept { return hermitian_; }

  Vector operator*(const Vector &v) const { return matrix_ * v; }

private:
  DickeBasis basis_;
  Matrix matrix_;
  bool hermitian_;
};

/// <D^{m+1}|J_+|D^m> = (N-m) sqrt(C(N,m)/C(N,m+1)) = sqrt((N-m)(m+1)).
double coupling_R(int n_ions, int m);

CollectiveOperator build_collective(int n_ions, Collective which);

/// exp(-i angle J_y) on the symmetric sector. No extra phase convention.
CollectiveOperator rotation_y(int n_ions, double angle);

/// exp(-i angle G) for a Hermitian generator G, via its eigendecomposition.
Matrix unitary_exp(const Matrix &hermitian_generator, double angle);

/// Unitary U with U J_z U^dagger = J_axis on the symmetric sector.
/// X: rotation_y(pi/2); Y: exp(+i pi/2 J_x); Z: identity.
Matrix axis_rotation(int n_ions, Axis axis);

/// Unitary U with U J_z U^dagger = cos(phi) J_x + sin(phi) J_y.
Matrix equatorial_rotation(int n_ions, double phi);

/// |D^m_N> along z as a vector on the symmetric sector.
Vector dicke_state(int n_ions, int m);

/// J_axis eigenstate with eigenvalue m - N/2, i.e. axis_rotation * |D^m>.
Vector dicke_state(int n_ions, int m, Axis axis);

// --- brute-force 2^N space -------------------------------------------------

inline constexpr int kMaxFullSpaceIons = 10;

/// Operator on the full 2^N qubit space. Computational index bit i set means
/// qubit i is up.
struct FullSpaceOperator {
  int n_ions;
  Matrix matrix;
};

/// Collective sum of single-site operators (sigma_+^(i), sigma_z^(i)/2, ...)
/// built explicitly in the 2^N space. Throws ResourceError for N > 10.
FullSpaceOperator full_space_oracle(int n_ions, Collective which);

/// 2^N x (N+1) isometry whose column m is |D^m_N> written in the
/// computational basis.
Matrix symmetric_isometry(int n_ions);

/// Tensor product of the same single-qubit unitary on every site.
Matrix full_space_product(int n_ions, const Eigen::Matrix2cd &single);

/// Full-space counterpart of axis_rotation.
Matrix full_space_axis_rotation(int n_ions, Axis axis);

/// Number of up spins in a computational basis index.
int popcount(std::uint64_t index);

} // namespace dicke
