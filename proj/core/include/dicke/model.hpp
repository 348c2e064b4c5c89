#pragma once

#include "dicke/spin_algebra.hpp"
#include "dicke/types.hpp"

namespace dicke {

/// Trapped-ion sideband drive parameters. Amplitudes are real and
/// nonnegative; the sideband phases are absorbed into the basis states.
struct SystemParams {
  int n_ions = 2;
  double eta = 1.0;     // Lamb-Dicke factor
  double omega_r = 0.0; // red sideband Rabi amplitude
  double omega_b = 0.0; // blue sideband Rabi amplitude
  double delta = 0.0;   // sideband detuning
  int n_max = 5;        // phonon Fock cutoff
  // Multiplies every coupling of the full interaction-picture Hamiltonian.
  // 1.0 keeps the physical eta*Omega/2 prefactor.
  double coupling_scale = 1.0;

  /// Throws ConfigurationError on negative or non-finite entries.
  void validate() const;

  /// Horizontal Raman transitions negligible: 2 delta > 10 eta max(Omega).
  bool reduced_model_valid() const;

  static int default_n_max(int n_ions) { return n_ions / 2 + 4; }
  static int minimum_n_max(int n_ions) { return n_ions / 2 + 2; }
};

/// Rotating-frame Hamiltonian restricted to the alternating chain
/// |D^0>|0>, |D^1>|1>, |D^2>|0>, ..., |D^N>|phonon(N)>.
class ReducedHamiltonian {
public:
  ReducedHamiltonian(DickeBasis basis, RealMatrix matrix);

  const DickeBasis &basis() const noexcept { return basis_; }
  const RealMatrix &matrix() const noexcept { return matrix_; }
  int dimension() const noexcept { return basis_.dimension(); }

  /// Phonon number attached to chain position k (0 for even k, 1 for odd).
  static int phonon_of(int k) noexcept { return k % 2; }

private:
  DickeBasis basis_;
  RealMatrix matrix_;
};

/// Literal tridiagonal form: 0 / delta on the diagonal, R_k eta Omega_b on
/// even bonds and R_k eta Omega_r on odd bonds.
ReducedHamiltonian reduced_hamiltonian(const SystemParams &params);

/// Index of |D^m>|n> in the spin (x) Fock product space.
inline int product_index(int m, int n, int n_max) { return m * (n_max + 1) + n; }

/// H(t) = (eta Or/2)(a J+ e^{-i delta t} + h.c.) + (eta Ob/2)(a+ J+ e^{i delta t} + h.c.)
/// on the (N+1)(n_max+1)-dimensional space, scaled by coupling_scale.
/// Throws ConfigurationError when n_max < N/2 + 2.
Matrix full_hamiltonian_at(double t, const SystemParams &params);

/// Wraps full_hamiltonian_at for a fixed parameter set.
class FullHamiltonian {
public:
  explicit FullHamiltonian(SystemParams params);

  const SystemParams &params() const noexcept { return params_; }
  int dimension() const noexcept {
    return (params_.n_ions + 1) * (params_.n_max + 1);
  }
  Matrix operator()(double t) const { return full_hamiltonian_at(t, params_); }

private:
  SystemParams params_;
};

/// Embed a chain-basis vector into the product space.
Vector embed_reduced(const Vector &chain_state, int n_ions, int n_max);

/// Map an interaction-picture product-space state into the frame rotating
/// with delta a^dagger a, the frame of reduced_hamiltonian.
Vector to_rotating_frame(const Vector &full_state, double t,
                         const SystemParams &params);

} // namespace dicke
