#pragma once

#include <vector>

#include "dicke/model.hpp"
#include "dicke/types.hpp"

namespace dicke {

/// Zero-energy eigenstate of the reduced Hamiltonian for even N:
///   A sum_i C_i Omega_b^i Omega_r^{N/2-i} |D^{2i}>|0>,
///   C_0 = 1, C_i = (-1)^i prod_{j=1..i} R_{2j-2} / R_{2j-1}.
class DarkState {
public:
  int n_ions() const noexcept { return n_ions_; }
  double omega_r() const noexcept { return omega_r_; }
  double omega_b() const noexcept { return omega_b_; }
  /// Unnormalized C_0 .. C_{N/2}.
  const std::vector<double> &coeffs() const noexcept { return coeffs_; }
  double norm_A() const noexcept { return norm_A_; }
  /// Normalized amplitudes over |D^0>, |D^2>, ..., |D^N>.
  const std::vector<double> &amplitudes() const noexcept { return amplitudes_; }

  /// Vector on the reduced chain basis (zeros at odd positions).
  RealVector chain_vector() const;
  /// Same amplitudes on the symmetric spin sector (phonon vacuum dropped).
  Vector spin_vector() const;

private:
  friend DarkState dark_coefficients(int, double, double);
  DarkState() = default;

  int n_ions_ = 0;
  double omega_r_ = 0.0;
  double omega_b_ = 0.0;
  std::vector<double> coeffs_;
  double norm_A_ = 0.0;
  std::vector<double> amplitudes_;
};

/// Throws UnsupportedError for odd N, DomainError for negative amplitudes
/// or Omega_r = Omega_b = 0.
DarkState dark_coefficients(int n_ions, double omega_r, double omega_b);

/// Dark state at mixing angle theta of Omega_b = 1 - cos, Omega_r = 1 + cos.
DarkState dark_state_at_theta(int n_ions, double theta);

/// ||H psi|| for the chain vector of the dark state.
double verify_dark(const DarkState &state, const ReducedHamiltonian &h);
double verify_dark(const RealVector &chain_state, const ReducedHamiltonian &h);

struct JxCheck {
  double jx_residual;      // ||J_x psi_d(Omega, Omega)||
  double rotated_fidelity; // |<psi_d | R_y(pi/2) | D^{N/2}_z>|^2
};

/// Checks that the equal-amplitude dark state is the J_x = 0 eigenstate.
/// Requires even N <= 10.
JxCheck jx_annihilation_check(int n_ions);

} // namespace dicke
