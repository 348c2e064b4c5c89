#include "dicke/dark_state.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dicke/errors.hpp"
#include "dicke/spin_algebra.hpp"

namespace dicke {

RealVector DarkState::chain_vector() const {
  RealVector v = RealVector::Zero(n_ions_ + 1);
  for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
    v(static_cast<Eigen::Index>(2 * i)) = amplitudes_[i];
  }
  return v;
}

Vector DarkState::spin_vector() const { return chain_vector().cast<cplx>(); }

DarkState dark_coefficients(int n_ions, double omega_r, double omega_b) {
  if (n_ions < 2 || n_ions % 2 != 0) {
    throw UnsupportedError("dark states are implemented for even N only, got N=" +
                           std::to_string(n_ions));
  }
  if (!(omega_r >= 0.0) || !(omega_b >= 0.0) || !std::isfinite(omega_r) ||
      !std::isfinite(omega_b)) {
    throw DomainError("sideband amplitudes must be finite and nonnegative");
  }
  if (omega_r == 0.0 && omega_b == 0.0) {
    throw DomainError("dark state undefined for Omega_r = Omega_b = 0");
  }
  DarkState s;
  s.n_ions_ = n_ions;
  s.omega_r_ = omega_r;
  s.omega_b_ = omega_b;

  const int half = n_ions / 2;
  s.coeffs_.resize(half + 1);
  s.coeffs_[0] = 1.0;
  for (int i = 1; i <= half; ++i) {
    s.coeffs_[i] = -s.coeffs_[i - 1] * coupling_R(n_ions, 2 * i - 2) /
                   coupling_R(n_ions, 2 * i - 1);
  }

  // Powers of the rescaled amplitudes avoid overflow for large Omega.
  const double scale = std::max(omega_r, omega_b);
  const double r = omega_r / scale;
  const double b = omega_b / scale;
  std::vector<double> raw(half + 1);
  double norm2 = 0.0;
  for (int i = 0; i <= half; ++i) {
    raw[i] = s.coeffs_[i] * std::pow(b, i) * std::pow(r, half - i);
    norm2 += raw[i] * raw[i];
  }
  const double inv = 1.0 / std::sqrt(norm2);
  s.amplitudes_.resize(half + 1);
  for (int i = 0; i <= half; ++i) {
    s.amplitudes_[i] = raw[i] * inv;
  }
  // A refers to the unscaled amplitudes: A * C_i Ob^i Or^{N/2-i}.
  s.norm_A_ = inv / std::pow(scale, half);
  return s;
}

DarkState dark_state_at_theta(int n_ions, double theta) {
  return dark_coefficients(n_ions, 1.0 + std::cos(theta), 1.0 - std::cos(theta));
}

double verify_dark(const RealVector &chain_state, const ReducedHamiltonian &h) {
  if (chain_state.size() != h.dimension()) {
    throw ConfigurationError("dark-state vector and Hamiltonian dimensions differ");
  }
  return (h.matrix() * chain_state).norm();
}

double verify_dark(const DarkState &state, const ReducedHamiltonian &h) {
  if (state.n_ions() != h.basis().n_ions()) {
    throw ConfigurationError("dark state and Hamiltonian have different N");
  }
  return verify_dark(state.chain_vector(), h);
}

JxCheck jx_annihilation_check(int n_ions) {
  if (n_ions % 2 != 0 || n_ions < 2 || n_ions > 10) {
    throw UnsupportedError("J_x check needs even N in [2, 10]");
  }
  const Vector psi = dark_coefficients(n_ions, 1.0, 1.0).spin_vector();
  const auto jx = build_collective(n_ions, Collective::Jx);
  const Vector target =
      rotation_y(n_ions, kPi / 2).matrix() * dicke_state(n_ions, n_ions / 2);
  return {(jx * psi).norm(), std::norm(target.dot(psi))};
}

} // namespace dicke
