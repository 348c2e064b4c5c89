#pragma once

#include <span>
#include <vector>

#include "dicke/types.hpp"

namespace dicke {

struct SpinMoments {
  double mean_jx = 0.0;
  double mean_jy = 0.0;
  double mean_jz = 0.0;
  double var_jx = 0.0;
  double var_jy = 0.0;
  double var_jz = 0.0;
};

/// Moments of the collective spin on the symmetric sector. Accepts a
/// normalized state vector or a unit-trace density matrix (for example the
/// phonon-traced marginal of a full-model state).
SpinMoments spin_moments(const Vector &state);
SpinMoments spin_moments(const Matrix &rho);

/// <J_a^2> + <J_b^2>. Throws DomainError when a == b.
double witness(const Vector &state, Axis a, Axis b);
double witness(const Matrix &rho, Axis a, Axis b);

/// Genuine four-partite entanglement threshold for W_yz around |D^2_{4(x)}>.
inline constexpr double kFourPartiteWitnessThreshold = 5.23;

/// True only for N = 4, the (y, z) pair and a value above 5.23.
bool witness_detects_four_partite(int n_ions, Axis a, Axis b, double value);

/// Fit of parity(phi) = amplitude cos(2 phi + phase_offset) + offset.
struct ParityScan {
  std::vector<double> phases;
  std::vector<double> parities;
  double amplitude = 0.0;
  double phase_offset = 0.0;
  double offset = 0.0;
};

struct ParityResult {
  ParityScan scan;
  double p_minus = 0.0; // |down down>
  double p_zero = 0.0;
  double p_plus = 0.0;  // |up up>
  double fidelity = 0.0;
};

/// (p_{-1} + p_{+1} + A_p) / 2.
double parity_fidelity(double p_minus, double p_plus, double amplitude);

/// Least-squares fit with the 2 phi frequency fixed. Needs >= 3 phases.
ParityScan fit_parity(std::span<const double> phases,
                      std::span<const double> parities);

/// Global pi/2 analysis pulse about the equatorial axis at azimuth phi,
/// parity prod_i sigma_z^(i) evaluated in the 4-dimensional two-qubit space.
/// Input is a 2-ion symmetric-sector state (dimension 3) or density matrix.
ParityResult parity_scan(const Vector &state, std::span<const double> phases);
ParityResult parity_scan(const Matrix &rho, std::span<const double> phases);

/// Probabilities of J_axis eigenvalues m - N/2, m = 0..N.
std::vector<double> populations(const Matrix &rho, Axis axis);
std::vector<double> populations(const Vector &state, Axis axis);
/// Along the equatorial direction (cos phi, sin phi, 0).
std::vector<double> populations_equatorial(const Matrix &rho, double phi);

struct PopulationsX {
  int n_ions = 0;
  std::vector<double> p; // p[m] is the probability of J_x = m - N/2

  double at(int jx) const { return p.at(static_cast<std::size_t>(jx + n_ions / 2)); }
};

PopulationsX populations_x(const Vector &state);
PopulationsX populations_x(const Matrix &rho);

/// |<target|psi>|^2, or <target|rho|target>.
double direct_fidelity(const Vector &state, const Vector &target);
double direct_fidelity(const Matrix &rho, const Vector &target);

/// Throws ConfigurationError unless |trace - 1| (or norm) is within tol.
void require_normalized(const Vector &state, double tol = 1e-6);
void require_normalized(const Matrix &rho, double tol = 1e-6);

} // namespace dicke
