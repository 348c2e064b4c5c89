#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "dicke/types.hpp"

namespace dicke {

/// Witness W = <J_a^2> + <J_b^2> for the two axes orthogonal to `axis`,
/// populations of J_axis eigenvalues -j_max..j_max, and the resulting
/// fidelity interval for the half-excited Dicke state along `axis`.
struct CertificationRecord {
  double j_max = 0.0;
  Axis axis = Axis::X;
  double witness = 0.0;
  std::vector<double> populations;
  double f_lo = 0.0;
  double f_hi = 0.0;
};

/// F <= p_0. P lists p_{-j_max} .. p_{j_max} (odd length).
double fidelity_upper(std::span<const double> populations);

/// F >= W/(2 j_M) - (j_M - 1)/2 p_0 - sum_{j_z != 0} ((j_M + 1)/2 - j_z^2/(2 j_M)) p_{j_z}.
/// j_max must be a positive integer (even ion number).
double fidelity_lower(double witness, std::span<const double> populations,
                      double j_max);

/// Four-ion form W/4 - ((p_-2 + p_2 + p_0)/2 + 5(p_-1 + p_1)/4) <= F <= p_0.
std::pair<double, double> fidelity_sandwich_4ion(double witness,
                                                 std::span<const double> populations);

/// Builds a record from measured or simulated W and P. Populations are used
/// as given; measured data need not sum to one.
CertificationRecord make_record(double witness, std::vector<double> populations,
                                double j_max, Axis axis = Axis::X);

/// Exact W and P of a 2^N-dimensional state (N even, N <= 8), computed with
/// collective operators of the full qubit space, then bounded.
CertificationRecord certify_from_state(const Matrix &rho_full, Axis axis);
CertificationRecord certify_from_state(const Vector &state_full, Axis axis);

/// |D^{N/2}> along `axis`, written in the 2^N computational basis.
Vector half_excited_target_full(int n_ions, Axis axis);

struct BoundErrors {
  double sigma_lo = 0.0;
  double sigma_hi = 0.0;
};

/// Linear propagation of independent standard errors through both bounds.
/// Throws DomainError on negative errors.
BoundErrors propagate_uncertainty(const CertificationRecord &record,
                                  double sigma_witness,
                                  std::span<const double> sigma_populations);

/// A lower bound above 3/4 rules out the GHZ state, whose overlap with the
/// half-excited four-ion Dicke state is 3/4.
inline constexpr double kGhzDickeOverlap = 0.75;
inline bool excludes_ghz(double f_lo) { return f_lo > kGhzDickeOverlap; }

/// Haar-random pure state of dimension dim.
Vector random_pure_state(int dim, std::mt19937_64 &rng);

/// Mixture of `components` Haar-random pure states with flat-Dirichlet weights.
Matrix random_mixed_state(int dim, int components, std::mt19937_64 &rng);

} // namespace dicke
