#include <gtest/gtest.h>

#include <random>

#include "dicke/certification.hpp"
#include "dicke/dark_state.hpp"
#include "dicke/errors.hpp"
#include "dicke/observables.hpp"
#include "dicke/spin_algebra.hpp"
#include "oracles.hpp"

using namespace dicke;

namespace {

std::vector<double> grid(int k) {
  std::vector<double> out;
  for (int i = 0; i < k; ++i) {
    out.push_back(2.0 * kPi * i / k);
  }
  return out;
}

Vector random_sector_state(int n, std::mt19937_64 &rng) {
  return random_pure_state(n + 1, rng);
}

} // namespace

TEST(Observables, MomentsOfDickeStates) {
  const auto m = spin_moments(dicke_state(4, 2, Axis::X));
  EXPECT_NEAR(m.mean_jx, 0.0, 1e-12);
  EXPECT_NEAR(m.var_jx, 0.0, 1e-12);
  EXPECT_NEAR(m.var_jy, 3.0, 1e-12);
  EXPECT_NEAR(m.var_jz, 3.0, 1e-12);
  const auto g = spin_moments(dicke_state(4, 0));
  EXPECT_NEAR(g.mean_jz, -2.0, 1e-12);
  EXPECT_NEAR(g.var_jx, 1.0, 1e-12);
  EXPECT_NEAR(g.var_jy, 1.0, 1e-12);
  EXPECT_NEAR(g.var_jz, 0.0, 1e-12);
  EXPECT_THROW(spin_moments(Vector(Vector::Zero(5))), ConfigurationError);
}

TEST(Observables, VarianceSumIdentity) {
  std::mt19937_64 rng(5);
  for (int n : {2, 3, 4, 6}) {
    for (int k = 0; k < 10; ++k) {
      const auto m = spin_moments(random_sector_state(n, rng));
      const double j = 0.5 * n;
      EXPECT_NEAR(m.var_jx + m.var_jy + m.var_jz + m.mean_jx * m.mean_jx +
                      m.mean_jy * m.mean_jy + m.mean_jz * m.mean_jz,
                  j * (j + 1), 1e-10);
    }
  }
}

TEST(Observables, SpinNoiseAlongDarkFamily) {
  double best = 1e9;
  double best_theta = 0.0;
  for (int i = 1; i < 400; ++i) {
    const double theta = kPi * i / 400.0;
    const auto m = spin_moments(dark_state_at_theta(4, theta).spin_vector());
    if (m.var_jx < best) {
      best = m.var_jx;
      best_theta = theta;
    }
  }
  EXPECT_NEAR(best_theta, kPi / 2, 1e-12);
  EXPECT_LT(best, 1e-10);
  const auto start = spin_moments(dark_state_at_theta(4, 0.0).spin_vector());
  EXPECT_NEAR(start.var_jx, 1.0, 1e-10);
  EXPECT_NEAR(start.var_jy, 1.0, 1e-10);
  EXPECT_NEAR(start.var_jz, 0.0, 1e-10);
}

TEST(Observables, WitnessValues) {
  const Vector d = dicke_state(4, 2, Axis::X);
  EXPECT_NEAR(witness(d, Axis::Y, Axis::Z), 6.0, 1e-9);
  EXPECT_TRUE(witness_detects_four_partite(4, Axis::Y, Axis::Z, 6.0));
  EXPECT_FALSE(witness_detects_four_partite(4, Axis::Y, Axis::Z, 5.2));
  // Fully polarized along x: <J_y^2> + <J_z^2> = N/2.
  EXPECT_NEAR(witness(dicke_state(4, 4, Axis::X), Axis::Y, Axis::Z), 2.0, 1e-12);
  EXPECT_THROW(witness(d, Axis::Y, Axis::Y), DomainError);
  const Matrix rho = d * d.adjoint();
  EXPECT_NEAR(witness(rho, Axis::Y, Axis::Z), 6.0, 1e-9);
}

TEST(Observables, ParityOfIdealBellState) {
  const auto r = parity_scan(dicke_state(2, 1, Axis::X), grid(24));
  EXPECT_NEAR(r.fidelity, 1.0, 1e-10);
  EXPECT_NEAR(r.scan.amplitude, 1.0, 1e-10);
  EXPECT_NEAR(r.p_zero, 0.0, 1e-12);
  EXPECT_NEAR(r.p_minus + r.p_plus, 1.0, 1e-12);
  EXPECT_THROW(parity_scan(dicke_state(4, 2), grid(8)), DomainError);
}

TEST(Observables, ParityMatchesQubitSimulation) {
  std::mt19937_64 rng(9);
  const Matrix iso = oracle::dicke_columns(2);
  const Matrix jp = oracle::qubit_jplus(2);
  const Matrix jx = 0.5 * (jp + jp.adjoint());
  const Matrix jy = cplx{0.0, -0.5} * (jp - jp.adjoint());
  for (int trial = 0; trial < 5; ++trial) {
    const Vector s = random_sector_state(2, rng);
    const Vector full = iso * s;
    const auto phases = grid(12);
    const auto r = parity_scan(s, phases);
    for (std::size_t k = 0; k < phases.size(); ++k) {
      const Matrix g = std::cos(phases[k]) * jx + std::sin(phases[k]) * jy;
      const Vector out = oracle::expm(cplx{0.0, -kPi / 2} * g) * full;
      double parity = 0.0;
      for (int b = 0; b < 4; ++b) {
        parity += ((2 - oracle::bits(b)) % 2 == 0 ? 1.0 : -1.0) * std::norm(out(b));
      }
      EXPECT_NEAR(r.scan.parities[k], parity, 1e-12);
    }
  }
}

TEST(Observables, ParityFitRecoversSinusoid) {
  const auto phases = grid(16);
  std::vector<double> y;
  for (double p : phases) {
    y.push_back(0.7 * std::cos(2 * p + 0.4) + 0.05);
  }
  const auto fit = fit_parity(phases, y);
  EXPECT_NEAR(fit.amplitude, 0.7, 1e-12);
  EXPECT_NEAR(fit.phase_offset, 0.4, 1e-12);
  EXPECT_NEAR(fit.offset, 0.05, 1e-12);
  EXPECT_THROW(fit_parity(std::vector<double>{0.0, 1.0}, std::vector<double>{0.0, 1.0}),
               ConfigurationError);
  EXPECT_NEAR(parity_fidelity(0.516, 0.451, 0.95), 0.9585, 1e-12);
}

TEST(Observables, PopulationsSumToOne) {
  std::mt19937_64 rng(3);
  for (int n : {2, 4, 6}) {
    const Vector s = random_sector_state(n, rng);
    const auto px = populations_x(s);
    double sum = 0.0;
    for (double p : px.p) {
      sum += p;
    }
    EXPECT_NEAR(sum, 1.0, 1e-10);
    const Matrix rho = s * s.adjoint();
    for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
      const auto p = populations(rho, a);
      double t = 0.0;
      for (double v : p) {
        t += v;
      }
      EXPECT_NEAR(t, 1.0, 1e-10);
    }
    const auto z = populations(rho, Axis::Z);
    for (int m = 0; m <= n; ++m) {
      EXPECT_NEAR(z[m], std::norm(s(m)), 1e-12);
    }
    const auto eq = populations_equatorial(rho, 0.0);
    const auto x = populations(rho, Axis::X);
    for (int m = 0; m <= n; ++m) {
      EXPECT_NEAR(eq[m], x[m], 1e-12);
    }
  }
  EXPECT_NEAR(populations_x(dicke_state(4, 2, Axis::X)).at(0), 1.0, 1e-12);
}

TEST(Observables, GhzDickeOverlap) {
  Vector ghz = Vector::Zero(5);
  ghz(0) = ghz(4) = std::sqrt(0.5);
  EXPECT_NEAR(direct_fidelity(ghz, dicke_state(4, 2, Axis::X)), 0.75, 1e-12);
  EXPECT_NEAR(kGhzDickeOverlap, 0.75, 0.0);
}

TEST(Observables, DirectFidelityBelowP0) {
  std::mt19937_64 rng(21);
  for (int k = 0; k < 50; ++k) {
    const Matrix rho = random_mixed_state(5, 3, rng);
    EXPECT_LE(direct_fidelity(rho, dicke_state(4, 2, Axis::X)),
              populations(rho, Axis::X)[2] + 1e-12);
  }
  EXPECT_THROW(require_normalized(Vector(Vector::Ones(3))), ConfigurationError);
}
