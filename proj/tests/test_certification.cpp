#include <gtest/gtest.h>

#include <random>

#include "dicke/certification.hpp"
#include "dicke/errors.hpp"
#include "dicke/observables.hpp"
#include "dicke/spin_algebra.hpp"
#include "oracles.hpp"

using namespace dicke;

namespace {

double true_fidelity(const Matrix &rho, int n, Axis axis) {
  const Vector t = half_excited_target_full(n, axis);
  return (t.adjoint() * rho * t)(0, 0).real();
}

std::vector<double> random_populations(std::mt19937_64 &rng, int len) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> p(len);
  for (auto &v : p) {
    v = u(rng);
  }
  return p;
}

} // namespace

TEST(Certification, SandwichOnRandomFullSpaceStates) {
  std::mt19937_64 rng(1234);
  for (int n : {2, 4, 6}) {
    const int dim = 1 << n;
    const int trials = n == 6 ? 20 : 60;
    for (int k = 0; k < trials; ++k) {
      const Vector psi = random_pure_state(dim, rng);
      const Matrix mixed = random_mixed_state(dim, 1 + k % 5, rng);
      for (Axis axis : {Axis::X, Axis::Y, Axis::Z}) {
        const auto rp = certify_from_state(psi, axis);
        const double fp = true_fidelity(psi * psi.adjoint(), n, axis);
        EXPECT_LE(rp.f_lo - 1e-9, fp);
        EXPECT_LE(fp, rp.f_hi + 1e-9);
        const auto rm = certify_from_state(mixed, axis);
        const double fm = true_fidelity(mixed, n, axis);
        EXPECT_LE(rm.f_lo - 1e-9, fm);
        EXPECT_LE(fm, rm.f_hi + 1e-9);
      }
    }
  }
}

TEST(Certification, TightOnTarget) {
  for (int n : {2, 4, 6}) {
    for (Axis axis : {Axis::X, Axis::Y, Axis::Z}) {
      const auto r = certify_from_state(half_excited_target_full(n, axis), axis);
      EXPECT_NEAR(r.f_lo, 1.0, 1e-10);
      EXPECT_NEAR(r.f_hi, 1.0, 1e-10);
    }
  }
}

TEST(Certification, TargetMatchesIndependentDickeState) {
  // |D^{N/2}> along z from the oracle isometry.
  const Vector t = half_excited_target_full(4, Axis::Z);
  EXPECT_NEAR(std::abs(t.dot(oracle::dicke_columns(4).col(2))), 1.0, 1e-12);
}

TEST(Certification, WitnessFromFullSpaceMatchesQubitOperators) {
  std::mt19937_64 rng(77);
  const int n = 4;
  const Matrix jp = oracle::qubit_jplus(n);
  const Matrix jx = 0.5 * (jp + jp.adjoint());
  const Matrix jy = cplx{0.0, -0.5} * (jp - jp.adjoint());
  const Matrix jz = oracle::qubit_jz(n);
  const Vector psi = random_pure_state(16, rng);
  auto ev = [&](const Matrix &o) { return psi.dot(o * psi).real(); };
  EXPECT_NEAR(certify_from_state(psi, Axis::X).witness, ev(jy * jy) + ev(jz * jz), 1e-12);
  EXPECT_NEAR(certify_from_state(psi, Axis::Y).witness, ev(jz * jz) + ev(jx * jx), 1e-12);
  EXPECT_NEAR(certify_from_state(psi, Axis::Z).witness, ev(jx * jx) + ev(jy * jy), 1e-12);
}

TEST(Certification, FourIonFormEqualsGeneralForm) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> w(0.0, 6.0);
  for (int k = 0; k < 1000; ++k) {
    const auto p = random_populations(rng, 5);
    const double wv = w(rng);
    const auto [lo, hi] = fidelity_sandwich_4ion(wv, p);
    EXPECT_NEAR(lo, fidelity_lower(wv, p, 2.0), 1e-12);
    EXPECT_NEAR(hi, fidelity_upper(p), 1e-12);
  }
}

TEST(Certification, LinearMonotonicity) {
  const std::vector<double> p{0.02, 0.05, 0.8, 0.08, 0.05};
  const double base = fidelity_lower(5.5, p, 2.0);
  EXPECT_GT(fidelity_lower(5.6, p, 2.0), base);
  auto q = p;
  q[2] += 0.1;
  EXPECT_NEAR(fidelity_lower(5.5, q, 2.0) - base, -0.5 * 0.1, 1e-12);
  EXPECT_NEAR(fidelity_upper(q) - fidelity_upper(p), 0.1, 1e-12);
  const std::vector<double> p3{0.0, 0.1, 0.1, 0.6, 0.1, 0.1, 0.0};
  auto q3 = p3;
  q3[3] += 0.2;
  EXPECT_NEAR(fidelity_lower(10.0, q3, 3.0) - fidelity_lower(10.0, p3, 3.0), -0.2, 1e-12);
}

TEST(Certification, PublishedMeasuredInputs) {
  const auto r = make_record(5.46, {0.00, 0.03, 0.88, 0.03, 0.03}, 2.0);
  EXPECT_NEAR(r.f_lo, 0.835, 1e-12);
  EXPECT_NEAR(r.f_hi, 0.88, 1e-12);
  EXPECT_TRUE(excludes_ghz(r.f_lo));
  const std::vector<double> sig{0.0, 0.02, 0.03, 0.02, 0.02};
  const auto e = propagate_uncertainty(r, 0.07, sig);
  EXPECT_NEAR(e.sigma_hi, 0.03, 1e-12);
  EXPECT_NEAR(e.sigma_lo,
              std::sqrt(std::pow(0.07 / 4, 2) + std::pow(0.5 * 0.03, 2) +
                        2 * std::pow(1.25 * 0.02, 2) + std::pow(0.5 * 0.02, 2)),
              1e-12);
  const std::vector<double> bad{0.0, -0.02, 0.03, 0.02, 0.02};
  EXPECT_THROW(propagate_uncertainty(r, 0.07, bad), DomainError);
  EXPECT_THROW(propagate_uncertainty(r, -0.1, sig), DomainError);
}

TEST(Certification, GhzSitsOnTheExclusionEdge) {
  // Both bounds are tight on GHZ, so its lower bound lands on 3/4 itself.
  Vector ghz = Vector::Zero(16);
  ghz(0) = ghz(15) = std::sqrt(0.5);
  const auto r = certify_from_state(ghz, Axis::X);
  EXPECT_NEAR(true_fidelity(ghz * ghz.adjoint(), 4, Axis::X), 0.75, 1e-12);
  EXPECT_NEAR(r.f_lo, 0.75, 1e-12);
  EXPECT_NEAR(r.f_hi, 0.75, 1e-12);
  EXPECT_FALSE(excludes_ghz(0.75));
  EXPECT_TRUE(excludes_ghz(0.76));
}

TEST(Certification, RejectsBadInput) {
  const std::vector<double> five{0.2, 0.2, 0.2, 0.2, 0.2};
  EXPECT_THROW(fidelity_lower(5.0, five, 1.5), UnsupportedError);
  EXPECT_THROW(fidelity_lower(5.0, five, 0.0), DomainError);
  EXPECT_THROW(fidelity_lower(5.0, five, 3.0), DomainError);
  EXPECT_THROW(fidelity_upper(std::vector<double>{0.5, 0.5}), DomainError);
  EXPECT_THROW(certify_from_state(Vector::Ones(8).normalized().eval(), Axis::X),
               UnsupportedError);
  EXPECT_THROW(certify_from_state(Vector::Ones(6).normalized().eval(), Axis::X),
               ConfigurationError);
}

TEST(Certification, RandomStateGeneratorsAreNormalized) {
  std::mt19937_64 rng(4);
  EXPECT_NEAR(random_pure_state(16, rng).norm(), 1.0, 1e-12);
  const Matrix rho = random_mixed_state(16, 4, rng);
  EXPECT_NEAR(rho.trace().real(), 1.0, 1e-12);
  EXPECT_LT((rho - rho.adjoint()).cwiseAbs().maxCoeff(), 1e-14);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(rho);
  EXPECT_GT(eig.eigenvalues().minCoeff(), -1e-12);
  EXPECT_THROW(random_mixed_state(4, 0, rng), DomainError);
}
