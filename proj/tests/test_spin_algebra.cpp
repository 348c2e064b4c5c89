#include <gtest/gtest.h>

#include <random>

#include "dicke/errors.hpp"
#include "dicke/spin_algebra.hpp"
#include "oracles.hpp"

using namespace dicke;

namespace {

Matrix op(int n, Collective c) { return build_collective(n, c).matrix(); }

double max_abs(const Matrix &m) { return m.cwiseAbs().maxCoeff(); }

} // namespace

TEST(SpinAlgebra, CouplingMatchesProjectedQubitOperator) {
  for (int n = 1; n <= 8; ++n) {
    const auto jp = oracle::sector_jplus(n);
    for (int m = 0; m < n; ++m) {
      EXPECT_NEAR(coupling_R(n, m), jp(m + 1, m).real(), 1e-12) << "N=" << n << " m=" << m;
    }
  }
}

TEST(SpinAlgebra, CouplingClosedForm) {
  EXPECT_DOUBLE_EQ(coupling_R(4, 0), 2.0);
  EXPECT_DOUBLE_EQ(coupling_R(4, 1), std::sqrt(6.0));
  EXPECT_DOUBLE_EQ(coupling_R(2, 0), std::sqrt(2.0));
  EXPECT_THROW(coupling_R(4, 4), DomainError);
  EXPECT_THROW(coupling_R(4, -1), DomainError);
}

TEST(SpinAlgebra, CommutationRelations) {
  const cplx i{0.0, 1.0};
  for (int n = 1; n <= 8; ++n) {
    const Matrix x = op(n, Collective::Jx);
    const Matrix y = op(n, Collective::Jy);
    const Matrix z = op(n, Collective::Jz);
    EXPECT_LT(max_abs(x * y - y * x - i * z), 1e-12);
    EXPECT_LT(max_abs(y * z - z * y - i * x), 1e-12);
    EXPECT_LT(max_abs(z * x - x * z - i * y), 1e-12);
  }
}

TEST(SpinAlgebra, RaisingAdjointIsLowering) {
  for (int n = 1; n <= 8; ++n) {
    EXPECT_EQ(op(n, Collective::JPlus).adjoint(), op(n, Collective::JMinus));
  }
}

TEST(SpinAlgebra, CasimirOnSymmetricSector) {
  for (int n = 1; n <= 8; ++n) {
    const double j = 0.5 * n;
    const Matrix expected = j * (j + 1) * Matrix::Identity(n + 1, n + 1);
    EXPECT_LT(max_abs(op(n, Collective::JSquared) - expected), 1e-12);
  }
}

TEST(SpinAlgebra, HermiticityFlags) {
  EXPECT_TRUE(build_collective(3, Collective::Jx).hermitian());
  EXPECT_FALSE(build_collective(3, Collective::JPlus).hermitian());
}

TEST(SpinAlgebra, RotationMatchesTaylorExponential) {
  const cplx mi{0.0, -1.0};
  for (int n : {1, 2, 4, 6}) {
    for (double a : {0.3, kPi / 2, 2.0}) {
      const Matrix ref = oracle::expm(mi * a * op(n, Collective::Jy));
      EXPECT_LT(max_abs(rotation_y(n, a).matrix() - ref), 1e-11);
    }
  }
}

TEST(SpinAlgebra, RotationUnitaryAndComposes) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> angle(-4.0, 4.0);
  for (int n = 1; n <= 8; ++n) {
    for (int trial = 0; trial < 5; ++trial) {
      const double a = angle(rng);
      const double b = angle(rng);
      const Matrix ra = rotation_y(n, a).matrix();
      const Matrix rb = rotation_y(n, b).matrix();
      EXPECT_LT(max_abs(ra * ra.adjoint() - Matrix::Identity(n + 1, n + 1)), 1e-10);
      EXPECT_LT(max_abs(ra * rb - rotation_y(n, a + b).matrix()), 1e-10);
    }
  }
  EXPECT_THROW(rotation_y(2, std::nan("")), DomainError);
}

TEST(SpinAlgebra, AxisRotationMapsJzOntoAxis) {
  for (int n = 1; n <= 6; ++n) {
    const Matrix z = op(n, Collective::Jz);
    const std::pair<Axis, Collective> cases[] = {
        {Axis::X, Collective::Jx}, {Axis::Y, Collective::Jy}, {Axis::Z, Collective::Jz}};
    for (const auto &[axis, target] : cases) {
      const Matrix u = axis_rotation(n, axis);
      EXPECT_LT(max_abs(u * z * u.adjoint() - op(n, target)), 1e-12);
    }
    for (double phi : {0.0, 0.4, 1.9}) {
      const Matrix u = equatorial_rotation(n, phi);
      const Matrix jphi = std::cos(phi) * op(n, Collective::Jx) +
                          std::sin(phi) * op(n, Collective::Jy);
      EXPECT_LT(max_abs(u * z * u.adjoint() - jphi), 1e-12);
    }
  }
}

TEST(SpinAlgebra, DickeStatesAreAxisEigenstates) {
  for (int n : {2, 4, 5}) {
    for (int m = 0; m <= n; ++m) {
      for (auto [axis, c] : {std::pair{Axis::X, Collective::Jx}, std::pair{Axis::Y, Collective::Jy}}) {
        const Vector v = dicke_state(n, m, axis);
        EXPECT_NEAR(v.norm(), 1.0, 1e-12);
        EXPECT_LT((op(n, c) * v - (m - 0.5 * n) * v).norm(), 1e-12);
      }
    }
  }
  EXPECT_THROW(dicke_state(4, 5), DomainError);
}

TEST(SpinAlgebra, FullSpaceOracleAgreesWithIndependentBuild) {
  for (int n = 1; n <= 6; ++n) {
    EXPECT_LT(max_abs(full_space_oracle(n, Collective::JPlus).matrix - oracle::qubit_jplus(n)),
              1e-14);
    EXPECT_LT(max_abs(full_space_oracle(n, Collective::Jz).matrix - oracle::qubit_jz(n)), 1e-14);
    EXPECT_LT(max_abs(symmetric_isometry(n) - oracle::dicke_columns(n)), 1e-14);
  }
  EXPECT_THROW(full_space_oracle(11, Collective::Jz), ResourceError);
}

TEST(SpinAlgebra, SectorOperatorsAreIsometryProjections) {
  for (int n = 1; n <= 6; ++n) {
    const Matrix v = symmetric_isometry(n);
    for (auto c : {Collective::Jx, Collective::Jy, Collective::Jz, Collective::JSquared}) {
      const Matrix full = full_space_oracle(n, c).matrix;
      EXPECT_LT(max_abs(v.adjoint() * full * v - op(n, c)), 1e-12);
      // The symmetric sector is invariant under collective operators.
      EXPECT_LT(max_abs(full * v - v * op(n, c)), 1e-12);
    }
  }
}

TEST(SpinAlgebra, FullSpaceAxisRotationIntertwinesIsometry) {
  for (int n = 1; n <= 5; ++n) {
    const Matrix v = symmetric_isometry(n);
    for (Axis axis : {Axis::X, Axis::Y, Axis::Z}) {
      EXPECT_LT(max_abs(full_space_axis_rotation(n, axis) * v - v * axis_rotation(n, axis)),
                1e-12);
    }
  }
}

TEST(SpinAlgebra, DickeStatesPermutationInvariant) {
  // Swapping two qubits permutes computational indices; symmetric states
  // must be unchanged.
  const int n = 4;
  const Matrix v = symmetric_isometry(n);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      Matrix p = Matrix::Zero(1 << n, 1 << n);
      for (int s = 0; s < (1 << n); ++s) {
        const int ba = (s >> a) & 1;
        const int bb = (s >> b) & 1;
        int t = s & ~((1 << a) | (1 << b));
        t |= (ba << b) | (bb << a);
        p(t, s) = 1.0;
      }
      EXPECT_LT(max_abs(p * v - v), 1e-15);
    }
  }
}

TEST(SpinAlgebra, Popcount) {
  EXPECT_EQ(popcount(0), 0);
  EXPECT_EQ(popcount(0b1011), 3);
  EXPECT_EQ(popcount(~std::uint64_t{0}), 64);
}
