#include "dicke/spin_algebra.hpp"

#include <cmath>
#include <string>

#include "dicke/errors.hpp"

namespace dicke {

namespace {

void require_ions(int n_ions) {
  if (n_ions < 1) {
    throw DomainError("number of ions must be positive, got " +
                      std::to_string(n_ions));
  }
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
  }
  return r;
}

Matrix raising(int n_ions) {
  const int dim = n_ions + 1;
  Matrix jp = Matrix::Zero(dim, dim);
  for (int m = 0; m < n_ions; ++m) {
    jp(m + 1, m) = coupling_R(n_ions, m);
  }
  return jp;
}

} // namespace

DickeBasis::DickeBasis(int n_ions) : n_ions_(n_ions) { require_ions(n_ions); }

double DickeBasis::jz_eigenvalue(int m) const {
  if (m < 0 || m > n_ions_) {
    throw DomainError("Dicke index out of range");
  }
  return m - 0.5 * n_ions_;
}

CollectiveOperator::CollectiveOperator(DickeBasis basis, Matrix matrix,
                                       bool hermitian)
    : basis_(basis), matrix_(std::move(matrix)), hermitian_(hermitian) {
  if (matrix_.rows() != basis_.dimension() ||
      matrix_.cols() != basis_.dimension()) {
    throw ConfigurationError("operator dimension does not match Dicke basis");
  }
}

double coupling_R(int n_ions, int m) {
  require_ions(n_ions);
  if (m < 0 || m > n_ions - 1) {
    throw DomainError("coupling_R: m=" + std::to_string(m) +
                      " outside [0, N-1] for N=" + std::to_string(n_ions));
  }
  // C(N,m)/C(N,m+1) = (m+1)/(N-m)
  return std::sqrt(static_cast<double>(n_ions - m) * (m + 1));
}

CollectiveOperator build_collective(int n_ions, Collective which) {
  DickeBasis basis(n_ions);
  const Matrix jp = raising(n_ions);
  const cplx i{0.0, 1.0};
  switch (which) {
  case Collective::JPlus:
    return {basis, jp, false};
  case Collective::JMinus:
    return {basis, jp.adjoint(), false};
  case Collective::Jx:
    return {basis, 0.5 * (jp + jp.adjoint()), true};
  case Collective::Jy:
    return {basis, (jp - jp.adjoint()) / (2.0 * i), true};
  case Collective::Jz: {
    Matrix jz = Matrix::Zero(basis.dimension(), basis.dimension());
    for (int m = 0; m <= n_ions; ++m) {
      jz(m, m) = basis.jz_eigenvalue(m);
    }
    return {basis, jz, true};
  }
  case Collective::JSquared: {
    const Matrix jx = 0.5 * (jp + jp.adjoint());
    const Matrix jy = (jp - jp.adjoint()) / (2.0 * i);
    const Matrix jz = build_collective(n_ions, Collective::Jz).matrix();
    Matrix j2 = jx * jx + jy * jy + jz * jz;
    j2 = 0.5 * (j2 + j2.adjoint()).eval();
    return {basis, j2, true};
  }
  }
  throw DomainError("unknown collective operator");
}

Matrix unitary_exp(const Matrix &hermitian_generator, double angle) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(hermitian_generator);
  const Vector phases =
      (eig.eigenvalues().cast<cplx>() * cplx{0.0, -angle}).array().exp();
  return eig.eigenvectors() * phases.asDiagonal() *
         eig.eigenvectors().adjoint();
}

CollectiveOperator rotation_y(int n_ions, double angle) {
  if (!std::isfinite(angle)) {
    throw DomainError("rotation angle must be finite");
  }
  const auto jy = build_collective(n_ions, Collective::Jy);
  return {jy.basis(), unitary_exp(jy.matrix(), angle), false};
}

Matrix axis_rotation(int n_ions, Axis axis) {
  switch (axis) {
  case Axis::X:
    return rotation_y(n_ions, kPi / 2).matrix();
  case Axis::Y:
    return unitary_exp(build_collective(n_ions, Collective::Jx).matrix(),
                       -kPi / 2);
  case Axis::Z:
    return Matrix::Identity(n_ions + 1, n_ions + 1);
  }
  throw DomainError("unknown axis");
}

Matrix equatorial_rotation(int n_ions, double phi) {
  // Rotate z onto (cos phi, sin phi, 0) about (-sin phi, cos phi, 0).
  const Matrix gen =
      -std::sin(phi) * build_collective(n_ions, Collective::Jx).matrix() +
      std::cos(phi) * build_collective(n_ions, Collective::Jy).matrix();
  return unitary_exp(gen, kPi / 2);
}

Vector dicke_state(int n_ions, int m) {
  DickeBasis basis(n_ions);
  basis.jz_eigenvalue(m);
  Vector v = Vector::Zero(basis.dimension());
  v(m) = 1.0;
  return v;
}

Vector dicke_state(int n_ions, int m, Axis axis) {
  return axis_rotation(n_ions, axis) * dicke_state(n_ions, m);
}

int popcount(std::uint64_t index) {
  int c = 0;
  while (index != 0U) {
    c += static_cast<int>(index & 1U);
    index >>= 1U;
  }
  return c;
}

FullSpaceOperator full_space_oracle(int n_ions, Collective which) {
  require_ions(n_ions);
  if (n_ions > kMaxFullSpaceIons) {
    throw ResourceError("full-space oracle limited to N <= " +
                        std::to_string(kMaxFullSpaceIons) + " ions");
  }
  const std::int64_t dim = std::int64_t{1} << n_ions;
  Matrix jp = Matrix::Zero(dim, dim);
  Matrix jz = Matrix::Zero(dim, dim);
  for (std::int64_t k = 0; k < dim; ++k) {
    for (int site = 0; site < n_ions; ++site) {
      const std::int64_t bit = std::int64_t{1} << site;
      if ((k & bit) == 0) {
        jp(k | bit, k) += 1.0;
        jz(k, k) -= 0.5;
      } else {
        jz(k, k) += 0.5;
      }
    }
  }
  const cplx i{0.0, 1.0};
  switch (which) {
  case Collective::JPlus:
    return {n_ions, jp};
  case Collective::JMinus:
    return {n_ions, jp.adjoint()};
  case Collective::Jx:
    return {n_ions, 0.5 * (jp + jp.adjoint())};
  case Collective::Jy:
    return {n_ions, (jp - jp.adjoint()) / (2.0 * i)};
  case Collective::Jz:
    return {n_ions, jz};
  case Collective::JSquared: {
    const Matrix jx = 0.5 * (jp + jp.adjoint());
    const Matrix jy = (jp - jp.adjoint()) / (2.0 * i);
    return {n_ions, jx * jx + jy * jy + jz * jz};
  }
  }
  throw DomainError("unknown collective operator");
}

Matrix symmetric_isometry(int n_ions) {
  require_ions(n_ions);
  if (n_ions > kMaxFullSpaceIons) {
    throw ResourceError("full-space isometry limited to N <= " +
                        std::to_string(kMaxFullSpaceIons) + " ions");
  }
  const std::int64_t dim = std::int64_t{1} << n_ions;
  Matrix iso = Matrix::Zero(dim, n_ions + 1);
  for (std::int64_t k = 0; k < dim; ++k) {
    const int m = popcount(static_cast<std::uint64_t>(k));
    iso(k, m) = 1.0 / std::sqrt(binomial(n_ions, m));
  }
  return iso;
}

Matrix full_space_product(int n_ions, const Eigen::Matrix2cd &single) {
  require_ions(n_ions);
  if (n_ions > kMaxFullSpaceIons) {
    throw ResourceError("full-space product limited to N <= " +
                        std::to_string(kMaxFullSpaceIons) + " ions");
  }
  const std::int64_t dim = std::int64_t{1} << n_ions;
  Matrix u(dim, dim);
  for (std::int64_t r = 0; r < dim; ++r) {
    for (std::int64_t c = 0; c < dim; ++c) {
      cplx v{1.0, 0.0};
      for (int site = 0; site < n_ions; ++site) {
        v *= single((r >> site) & 1, (c >> site) & 1);
      }
      u(r, c) = v;
    }
  }
  return u;
}

Matrix full_space_axis_rotation(int n_ions, Axis axis) {
  // The N=1 symmetric basis (down, up) coincides with the single-qubit basis.
  const Eigen::Matrix2cd single = axis_rotation(1, axis);
  return full_space_product(n_ions, single);
}

} // namespace dicke
