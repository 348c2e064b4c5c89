#include "dicke/observables.hpp"

#include <cmath>
#include <sstream>

#include "dicke/errors.hpp"
#include "dicke/spin_algebra.hpp"

namespace dicke {

namespace {

int ions_from_dimension(Eigen::Index dim) {
  if (dim < 2) {
    throw ConfigurationError("symmetric-sector state needs dimension >= 2");
  }
  return static_cast<int>(dim) - 1;
}

Matrix as_density(const Vector &state) { return state * state.adjoint(); }

double expect(const Matrix &rho, const Matrix &op) {
  return (rho * op).trace().real();
}

Collective axis_operator(Axis a) {
  switch (a) {
  case Axis::X:
    return Collective::Jx;
  case Axis::Y:
    return Collective::Jy;
  case Axis::Z:
    return Collective::Jz;
  }
  throw DomainError("unknown axis");
}

} // namespace

void require_normalized(const Vector &state, double tol) {
  if (std::abs(state.squaredNorm() - 1.0) > tol) {
    std::ostringstream msg;
    msg << "state is not normalized (norm^2 = " << state.squaredNorm() << ")";
    throw ConfigurationError(msg.str());
  }
}

void require_normalized(const Matrix &rho, double tol) {
  if (rho.rows() != rho.cols()) {
    throw ConfigurationError("density matrix must be square");
  }
  const double tr = rho.trace().real();
  if (std::abs(tr - 1.0) > tol) {
    std::ostringstream msg;
    msg << "density matrix trace " << tr << " differs from 1";
    throw ConfigurationError(msg.str());
  }
}

SpinMoments spin_moments(const Matrix &rho) {
  require_normalized(rho);
  const int n = ions_from_dimension(rho.rows());
  const Matrix jx = build_collective(n, Collective::Jx).matrix();
  const Matrix jy = build_collective(n, Collective::Jy).matrix();
  const Matrix jz = build_collective(n, Collective::Jz).matrix();
  SpinMoments s;
  s.mean_jx = expect(rho, jx);
  s.mean_jy = expect(rho, jy);
  s.mean_jz = expect(rho, jz);
  s.var_jx = expect(rho, jx * jx) - s.mean_jx * s.mean_jx;
  s.var_jy = expect(rho, jy * jy) - s.mean_jy * s.mean_jy;
  s.var_jz = expect(rho, jz * jz) - s.mean_jz * s.mean_jz;
  return s;
}

SpinMoments spin_moments(const Vector &state) {
  require_normalized(state);
  return spin_moments(as_density(state));
}

double witness(const Matrix &rho, Axis a, Axis b) {
  if (a == b) {
    throw DomainError("witness needs two orthogonal axes");
  }
  require_normalized(rho);
  const int n = ions_from_dimension(rho.rows());
  const Matrix ja = build_collective(n, axis_operator(a)).matrix();
  const Matrix jb = build_collective(n, axis_operator(b)).matrix();
  return expect(rho, ja * ja + jb * jb);
}

double witness(const Vector &state, Axis a, Axis b) {
  return witness(as_density(state), a, b);
}

bool witness_detects_four_partite(int n_ions, Axis a, Axis b, double value) {
  const bool yz = (a == Axis::Y && b == Axis::Z) || (a == Axis::Z && b == Axis::Y);
  return n_ions == 4 && yz && value > kFourPartiteWitnessThreshold;
}

double parity_fidelity(double p_minus, double p_plus, double amplitude) {
  return 0.5 * (p_minus + p_plus + amplitude);
}

ParityScan fit_parity(std::span<const double> phases,
                      std::span<const double> parities) {
  if (phases.size() != parities.size()) {
    throw ConfigurationError("phase and parity lists differ in length");
  }
  if (phases.size() < 3) {
    throw ConfigurationError("parity fit needs at least three phases");
  }
  const auto rows = static_cast<Eigen::Index>(phases.size());
  RealMatrix design(rows, 3);
  RealVector y(rows);
  for (Eigen::Index k = 0; k < rows; ++k) {
    design(k, 0) = std::cos(2.0 * phases[k]);
    design(k, 1) = std::sin(2.0 * phases[k]);
    design(k, 2) = 1.0;
    y(k) = parities[k];
  }
  const RealVector coef = design.colPivHouseholderQr().solve(y);
  // a cos + b sin = A cos(2 phi + phi0) with A cos phi0 = a, A sin phi0 = -b
  ParityScan scan;
  scan.phases.assign(phases.begin(), phases.end());
  scan.parities.assign(parities.begin(), parities.end());
  scan.amplitude = std::hypot(coef(0), coef(1));
  scan.phase_offset = std::atan2(-coef(1), coef(0));
  scan.offset = coef(2);
  return scan;
}

ParityResult parity_scan(const Matrix &rho, std::span<const double> phases) {
  if (rho.rows() != 3 || rho.cols() != 3) {
    throw DomainError("parity scan is defined for two ions only");
  }
  require_normalized(rho);
  const Matrix iso = symmetric_isometry(2);
  const Matrix rho_full = iso * rho * iso.adjoint();
  const Matrix jx1 = build_collective(1, Collective::Jx).matrix();
  const Matrix jy1 = build_collective(1, Collective::Jy).matrix();

  std::vector<double> parities;
  parities.reserve(phases.size());
  for (double phi : phases) {
    const Eigen::Matrix2cd single =
        unitary_exp(std::cos(phi) * jx1 + std::sin(phi) * jy1, kPi / 2);
    const Matrix u = full_space_product(2, single);
    const Matrix rotated = u * rho_full * u.adjoint();
    double parity = 0.0;
    for (int k = 0; k < 4; ++k) {
      const int down = 2 - popcount(static_cast<std::uint64_t>(k));
      parity += (down % 2 == 0 ? 1.0 : -1.0) * rotated(k, k).real();
    }
    parities.push_back(parity);
  }
  ParityResult out;
  out.scan = fit_parity(phases, parities);
  out.p_minus = rho(0, 0).real();
  out.p_zero = rho(1, 1).real();
  out.p_plus = rho(2, 2).real();
  out.fidelity = parity_fidelity(out.p_minus, out.p_plus, out.scan.amplitude);
  return out;
}

ParityResult parity_scan(const Vector &state, std::span<const double> phases) {
  if (state.size() != 3) {
    throw DomainError("parity scan is defined for two ions only");
  }
  require_normalized(state);
  return parity_scan(as_density(state), phases);
}

std::vector<double> populations(const Matrix &rho, Axis axis) {
  require_normalized(rho);
  const int n = ions_from_dimension(rho.rows());
  // p_m = Tr(rho U P_m U^dagger) with P_m the z-basis projector.
  const Matrix u = axis_rotation(n, axis);
  const Matrix rotated = u.adjoint() * rho * u;
  std::vector<double> p(static_cast<std::size_t>(n + 1));
  for (int m = 0; m <= n; ++m) {
    p[m] = rotated(m, m).real();
  }
  return p;
}

std::vector<double> populations(const Vector &state, Axis axis) {
  return populations(as_density(state), axis);
}

std::vector<double> populations_equatorial(const Matrix &rho, double phi) {
  require_normalized(rho);
  const int n = ions_from_dimension(rho.rows());
  const Matrix u = equatorial_rotation(n, phi);
  const Matrix rotated = u.adjoint() * rho * u;
  std::vector<double> p(static_cast<std::size_t>(n + 1));
  for (int m = 0; m <= n; ++m) {
    p[m] = rotated(m, m).real();
  }
  return p;
}

PopulationsX populations_x(const Matrix &rho) {
  return {ions_from_dimension(rho.rows()), populations(rho, Axis::X)};
}

PopulationsX populations_x(const Vector &state) {
  return populations_x(as_density(state));
}

double direct_fidelity(const Vector &state, const Vector &target) {
  if (state.size() != target.size()) {
    throw ConfigurationError("fidelity: dimension mismatch");
  }
  return std::norm(target.dot(state));
}

double direct_fidelity(const Matrix &rho, const Vector &target) {
  if (rho.rows() != target.size() || rho.cols() != target.size()) {
    throw ConfigurationError("fidelity: dimension mismatch");
  }
  return target.dot(rho * target).real();
}

} // namespace dicke
