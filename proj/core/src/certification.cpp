#include "dicke/certification.hpp"

#include <cmath>
#include <sstream>

#include "dicke/errors.hpp"
#include "dicke/spin_algebra.hpp"

namespace dicke {

namespace {

int checked_j_max(double j_max) {
  const double twice = 2.0 * j_max;
  if (!(j_max > 0.0) || std::abs(twice - std::round(twice)) > 1e-12) {
    throw DomainError("j_max must be a positive half-integer");
  }
  const int n = static_cast<int>(std::lround(twice));
  if (n % 2 != 0) {
    throw UnsupportedError("fidelity bounds need an even number of ions");
  }
  return n / 2;
}

void check_populations(std::span<const double> p) {
  if (p.size() % 2 == 0 || p.empty()) {
    throw DomainError("population list must have odd length 2 j_max + 1");
  }
  for (double v : p) {
    if (!std::isfinite(v) || v < -1e-12) {
      throw DomainError("populations must be finite and nonnegative");
    }
  }
}

double lower_weight(int jz, int jm) {
  if (jz == 0) {
    return 0.5 * (jm - 1);
  }
  return 0.5 * (jm + 1) - static_cast<double>(jz * jz) / (2.0 * jm);
}

} // namespace

double fidelity_upper(std::span<const double> populations) {
  check_populations(populations);
  return populations[populations.size() / 2];
}

double fidelity_lower(double witness, std::span<const double> populations,
                      double j_max) {
  const int jm = checked_j_max(j_max);
  check_populations(populations);
  if (populations.size() != static_cast<std::size_t>(2 * jm + 1)) {
    throw DomainError("population list length does not match j_max");
  }
  double bound = witness / (2.0 * jm);
  for (int jz = -jm; jz <= jm; ++jz) {
    bound -= lower_weight(jz, jm) * populations[static_cast<std::size_t>(jz + jm)];
  }
  return bound;
}

std::pair<double, double> fidelity_sandwich_4ion(double witness,
                                                 std::span<const double> p) {
  if (p.size() != 5) {
    throw DomainError("four-ion sandwich needs exactly five populations");
  }
  check_populations(p);
  const double lo =
      witness / 4.0 - ((p[0] + p[4] + p[2]) / 2.0 + 5.0 * (p[1] + p[3]) / 4.0);
  return {lo, p[2]};
}

CertificationRecord make_record(double witness, std::vector<double> populations,
                                double j_max, Axis axis) {
  CertificationRecord r;
  r.j_max = j_max;
  r.axis = axis;
  r.witness = witness;
  r.f_lo = fidelity_lower(witness, populations, j_max);
  r.f_hi = fidelity_upper(populations);
  r.populations = std::move(populations);
  return r;
}

Vector half_excited_target_full(int n_ions, Axis axis) {
  return symmetric_isometry(n_ions) * dicke_state(n_ions, n_ions / 2, axis);
}

CertificationRecord certify_from_state(const Matrix &rho_full, Axis axis) {
  const auto dim = rho_full.rows();
  if (rho_full.cols() != dim || dim < 4 || (dim & (dim - 1)) != 0) {
    throw ConfigurationError("state must live on a 2^N-dimensional qubit space");
  }
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) {
    ++n;
  }
  if (n % 2 != 0 || n > 8) {
    throw UnsupportedError("certification needs even N <= 8");
  }
  if (std::abs(rho_full.trace().real() - 1.0) > 1e-8) {
    throw ConfigurationError("density matrix must have unit trace");
  }

  Collective a = Collective::Jy;
  Collective b = Collective::Jz;
  if (axis == Axis::Y) {
    a = Collective::Jz;
    b = Collective::Jx;
  } else if (axis == Axis::Z) {
    a = Collective::Jx;
    b = Collective::Jy;
  }
  const Matrix ja = full_space_oracle(n, a).matrix;
  const Matrix jb = full_space_oracle(n, b).matrix;
  const double w = (rho_full * (ja * ja + jb * jb)).trace().real();

  // Rotate the z-basis projectors onto the measurement axis.
  const Matrix u = full_space_axis_rotation(n, axis);
  const Matrix rotated = u.adjoint() * rho_full * u;
  std::vector<double> p(static_cast<std::size_t>(n + 1), 0.0);
  for (Eigen::Index k = 0; k < dim; ++k) {
    p[popcount(static_cast<std::uint64_t>(k))] += rotated(k, k).real();
  }
  for (double &v : p) {
    v = std::max(v, 0.0);
  }
  return make_record(w, std::move(p), 0.5 * n, axis);
}

CertificationRecord certify_from_state(const Vector &state_full, Axis axis) {
  return certify_from_state(Matrix(state_full * state_full.adjoint()), axis);
}

BoundErrors propagate_uncertainty(const CertificationRecord &record,
                                  double sigma_witness,
                                  std::span<const double> sigma_populations) {
  if (sigma_populations.size() != record.populations.size()) {
    throw DomainError("need one standard error per population");
  }
  if (!(sigma_witness >= 0.0)) {
    throw DomainError("standard errors must be nonnegative");
  }
  for (double s : sigma_populations) {
    if (!(s >= 0.0)) {
      throw DomainError("standard errors must be nonnegative");
    }
  }
  const int jm = checked_j_max(record.j_max);
  double var_lo = std::pow(sigma_witness / (2.0 * jm), 2);
  for (int jz = -jm; jz <= jm; ++jz) {
    var_lo += std::pow(lower_weight(jz, jm) *
                           sigma_populations[static_cast<std::size_t>(jz + jm)],
                       2);
  }
  return {std::sqrt(var_lo), sigma_populations[static_cast<std::size_t>(jm)]};
}

Vector random_pure_state(int dim, std::mt19937_64 &rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(dim);
  for (int k = 0; k < dim; ++k) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(k) = cplx{re, im};
  }
  return v / v.norm();
}

Matrix random_mixed_state(int dim, int components, std::mt19937_64 &rng) {
  if (components < 1) {
    throw DomainError("mixture needs at least one component");
  }
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> w(static_cast<std::size_t>(components));
  double total = 0.0;
  for (double &x : w) {
    x = expo(rng);
    total += x;
  }
  Matrix rho = Matrix::Zero(dim, dim);
  for (double x : w) {
    const Vector v = random_pure_state(dim, rng);
    rho += (x / total) * (v * v.adjoint());
  }
  return rho;
}

} // namespace dicke
