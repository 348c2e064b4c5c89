#include "dicke/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dicke/errors.hpp"

namespace dicke {

void SystemParams::validate() const {
  if (n_ions < 1) {
    throw ConfigurationError("n_ions must be positive");
  }
  auto check = [](double v, const char *name) {
    if (!std::isfinite(v) || v < 0.0) {
      throw ConfigurationError(std::string(name) +
                               " must be finite and nonnegative");
    }
  };
  check(eta, "eta");
  check(omega_r, "omega_r");
  check(omega_b, "omega_b");
  check(delta, "delta");
  check(coupling_scale, "coupling_scale");
  if (n_max < 0) {
    throw ConfigurationError("n_max must be nonnegative");
  }
}

bool SystemParams::reduced_model_valid() const {
  return 2.0 * delta > 10.0 * eta * std::max(omega_r, omega_b);
}

ReducedHamiltonian::ReducedHamiltonian(DickeBasis basis, RealMatrix matrix)
    : basis_(basis), matrix_(std::move(matrix)) {
  if (matrix_.rows() != basis_.dimension() ||
      matrix_.cols() != basis_.dimension()) {
    throw ConfigurationError("reduced Hamiltonian dimension mismatch");
  }
}

ReducedHamiltonian reduced_hamiltonian(const SystemParams &params) {
  params.validate();
  const int n = params.n_ions;
  DickeBasis basis(n);
  RealMatrix h = RealMatrix::Zero(n + 1, n + 1);
  for (int k = 0; k <= n; ++k) {
    if (ReducedHamiltonian::phonon_of(k) == 1) {
      h(k, k) = params.delta;
    }
  }
  for (int k = 0; k < n; ++k) {
    const double omega = (k % 2 == 0) ? params.omega_b : params.omega_r;
    const double c = coupling_R(n, k) * params.eta * omega;
    h(k, k + 1) = c;
    h(k + 1, k) = c;
  }
  return {basis, h};
}

Matrix full_hamiltonian_at(double t, const SystemParams &params) {
  params.validate();
  const int n = params.n_ions;
  const int nmax = params.n_max;
  if (nmax < SystemParams::minimum_n_max(n)) {
    throw ConfigurationError(
        "n_max=" + std::to_string(nmax) + " below required N/2 + 2 = " +
        std::to_string(SystemParams::minimum_n_max(n)));
  }
  const int dim = (n + 1) * (nmax + 1);
  Matrix h = Matrix::Zero(dim, dim);
  const cplx red_phase = std::polar(1.0, -params.delta * t);
  const cplx blue_phase = std::conj(red_phase);
  const double red = 0.5 * params.coupling_scale * params.eta * params.omega_r;
  const double blue = 0.5 * params.coupling_scale * params.eta * params.omega_b;
  for (int m = 0; m < n; ++m) {
    const double r = coupling_R(n, m);
    for (int ph = 0; ph <= nmax; ++ph) {
      // a J+ : |m, ph> -> |m+1, ph-1>
      if (ph >= 1) {
        const int from = product_index(m, ph, nmax);
        const int to = product_index(m + 1, ph - 1, nmax);
        const cplx v = red * r * std::sqrt(double(ph)) * red_phase;
        h(to, from) += v;
        h(from, to) += std::conj(v);
      }
      // a+ J+ : |m, ph> -> |m+1, ph+1>
      if (ph + 1 <= nmax) {
        const int from = product_index(m, ph, nmax);
        const int to = product_index(m + 1, ph + 1, nmax);
        const cplx v = blue * r * std::sqrt(double(ph + 1)) * blue_phase;
        h(to, from) += v;
        h(from, to) += std::conj(v);
      }
    }
  }
  return h;
}

FullHamiltonian::FullHamiltonian(SystemParams params)
    : params_(std::move(params)) {
  params_.validate();
  if (params_.n_max < SystemParams::minimum_n_max(params_.n_ions)) {
    throw ConfigurationError("n_max below required N/2 + 2");
  }
}

Vector embed_reduced(const Vector &chain_state, int n_ions, int n_max) {
  if (chain_state.size() != n_ions + 1) {
    throw ConfigurationError("chain state has wrong dimension");
  }
  Vector out = Vector::Zero((n_ions + 1) * (n_max + 1));
  for (int k = 0; k <= n_ions; ++k) {
    out(product_index(k, ReducedHamiltonian::phonon_of(k), n_max)) =
        chain_state(k);
  }
  return out;
}

Vector to_rotating_frame(const Vector &full_state, double t,
                         const SystemParams &params) {
  const int nmax = params.n_max;
  if (full_state.size() != (params.n_ions + 1) * (nmax + 1)) {
    throw ConfigurationError("product-space state has wrong dimension");
  }
  Vector out = full_state;
  for (int m = 0; m <= params.n_ions; ++m) {
    for (int ph = 1; ph <= nmax; ++ph) {
      out(product_index(m, ph, nmax)) *= std::polar(1.0, -params.delta * ph * t);
    }
  }
  return out;
}

} // namespace dicke
