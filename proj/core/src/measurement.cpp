#include "dicke/measurement.hpp"

#include <algorithm>
#include <numeric>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "dicke/errors.hpp"
#include "dicke/observables.hpp"

namespace dicke {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

ShotRng::ShotRng(std::uint64_t seed, std::uint64_t stream)
    : engine_(splitmix64(seed + stream * 0x9E3779B97F4A7C15ULL)) {}

std::pair<double, double> MeasurementRecord::moment(int power) const {
  double mean = 0.0;
  double second = 0.0;
  for (std::size_t k = 0; k < probabilities.size(); ++k) {
    const double f = std::pow(eigenvalues[k], power);
    mean += f * probabilities[k];
    second += f * f * probabilities[k];
  }
  if (exact || n_shots == 0) {
    return {mean, 0.0};
  }
  const double var = std::max(0.0, second - mean * mean);
  return {mean, std::sqrt(var / static_cast<double>(n_shots))};
}

MeasurementRecord sample_distribution(std::span<const double> probabilities,
                                      const ShotConfig &config) {
  if (!config.exact && config.n_shots == 0) {
    throw DomainError("number of shots must be positive");
  }
  if (probabilities.empty()) {
    throw DomainError("empty probability vector");
  }
  std::vector<double> p(probabilities.begin(), probabilities.end());
  double total = 0.0;
  for (double &v : p) {
    if (!std::isfinite(v) || v < -1e-9) {
      throw DomainError("probabilities must be finite and nonnegative");
    }
    v = std::max(v, 0.0);
    total += v;
  }
  if (!(total > 0.0)) {
    throw DomainError("probabilities sum to zero");
  }
  for (double &v : p) {
    v /= total;
  }

  MeasurementRecord rec;
  rec.n_shots = config.exact ? 0 : config.n_shots;
  rec.seed = config.seed;
  rec.stream = config.stream;
  rec.exact = config.exact;
  if (config.exact) {
    rec.probabilities = p;
    rec.std_errors.assign(p.size(), 0.0);
    return rec;
  }

  std::vector<double> cdf(p.size());
  std::partial_sum(p.begin(), p.end(), cdf.begin());
  cdf.back() = 1.0;
  rec.counts.assign(p.size(), 0);
  ShotRng rng(config.seed, config.stream);
  for (std::uint64_t s = 0; s < config.n_shots; ++s) {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const auto idx = static_cast<std::size_t>(
        std::min<std::ptrdiff_t>(it - cdf.begin(),
                                 static_cast<std::ptrdiff_t>(p.size()) - 1));
    ++rec.counts[idx];
  }
  const auto n = static_cast<double>(config.n_shots);
  rec.probabilities.resize(p.size());
  rec.std_errors.resize(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double q = static_cast<double>(rec.counts[k]) / n;
    rec.probabilities[k] = q;
    rec.std_errors[k] = std::sqrt(q * (1.0 - q) / n);
  }
  return rec;
}

std::string to_csv(const MeasurementRecord &record) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "# generator: " << kShotGenerator << "\n";
  out << "# seed: " << record.seed << "\n";
  out << "# stream: " << record.stream << "\n";
  out << "# n_shots: " << (record.exact ? std::string("exact")
                                         : std::to_string(record.n_shots))
      << "\n";
  out << "# basis: " << record.basis << "\n";
  out << "eigenvalue,count,probability,std_error\n";
  for (std::size_t k = 0; k < record.probabilities.size(); ++k) {
    out << (k < record.eigenvalues.size() ? record.eigenvalues[k] : double(k)) << ','
        << (record.counts.empty() ? 0 : record.counts[k]) << ','
        << record.probabilities[k] << ',' << record.std_errors[k] << '\n';
  }
  return out.str();
}

namespace {

MeasurementRecord label(MeasurementRecord rec, std::string basis, int n_ions) {
  rec.basis = std::move(basis);
  rec.eigenvalues.resize(static_cast<std::size_t>(n_ions + 1));
  for (int m = 0; m <= n_ions; ++m) {
    rec.eigenvalues[m] = m - 0.5 * n_ions;
  }
  return rec;
}

} // namespace

MeasurementRecord sample_populations(const Matrix &rho, const ShotConfig &config,
                                     Axis axis) {
  const auto p = populations(rho, axis);
  return label(sample_distribution(p, config), std::string(1, axis_name(axis)),
               static_cast<int>(rho.rows()) - 1);
}

MeasurementRecord sample_populations(const Vector &state, const ShotConfig &config,
                                     Axis axis) {
  require_normalized(state);
  return sample_populations(Matrix(state * state.adjoint()), config, axis);
}

MeasurementRecord sample_equatorial(const Matrix &rho, const ShotConfig &config,
                                    double phi) {
  const auto p = populations_equatorial(rho, phi);
  std::ostringstream name;
  name << "phi=" << phi;
  return label(sample_distribution(p, config), name.str(),
               static_cast<int>(rho.rows()) - 1);
}

SimulatedExperiment simulated_experiment(const Matrix &rho, const ShotConfig &config,
                                         std::span<const double> phase_grid) {
  require_normalized(rho);
  const int n = static_cast<int>(rho.rows()) - 1;
  if (n < 2 || n % 2 != 0) {
    throw UnsupportedError("simulated experiment needs an even number of ions");
  }
  ShotConfig cfg = config;
  auto on_stream = [&cfg, &config](std::uint64_t s) {
    cfg.stream = config.stream * 1024 + s;
    return cfg;
  };

  SimulatedExperiment out;
  const auto z = sample_populations(rho, on_stream(0), Axis::Z);
  const auto x = sample_populations(rho, on_stream(1), Axis::X);
  const auto y = sample_equatorial(rho, on_stream(2), kPi / 2);
  const auto [jz2, sz] = z.moment(2);
  const auto [jy2, sy] = y.moment(2);
  out.jz2 = jz2;
  out.jy2 = jy2;
  out.jy2_grid_max = jy2;
  for (std::size_t k = 0; k < phase_grid.size(); ++k) {
    const auto r = sample_equatorial(rho, on_stream(3 + k), phase_grid[k]);
    const double v = r.moment(2).first;
    out.grid_phases.push_back(phase_grid[k]);
    out.grid_jphi2.push_back(v);
    out.jy2_grid_max = std::max(out.jy2_grid_max, v);
  }
  out.sigma_witness = std::hypot(sz, sy);
  out.sigma_populations = x.std_errors;
  out.record = make_record(jy2 + jz2, x.probabilities, 0.5 * n, Axis::X);
  out.errors = propagate_uncertainty(out.record, out.sigma_witness,
                                     out.sigma_populations);
  return out;
}

SimulatedExperiment simulated_experiment(const Vector &state, const ShotConfig &config,
                                         std::span<const double> phase_grid) {
  require_normalized(state);
  return simulated_experiment(Matrix(state * state.adjoint()), config, phase_grid);
}

} // namespace dicke
