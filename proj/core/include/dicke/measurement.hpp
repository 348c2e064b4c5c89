#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "dicke/certification.hpp"
#include "dicke/types.hpp"

namespace dicke {

/// Shots are drawn from std::mt19937_64 (algorithm and seeding fixed by the
/// C++ standard) seeded with splitmix64(seed + stream * 0x9E3779B97F4A7C15).
/// Uniforms use the top 53 bits: (x >> 11) * 2^-53. Each shot picks the
/// first outcome whose cumulative probability exceeds the uniform.
inline constexpr const char *kShotGenerator = "mt19937_64+splitmix64";

struct ShotConfig {
  std::uint64_t n_shots = 1000;
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;
  // Bypass sampling and report exact probabilities.
  bool exact = false;
};

/// Paper-scale preset: about 0.02-0.03 binomial error on the populations.
inline constexpr std::uint64_t kPaperScaleShots = 150;

class ShotRng {
public:
  ShotRng(std::uint64_t seed, std::uint64_t stream);
  std::uint64_t next() { return engine_(); }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

struct MeasurementRecord {
  std::string basis; // "x", "y", "z" or "phi=<value>"
  std::uint64_t n_shots = 0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  bool exact = false;
  std::vector<double> eigenvalues;   // J_axis eigenvalues m - N/2
  std::vector<std::uint64_t> counts; // empty in exact mode
  std::vector<double> probabilities;
  std::vector<double> std_errors;    // sqrt(p (1 - p) / n)

  /// Mean of f(eigenvalue) and its standard error.
  std::pair<double, double> moment(int power) const;
};

/// Multinomial draw from a probability vector. Throws DomainError on zero
/// shots unless config.exact is set.
MeasurementRecord sample_distribution(std::span<const double> probabilities,
                                      const ShotConfig &config);

MeasurementRecord sample_populations(const Vector &state, const ShotConfig &config,
                                     Axis axis);
MeasurementRecord sample_populations(const Matrix &rho, const ShotConfig &config,
                                     Axis axis);
/// Readout of J_phi = cos(phi) J_x + sin(phi) J_y.
MeasurementRecord sample_equatorial(const Matrix &rho, const ShotConfig &config,
                                    double phi);

/// CSV with a '#' header naming the generator, seed, stream and shot count.
/// Columns: eigenvalue,count,probability,std_error.
std::string to_csv(const MeasurementRecord &record);

struct SimulatedExperiment {
  CertificationRecord record;
  BoundErrors errors;
  double sigma_witness = 0.0;
  std::vector<double> sigma_populations;
  double jz2 = 0.0;
  double jy2 = 0.0;          // <J_phi^2> at phi = pi/2, used for W
  double jy2_grid_max = 0.0; // maximum over the phase grid
  std::vector<double> grid_phases;
  std::vector<double> grid_jphi2;
};

/// Emulated certification run on a symmetric-sector spin state (even N):
/// z readout gives <J_z^2>, equatorial readouts give <J_phi^2>, x readout
/// gives P. Each setting uses config.n_shots on its own stream.
SimulatedExperiment simulated_experiment(const Matrix &rho, const ShotConfig &config,
                                         std::span<const double> phase_grid);
SimulatedExperiment simulated_experiment(const Vector &state, const ShotConfig &config,
                                         std::span<const double> phase_grid);

} // namespace dicke
