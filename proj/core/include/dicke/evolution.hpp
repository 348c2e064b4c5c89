#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dicke/model.hpp"
#include "dicke/types.hpp"

namespace dicke {

/// Sideband envelopes parameterized by a mixing angle theta(t):
///   eta Omega_b(t) = Omega_bar (1 - cos theta),
///   eta Omega_r(t) = Omega_bar (1 + cos theta).
/// theta(0) = 0 starts on the pure red sideband (|D^0>|0> is dark) and
/// theta(T) = pi ends on the pure blue sideband.
class PulseSchedule {
public:
  using ThetaFn = std::function<double(double)>;

  PulseSchedule(double total_time, double omega_bar, ThetaFn theta,
                std::string name);

  /// theta = pi t / T.
  static PulseSchedule linear(double total_time, double omega_bar);
  /// theta = pi (3s^2 - 2s^3), s = t / T.
  static PulseSchedule smoothstep(double total_time, double omega_bar);
  /// Constant theta; theta = 0 keeps the blue sideband off.
  static PulseSchedule frozen(double total_time, double omega_bar, double theta);

  /// theta -> pi - theta (swaps the roles of the red and blue sidebands).
  PulseSchedule reversed() const;
  /// Same envelopes, stopped after tau_c.
  PulseSchedule truncated(double tau_c) const;

  double total_time() const noexcept { return total_time_; }
  double omega_bar() const noexcept { return omega_bar_; }
  const std::string &name() const noexcept { return name_; }
  std::optional<double> truncation_time() const noexcept { return truncation_; }
  /// Integration end: truncation time if set, otherwise T.
  double end_time() const noexcept { return truncation_.value_or(total_time_); }

  double theta(double t) const;
  double coupling_red(double t) const;  // eta Omega_r(t)
  double coupling_blue(double t) const; // eta Omega_b(t)

  /// eta Omega_bar T.
  double adiabaticity() const noexcept { return omega_bar_ * total_time_; }
  bool adiabaticity_warning() const noexcept { return adiabaticity() < 5.0; }
  bool has_transfer_endpoints(double tol = 1e-12) const;

private:
  double total_time_;
  double omega_bar_;
  ThetaFn theta_;
  std::string name_;
  std::optional<double> truncation_;
};

/// Instantaneous SystemParams with omega_r/omega_b taken from the schedule.
SystemParams params_at(const PulseSchedule &schedule, const SystemParams &base,
                       double t);

enum class ModelTag { Reduced, Full };

const char *model_name(ModelTag tag);

struct Trajectory {
  ModelTag model = ModelTag::Reduced;
  int n_ions = 0;
  int n_max = 0; // unused for the reduced model
  std::vector<double> times;
  std::vector<Vector> states;
  double max_norm_drift = 0.0;
  // Largest population found in phonon levels >= n_max - 1 (full model).
  double max_leakage = 0.0;
  bool truncation_warning = false;

  const Vector &final_state() const { return states.back(); }
};

struct IntegrationOptions {
  int record_stride = 1;      // keep every k-th step
  double max_norm_drift = 1e-6;
  double leakage_warning = 1e-3;
};

/// Step size used when none is given: 0.02 / (delta + N Omega_bar).
double default_time_step(const PulseSchedule &schedule,
                         const SystemParams &params);

/// Fixed-step RK4 on the reduced chain starting from |D^0>|0>.
/// Requires dt (delta + N Omega_bar) <= 0.1.
Trajectory integrate_reduced(const PulseSchedule &schedule,
                             const SystemParams &params, double dt,
                             const IntegrationOptions &options = {});

/// Fixed-step RK4 on the spin (x) Fock space in the interaction picture.
/// Additionally requires dt delta <= 0.05 and n_max >= N/2 + 2.
Trajectory integrate_full(const PulseSchedule &schedule,
                          const SystemParams &params, double dt,
                          const IntegrationOptions &options = {});

Trajectory integrate(ModelTag model, const PulseSchedule &schedule,
                     const SystemParams &params, double dt,
                     const IntegrationOptions &options = {});

struct ScanPoint {
  double cut_time;
  Vector state;
};

/// States at each cut time from one integration pass. Results follow the
/// order of cut_times.
std::vector<ScanPoint> truncated_scan(ModelTag model,
                                      const PulseSchedule &schedule,
                                      const SystemParams &params,
                                      const std::vector<double> &cut_times,
                                      double dt);

/// Spin-sector density matrix of a trajectory state (phonon traced out).
Matrix spin_marginal(const Trajectory &traj, std::size_t sample);
Matrix spin_marginal(ModelTag model, const Vector &state, int n_ions, int n_max);

/// Named settings. Times are in units of 1/(eta Omega_bar) with
/// eta Omega_bar = 1 and delta = 20 eta Omega_bar.
///   "strict":     linear ramp, eta Omega_bar T = 400 (converged transfer)
///   "acceptance": linear ramp, eta Omega_bar T = 40
///   "paper":      peak eta Omega = 2 pi x 14 kHz, tau = 340 us, i.e.
///                 Omega_bar = 2 pi x 7 kHz and eta Omega_bar T = 14.95
struct Preset {
  std::string name;
  PulseSchedule schedule;
  SystemParams params;
  double dt;
};

Preset make_preset(const std::string &name, int n_ions);

/// Peak sideband Rabi frequency times pulse length in cycles, the figure of
/// merit quoted for the experiment (about 4.8 for the "paper" preset).
double peak_rabi_cycles(const PulseSchedule &schedule);

/// |<reduced(t)|full(t)>|^2 with the reduced chain embedded in the product
/// space and the full state moved into the rotating frame. Both models start
/// in |D^0>|0> and run to the schedule's end time.
double model_overlap(const PulseSchedule &schedule, const SystemParams &params,
                     double dt);

struct ScaleFit {
  double scale;
  double overlap;
};

/// Golden-section search over coupling_scale in [lo, hi] maximizing
/// model_overlap. The literal reduced matrix omits the 1/2 of the
/// interaction Hamiltonian, so the optimum sits near 2.
ScaleFit calibrate_coupling_scale(const PulseSchedule &schedule,
                                  SystemParams params, double dt,
                                  double lo = 1.0, double hi = 3.0,
                                  int iterations = 24);

} // namespace dicke
