#include "dicke/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <sstream>

#include <Eigen/Sparse>

#include "dicke/errors.hpp"

namespace dicke {

PulseSchedule::PulseSchedule(double total_time, double omega_bar, ThetaFn theta,
                             std::string name)
    : total_time_(total_time), omega_bar_(omega_bar), theta_(std::move(theta)),
      name_(std::move(name)) {
  if (!(total_time > 0.0) || !std::isfinite(total_time)) {
    throw ConfigurationError("schedule duration must be positive");
  }
  if (!(omega_bar >= 0.0) || !std::isfinite(omega_bar)) {
    throw ConfigurationError("schedule amplitude must be nonnegative");
  }
  if (!theta_) {
    throw ConfigurationError("schedule needs a theta(t) function");
  }
}

PulseSchedule PulseSchedule::linear(double total_time, double omega_bar) {
  return {total_time, omega_bar,
          [total_time](double t) { return kPi * t / total_time; }, "linear"};
}

PulseSchedule PulseSchedule::smoothstep(double total_time, double omega_bar) {
  return {total_time, omega_bar,
          [total_time](double t) {
            const double s = std::clamp(t / total_time, 0.0, 1.0);
            return kPi * s * s * (3.0 - 2.0 * s);
          },
          "smoothstep"};
}

PulseSchedule PulseSchedule::frozen(double total_time, double omega_bar,
                                    double theta) {
  return {total_time, omega_bar, [theta](double) { return theta; }, "frozen"};
}

PulseSchedule PulseSchedule::reversed() const {
  auto inner = theta_;
  PulseSchedule out(total_time_, omega_bar_,
                    [inner](double t) { return kPi - inner(t); },
                    name_ + "-reversed");
  out.truncation_ = truncation_;
  return out;
}

PulseSchedule PulseSchedule::truncated(double tau_c) const {
  if (!(tau_c >= 0.0) || tau_c > total_time_) {
    throw ConfigurationError("truncation time must lie in [0, T]");
  }
  PulseSchedule out = *this;
  out.truncation_ = tau_c;
  return out;
}

double PulseSchedule::theta(double t) const { return theta_(t); }

double PulseSchedule::coupling_red(double t) const {
  return omega_bar_ * (1.0 + std::cos(theta(t)));
}

double PulseSchedule::coupling_blue(double t) const {
  return omega_bar_ * (1.0 - std::cos(theta(t)));
}

bool PulseSchedule::has_transfer_endpoints(double tol) const {
  return std::abs(theta(0.0)) <= tol && std::abs(theta(total_time_) - kPi) <= tol;
}

SystemParams params_at(const PulseSchedule &schedule, const SystemParams &base,
                       double t) {
  if (!(base.eta > 0.0)) {
    throw ConfigurationError("eta must be positive to map eta*Omega onto Omega");
  }
  SystemParams p = base;
  p.omega_r = schedule.coupling_red(t) / base.eta;
  p.omega_b = schedule.coupling_blue(t) / base.eta;
  return p;
}

const char *model_name(ModelTag tag) {
  return tag == ModelTag::Reduced ? "reduced" : "full";
}

namespace {

// Writes -i H(t) psi into out.
using GeneratorFn = std::function<void(double, const Vector &, Vector &)>;

Vector rk4_step(const GeneratorFn &f, const Vector &psi, double t, double dt) {
  Vector k1(psi.size()), k2(psi.size()), k3(psi.size()), k4(psi.size());
  f(t, psi, k1);
  f(t + 0.5 * dt, psi + 0.5 * dt * k1, k2);
  f(t + 0.5 * dt, psi + 0.5 * dt * k2, k3);
  f(t + dt, psi + dt * k3, k4);
  return psi + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

GeneratorFn reduced_generator(const PulseSchedule &schedule,
                              const SystemParams &params) {
  const int n = params.n_ions;
  std::vector<double> bonds(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    bonds[k] = coupling_R(n, k);
  }
  // Same matrix as reduced_hamiltonian(params_at(schedule, params, t)).
  return [&schedule, &params, bonds](double t, const Vector &psi, Vector &out) {
    const double blue = schedule.coupling_blue(t);
    const double red = schedule.coupling_red(t);
    const auto last = static_cast<Eigen::Index>(bonds.size());
    for (Eigen::Index k = 0; k <= last; ++k) {
      cplx acc = (k % 2 == 1) ? params.delta * psi(k) : cplx{0.0, 0.0};
      if (k > 0) {
        acc += bonds[k - 1] * ((k - 1) % 2 == 0 ? blue : red) * psi(k - 1);
      }
      if (k < last) {
        acc += bonds[k] * (k % 2 == 0 ? blue : red) * psi(k + 1);
      }
      out(k) = cplx{acc.imag(), -acc.real()};
    }
  };
}

// Sparse ladder pieces of the interaction-picture Hamiltonian:
// red = a J+, blue = a^dagger J+, each weighted by R_m and the Fock factor.
struct LadderOperators {
  Eigen::SparseMatrix<cplx> red;
  Eigen::SparseMatrix<cplx> red_adj;
  Eigen::SparseMatrix<cplx> blue;
  Eigen::SparseMatrix<cplx> blue_adj;
};

LadderOperators make_ladders(const SystemParams &params) {
  const int n = params.n_ions;
  const int nmax = params.n_max;
  const int dim = (n + 1) * (nmax + 1);
  std::vector<Eigen::Triplet<cplx>> red;
  std::vector<Eigen::Triplet<cplx>> blue;
  for (int m = 0; m < n; ++m) {
    const double r = coupling_R(n, m);
    for (int ph = 0; ph <= nmax; ++ph) {
      if (ph >= 1) {
        red.emplace_back(product_index(m + 1, ph - 1, nmax),
                         product_index(m, ph, nmax), r * std::sqrt(double(ph)));
      }
      if (ph + 1 <= nmax) {
        blue.emplace_back(product_index(m + 1, ph + 1, nmax),
                          product_index(m, ph, nmax), r * std::sqrt(double(ph + 1)));
      }
    }
  }
  LadderOperators l;
  l.red.resize(dim, dim);
  l.red.setFromTriplets(red.begin(), red.end());
  l.blue.resize(dim, dim);
  l.blue.setFromTriplets(blue.begin(), blue.end());
  l.red_adj = l.red.adjoint();
  l.blue_adj = l.blue.adjoint();
  return l;
}

GeneratorFn full_generator(const PulseSchedule &schedule,
                           const SystemParams &params) {
  auto ladders = std::make_shared<LadderOperators>(make_ladders(params));
  return [&schedule, &params, ladders](double t, const Vector &psi, Vector &out) {
    const double half = 0.5 * params.coupling_scale;
    const double red = half * schedule.coupling_red(t);
    const double blue = half * schedule.coupling_blue(t);
    const cplx red_phase = std::polar(1.0, -params.delta * t);
    const cplx blue_phase = std::conj(red_phase);
    out.noalias() = (red * red_phase) * (ladders->red * psi);
    out.noalias() += (red * blue_phase) * (ladders->red_adj * psi);
    out.noalias() += (blue * blue_phase) * (ladders->blue * psi);
    out.noalias() += (blue * red_phase) * (ladders->blue_adj * psi);
    out *= cplx{0.0, -1.0};
  };
}

void check_step(ModelTag model, const PulseSchedule &schedule,
                const SystemParams &params, double dt) {
  params.validate();
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw ConfigurationError("time step must be positive");
  }
  const double rate = params.delta + params.n_ions * schedule.omega_bar();
  if (dt * rate > 0.1) {
    std::ostringstream msg;
    msg << "time step too coarse: dt*(delta + N*Omega_bar) = " << dt * rate
        << " exceeds 0.1";
    throw ConfigurationError(msg.str());
  }
  if (model == ModelTag::Full) {
    if (dt * params.delta > 0.05) {
      std::ostringstream msg;
      msg << "time step does not resolve the sideband phases: dt*delta = "
          << dt * params.delta << " exceeds 0.05";
      throw ConfigurationError(msg.str());
    }
    if (params.n_max < SystemParams::minimum_n_max(params.n_ions)) {
      throw ConfigurationError("n_max below required N/2 + 2");
    }
  }
}

Vector initial_state(ModelTag model, const SystemParams &params) {
  const int dim = model == ModelTag::Reduced
                      ? params.n_ions + 1
                      : (params.n_ions + 1) * (params.n_max + 1);
  Vector psi = Vector::Zero(dim);
  psi(0) = 1.0; // |D^0>|0> in both layouts
  return psi;
}

double leakage(const Vector &psi, const SystemParams &params) {
  double p = 0.0;
  const int lo = std::max(0, params.n_max - 1);
  for (int m = 0; m <= params.n_ions; ++m) {
    for (int ph = lo; ph <= params.n_max; ++ph) {
      p += std::norm(psi(product_index(m, ph, params.n_max)));
    }
  }
  return p;
}

struct StepGrid {
  int steps;
  double dt;
};

StepGrid make_grid(double t_end, double dt) {
  const int steps = std::max(1, static_cast<int>(std::ceil(t_end / dt - 1e-9)));
  return {steps, t_end / steps};
}

Trajectory run(ModelTag model, const PulseSchedule &schedule,
               const SystemParams &params, double dt,
               const IntegrationOptions &options) {
  check_step(model, schedule, params, dt);
  if (options.record_stride < 1) {
    throw ConfigurationError("record_stride must be >= 1");
  }
  const GeneratorFn h = model == ModelTag::Reduced
                            ? reduced_generator(schedule, params)
                            : full_generator(schedule, params);
  Trajectory traj;
  traj.model = model;
  traj.n_ions = params.n_ions;
  traj.n_max = model == ModelTag::Full ? params.n_max : 0;

  Vector psi = initial_state(model, params);
  traj.times.push_back(0.0);
  traj.states.push_back(psi);

  const double t_end = schedule.end_time();
  if (t_end <= 0.0) {
    return traj;
  }
  const StepGrid grid = make_grid(t_end, dt);
  for (int k = 0; k < grid.steps; ++k) {
    const double t = k * grid.dt;
    const double t_next = (k + 1 == grid.steps) ? t_end : (k + 1) * grid.dt;
    psi = rk4_step(h, psi, t, t_next - t);

    const double drift = std::abs(psi.norm() - 1.0);
    traj.max_norm_drift = std::max(traj.max_norm_drift, drift);
    if (drift > options.max_norm_drift) {
      std::ostringstream msg;
      msg << "norm drift " << drift << " at t=" << t_next << " exceeds "
          << options.max_norm_drift;
      throw IntegrationError(msg.str());
    }
    if (model == ModelTag::Full) {
      traj.max_leakage = std::max(traj.max_leakage, leakage(psi, params));
    }
    if ((k + 1) % options.record_stride == 0 || k + 1 == grid.steps) {
      traj.times.push_back(t_next);
      traj.states.push_back(psi);
    }
  }
  traj.truncation_warning = traj.max_leakage > options.leakage_warning;
  return traj;
}

} // namespace

double default_time_step(const PulseSchedule &schedule,
                         const SystemParams &params) {
  const double rate = params.delta + params.n_ions * schedule.omega_bar();
  return rate > 0.0 ? 0.02 / rate : schedule.end_time() / 1000.0;
}

Trajectory integrate_reduced(const PulseSchedule &schedule,
                             const SystemParams &params, double dt,
                             const IntegrationOptions &options) {
  return run(ModelTag::Reduced, schedule, params, dt, options);
}

Trajectory integrate_full(const PulseSchedule &schedule,
                          const SystemParams &params, double dt,
                          const IntegrationOptions &options) {
  return run(ModelTag::Full, schedule, params, dt, options);
}

Trajectory integrate(ModelTag model, const PulseSchedule &schedule,
                     const SystemParams &params, double dt,
                     const IntegrationOptions &options) {
  return run(model, schedule, params, dt, options);
}

std::vector<ScanPoint> truncated_scan(ModelTag model,
                                      const PulseSchedule &schedule,
                                      const SystemParams &params,
                                      const std::vector<double> &cut_times,
                                      double dt) {
  check_step(model, schedule, params, dt);
  for (double c : cut_times) {
    if (!(c >= 0.0) || c > schedule.total_time()) {
      throw ConfigurationError("cut time outside [0, T]");
    }
  }
  const GeneratorFn h = model == ModelTag::Reduced
                            ? reduced_generator(schedule, params)
                            : full_generator(schedule, params);
  std::vector<std::size_t> order(cut_times.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return cut_times[a] < cut_times[b];
  });

  std::vector<ScanPoint> out(cut_times.size());
  Vector psi = initial_state(model, params);
  const double t_end =
      cut_times.empty()
          ? 0.0
          : *std::max_element(cut_times.begin(), cut_times.end());
  const StepGrid grid = make_grid(std::max(t_end, dt), dt);
  std::size_t next = 0;
  double t = 0.0;
  auto emit_until = [&](double limit) {
    // Cut times in (t, limit] are reached by a partial step from psi(t).
    while (next < order.size() && cut_times[order[next]] <= limit + 1e-14) {
      const double c = cut_times[order[next]];
      Vector s = (c - t > 0.0) ? rk4_step(h, psi, t, c - t) : psi;
      out[order[next]] = {c, std::move(s)};
      ++next;
    }
  };
  emit_until(0.0);
  for (int k = 0; k < grid.steps && next < order.size(); ++k) {
    const double t_next = (k + 1) * grid.dt;
    // Cuts strictly inside this step come off the current state.
    while (next < order.size() && cut_times[order[next]] < t_next - 1e-14) {
      const double c = cut_times[order[next]];
      out[order[next]] = {c, rk4_step(h, psi, t, c - t)};
      ++next;
    }
    psi = rk4_step(h, psi, t, t_next - t);
    t = t_next;
    emit_until(t);
  }
  return out;
}

Matrix spin_marginal(ModelTag model, const Vector &state, int n_ions,
                     int n_max) {
  const int dim = n_ions + 1;
  Matrix rho = Matrix::Zero(dim, dim);
  if (model == ModelTag::Reduced) {
    if (state.size() != dim) {
      throw ConfigurationError("chain state has wrong dimension");
    }
    for (int a = 0; a < dim; ++a) {
      for (int b = 0; b < dim; ++b) {
        if (a % 2 == b % 2) {
          rho(a, b) = state(a) * std::conj(state(b));
        }
      }
    }
    return rho;
  }
  if (state.size() != dim * (n_max + 1)) {
    throw ConfigurationError("product-space state has wrong dimension");
  }
  for (int a = 0; a < dim; ++a) {
    for (int b = 0; b < dim; ++b) {
      cplx s{0.0, 0.0};
      for (int ph = 0; ph <= n_max; ++ph) {
        s += state(product_index(a, ph, n_max)) *
             std::conj(state(product_index(b, ph, n_max)));
      }
      rho(a, b) = s;
    }
  }
  return rho;
}

Matrix spin_marginal(const Trajectory &traj, std::size_t sample) {
  return spin_marginal(traj.model, traj.states.at(sample), traj.n_ions,
                       traj.n_max);
}

Preset make_preset(const std::string &name, int n_ions) {
  SystemParams params;
  params.n_ions = n_ions;
  params.eta = 0.1;
  params.delta = 20.0;
  params.n_max = SystemParams::default_n_max(n_ions);
  const double omega_bar = 1.0;
  double total = 0.0;
  if (name == "strict") {
    total = 400.0;
  } else if (name == "acceptance") {
    total = 40.0;
  } else if (name == "paper") {
    total = 2.0 * kPi * 7.0e3 * 340e-6;
  } else {
    throw ConfigurationError("unknown preset '" + name +
                             "' (expected strict, acceptance or paper)");
  }
  auto schedule = PulseSchedule::linear(total, omega_bar);
  const double dt = default_time_step(schedule, params);
  return {name, std::move(schedule), params, dt};
}

double peak_rabi_cycles(const PulseSchedule &schedule) {
  return 2.0 * schedule.omega_bar() * schedule.total_time() / (2.0 * kPi);
}

double model_overlap(const PulseSchedule &schedule, const SystemParams &params,
                     double dt) {
  IntegrationOptions options;
  options.record_stride = std::numeric_limits<int>::max();
  const auto reduced = integrate_reduced(schedule, params, dt, options);
  const auto full = integrate_full(schedule, params, dt, options);
  const Vector a = embed_reduced(reduced.final_state(), params.n_ions, params.n_max);
  const Vector b = to_rotating_frame(full.final_state(), schedule.end_time(), params);
  return std::norm(a.dot(b));
}

ScaleFit calibrate_coupling_scale(const PulseSchedule &schedule,
                                  SystemParams params, double dt, double lo,
                                  double hi, int iterations) {
  if (!(lo > 0.0) || !(hi > lo)) {
    throw ConfigurationError("scale bracket must satisfy 0 < lo < hi");
  }
  auto overlap_at = [&](double s) {
    params.coupling_scale = s;
    return model_overlap(schedule, params, dt);
  };
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo;
  double b = hi;
  double c = b - ratio * (b - a);
  double d = a + ratio * (b - a);
  double fc = overlap_at(c);
  double fd = overlap_at(d);
  for (int k = 0; k < iterations; ++k) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - ratio * (b - a);
      fc = overlap_at(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + ratio * (b - a);
      fd = overlap_at(d);
    }
  }
  return fc > fd ? ScaleFit{c, fc} : ScaleFit{d, fd};
}

} // namespace dicke
