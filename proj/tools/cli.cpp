#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "dicke/certification.hpp"
#include "dicke/dark_state.hpp"
#include "dicke/errors.hpp"
#include "dicke/evolution.hpp"
#include "dicke/measurement.hpp"
#include "dicke/model.hpp"
#include "dicke/observables.hpp"
#include "dicke/repro.hpp"
#include "dicke/spin_algebra.hpp"

namespace dicke::cli {

namespace {

using KeyValues = std::vector<std::pair<std::string, std::string>>;

std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) {
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string num(double v, int precision = 10) {
  std::ostringstream s;
  s << std::setprecision(precision) << v;
  return s.str();
}

// Half-up rounding to two decimals; the 1e-9 absorbs binary representation
// error so that 0.835 reports as 0.84.
std::string two_decimals(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(2) << std::floor(v * 100.0 + 0.5 + 1e-9) / 100.0;
  return s.str();
}

std::vector<double> parse_list(const std::string &raw) {
  std::string cleaned;
  for (char c : raw) {
    cleaned += (c == ',' || c == '[' || c == ']' || c == '{' || c == '}') ? ' ' : c;
  }
  std::istringstream in(cleaned);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception &) {
      throw ConfigurationError("cannot parse number '" + tok + "'");
    }
    if (used != tok.size()) {
      throw ConfigurationError("cannot parse number '" + tok + "'");
    }
    out.push_back(v);
  }
  return out;
}

double parse_scalar(const std::string &key, const std::string &raw) {
  const auto v = parse_list(raw);
  if (v.size() != 1) {
    throw ConfigurationError("key '" + key + "' expects one number");
  }
  return v.front();
}

KeyValues read_key_values(std::istream &in) {
  KeyValues kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigurationError("line " + std::to_string(lineno) +
                               ": expected key = value");
    }
    kv.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return kv;
}

// ---------------------------------------------------------------------------
// Output handling

class Emitter {
public:
  Emitter(std::ostream &out, std::string subcommand, KeyValues config,
          std::string out_path, std::string summary_path)
      : out_(out), subcommand_(std::move(subcommand)), config_(std::move(config)),
        out_path_(std::move(out_path)), summary_path_(std::move(summary_path)) {
    if (summary_path_.empty() && !out_path_.empty()) {
      summary_path_ = out_path_ + ".summary.txt";
    }
  }

  void set_generator(bool used) { generator_ = used; }

  std::string header() const {
    std::ostringstream h;
    h << "# " << kToolName << ' ' << kToolVersion << '\n';
    h << "# subcommand: " << subcommand_ << '\n';
    for (const auto &[k, v] : config_) {
      h << "# " << k << " = " << v << '\n';
    }
    if (generator_) {
      h << "# generator: " << kShotGenerator << '\n';
    }
    return h.str();
  }

  void csv(const std::string &body) {
    if (out_path_.empty()) {
      out_ << header() << body;
      return;
    }
    std::ofstream f(out_path_, std::ios::binary);
    if (!f) {
      throw ConfigurationError("cannot open output file " + out_path_);
    }
    f << header() << body;
  }

  void summary(const KeyValues &kv) {
    std::ostringstream body;
    for (const auto &[k, v] : kv) {
      body << k << " = " << v << '\n';
    }
    if (summary_path_.empty()) {
      // Keep stdout a valid commented CSV stream.
      std::istringstream lines(body.str());
      std::string line;
      while (std::getline(lines, line)) {
        out_ << "# " << line << '\n';
      }
      return;
    }
    std::ofstream f(summary_path_, std::ios::binary);
    if (!f) {
      throw ConfigurationError("cannot open summary file " + summary_path_);
    }
    f << header() << body.str();
  }

private:
  std::ostream &out_;
  std::string subcommand_;
  KeyValues config_;
  std::string out_path_;
  std::string summary_path_;
  bool generator_ = false;
};

KeyValues effective_config(CLI::App *sub, const std::string &config_file) {
  KeyValues kv;
  if (!config_file.empty()) {
    kv.emplace_back("config", config_file);
  }
  for (const CLI::Option *opt : sub->get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || name == "help" || name == "out" || name == "summary") {
      continue;
    }
    std::string value;
    if (opt->count() > 0) {
      // Last occurrence wins, matching the parse policy.
      value = opt->results().back();
    } else {
      value = opt->get_default_str();
    }
    if (!value.empty()) {
      kv.emplace_back(name, value);
    }
  }
  return kv;
}

// ---------------------------------------------------------------------------
// Simulation settings shared by evolve, scan-noise and sweep

struct SimOptions {
  int n = 4;
  std::string schedule = "linear";
  double total_time = 40.0;
  double dt = 0.0;
  double delta_ratio = 20.0;
  std::string model = "reduced";
  int n_max = -1;
  double eta = 0.1;
  double coupling_scale = 1.0;
  std::string preset;
};

struct SimFlags {
  CLI::Option *total_time = nullptr;
  CLI::Option *delta_ratio = nullptr;
  CLI::Option *dt = nullptr;
  CLI::Option *n_max = nullptr;
};

SimFlags add_sim_options(CLI::App *sub, SimOptions &o) {
  SimFlags f;
  sub->add_option("--n", o.n, "Number of ions")->capture_default_str();
  sub->add_option("--schedule", o.schedule, "Ramp shape: linear | smoothstep")
      ->check(CLI::IsMember({"linear", "smoothstep"}))
      ->capture_default_str();
  f.total_time = sub->add_option("--T", o.total_time,
                                 "Pulse length in units of 1/(eta Omega_bar)")
                     ->capture_default_str();
  f.dt = sub->add_option("--dt", o.dt, "Time step (0 = automatic)")->capture_default_str();
  f.delta_ratio = sub->add_option("--delta-ratio", o.delta_ratio,
                                  "Detuning delta / (eta Omega_bar)")
                      ->capture_default_str();
  sub->add_option("--model", o.model, "reduced | full")
      ->check(CLI::IsMember({"reduced", "full"}))
      ->capture_default_str();
  f.n_max = sub->add_option("--n-max", o.n_max, "Phonon cutoff (-1 = N/2 + 4)")
                ->capture_default_str();
  sub->add_option("--eta", o.eta, "Lamb-Dicke factor")->capture_default_str();
  sub->add_option("--coupling-scale", o.coupling_scale,
                  "Multiplier on the full-model couplings")
      ->capture_default_str();
  sub->add_option("--adiabatic-preset", o.preset, "strict | acceptance | paper")
      ->check(CLI::IsMember({"strict", "acceptance", "paper"}));
  return f;
}

struct Simulation {
  ModelTag model;
  PulseSchedule schedule;
  SystemParams params;
  double dt;
};

Simulation build_simulation(const SimOptions &o, const SimFlags &flags) {
  double total = o.total_time;
  double delta = o.delta_ratio;
  double dt = o.dt;
  if (!o.preset.empty()) {
    const auto preset = make_preset(o.preset, o.n);
    if (flags.total_time->count() == 0) {
      total = preset.schedule.total_time();
    }
    if (flags.delta_ratio->count() == 0) {
      delta = preset.params.delta;
    }
  }
  SystemParams p;
  p.n_ions = o.n;
  p.eta = o.eta;
  p.delta = delta;
  p.n_max = o.n_max >= 0 ? o.n_max : SystemParams::default_n_max(o.n);
  p.coupling_scale = o.coupling_scale;
  p.validate();
  auto schedule = o.schedule == "smoothstep" ? PulseSchedule::smoothstep(total, 1.0)
                                             : PulseSchedule::linear(total, 1.0);
  if (!(dt > 0.0)) {
    dt = default_time_step(schedule, p);
  }
  return {o.model == "full" ? ModelTag::Full : ModelTag::Reduced, std::move(schedule), p,
          dt};
}

// |<psi_d(t)|state>|^2 with the dark state on the phonon vacuum.
double dark_overlap(const Simulation &sim, const Vector &state, double t) {
  const int n = sim.params.n_ions;
  if (n % 2 != 0) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  const double red = sim.schedule.coupling_red(t);
  const double blue = sim.schedule.coupling_blue(t);
  if (red == 0.0 && blue == 0.0) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  const auto amps = dark_coefficients(n, red, blue).amplitudes();
  cplx s{0.0, 0.0};
  for (std::size_t i = 0; i < amps.size(); ++i) {
    const int m = static_cast<int>(2 * i);
    const int idx = sim.model == ModelTag::Reduced
                        ? m
                        : product_index(m, 0, sim.params.n_max);
    s += amps[i] * state(idx);
  }
  return std::norm(s);
}

KeyValues simulation_summary(const Simulation &sim) {
  return {{"adiabaticity", num(sim.schedule.adiabaticity())},
          {"peak_rabi_cycles", num(peak_rabi_cycles(sim.schedule))},
          {"adiabaticity_warning", sim.schedule.adiabaticity_warning() ? "yes" : "no"},
          {"reduced_model_valid",
           2.0 * sim.params.delta > 10.0 * 2.0 * sim.schedule.omega_bar() ? "yes" : "no"},
          {"dt", num(sim.dt)}};
}

// Spin-sector states used by parity and witness.
Matrix named_state(const std::string &name, int n) {
  if (name == "ideal") {
    const Vector v = dicke_state(n, n / 2, Axis::X);
    return v * v.adjoint();
  }
  const auto preset = make_preset(name, n);
  IntegrationOptions options;
  options.record_stride = std::numeric_limits<int>::max();
  const auto traj = integrate_reduced(
      preset.schedule.truncated(0.5 * preset.schedule.total_time()), preset.params,
      preset.dt, options);
  return spin_marginal(traj, traj.states.size() - 1);
}

// ---------------------------------------------------------------------------
// Subcommands

int cmd_darkstate(Emitter &emit, int n, double theta, double omega_r, double omega_b,
                  bool use_omegas) {
  const auto d = use_omegas ? dark_coefficients(n, omega_r, omega_b)
                            : dark_state_at_theta(n, theta);
  std::ostringstream csv;
  csv << "excitation,amplitude\n";
  for (std::size_t i = 0; i < d.amplitudes().size(); ++i) {
    csv << 2 * i << ',' << num(d.amplitudes()[i], 12) << '\n';
  }
  emit.csv(csv.str());
  KeyValues s{{"n_ions", std::to_string(n)},
              {"omega_r", num(d.omega_r())},
              {"omega_b", num(d.omega_b())},
              {"norm_A", num(d.norm_A(), 12)}};
  for (std::size_t i = 0; i < d.coeffs().size(); ++i) {
    s.emplace_back("C_" + std::to_string(i), num(d.coeffs()[i], 12));
  }
  emit.summary(s);
  return kSuccess;
}

int cmd_evolve(Emitter &emit, const Simulation &sim, int stride) {
  IntegrationOptions options;
  const int steps = static_cast<int>(std::ceil(sim.schedule.end_time() / sim.dt));
  options.record_stride = stride > 0 ? stride : std::max(1, steps / 1000);
  const auto traj = integrate(sim.model, sim.schedule, sim.params, sim.dt, options);
  std::ostringstream csv;
  csv << "t,mean_jz,var_jx,var_jy,var_jz,dark_fidelity\n";
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const auto m = spin_moments(spin_marginal(traj, k));
    csv << num(traj.times[k]) << ',' << num(m.mean_jz) << ',' << num(m.var_jx) << ','
        << num(m.var_jy) << ',' << num(m.var_jz) << ','
        << num(dark_overlap(sim, traj.states[k], traj.times[k])) << '\n';
  }
  emit.csv(csv.str());
  const auto last = spin_moments(spin_marginal(traj, traj.states.size() - 1));
  KeyValues s = simulation_summary(sim);
  s.emplace_back("final_mean_jz", num(last.mean_jz));
  s.emplace_back("final_dark_fidelity",
                 num(dark_overlap(sim, traj.final_state(), traj.times.back())));
  s.emplace_back("max_norm_drift", num(traj.max_norm_drift, 4));
  s.emplace_back("max_leakage", num(traj.max_leakage, 4));
  s.emplace_back("truncation_warning", traj.truncation_warning ? "yes" : "no");
  emit.summary(s);
  return traj.truncation_warning ? kNumericalFailure : kSuccess;
}

int cmd_scan_noise(Emitter &emit, const Simulation &sim, int cuts) {
  if (cuts < 2) {
    throw ConfigurationError("--cuts must be at least 2");
  }
  std::vector<double> times;
  for (int k = 0; k < cuts; ++k) {
    times.push_back(sim.schedule.total_time() * k / (cuts - 1));
  }
  const auto scan = truncated_scan(sim.model, sim.schedule, sim.params, times, sim.dt);
  std::ostringstream csv;
  csv << "tau_c,var_jx,var_jy,var_jz\n";
  for (const auto &pt : scan) {
    const auto m = spin_moments(
        spin_marginal(sim.model, pt.state, sim.params.n_ions, sim.params.n_max));
    csv << num(pt.cut_time) << ',' << num(m.var_jx) << ',' << num(m.var_jy) << ','
        << num(m.var_jz) << '\n';
  }
  emit.csv(csv.str());
  emit.summary(simulation_summary(sim));
  return kSuccess;
}

int cmd_parity(Emitter &emit, const std::string &state_name, int n_phases,
               std::uint64_t shots, std::uint64_t seed) {
  if (n_phases < 3) {
    throw ConfigurationError("--phases must be at least 3");
  }
  const Matrix rho = named_state(state_name, 2);
  std::vector<double> phases;
  for (int k = 0; k < n_phases; ++k) {
    phases.push_back(2.0 * kPi * k / n_phases);
  }
  ParityResult result = parity_scan(rho, phases);
  if (shots > 0) {
    emit.set_generator(true);
    std::vector<double> sampled;
    for (std::size_t k = 0; k < phases.size(); ++k) {
      const double p = result.scan.parities[k];
      const std::vector<double> probs{0.5 * (1.0 + p), 0.5 * (1.0 - p)};
      const auto rec = sample_distribution(probs, {shots, seed, k, false});
      sampled.push_back(rec.probabilities[0] - rec.probabilities[1]);
    }
    const auto z = sample_populations(rho, {shots, seed, phases.size(), false}, Axis::Z);
    result.scan = fit_parity(phases, sampled);
    result.p_minus = z.probabilities[0];
    result.p_zero = z.probabilities[1];
    result.p_plus = z.probabilities[2];
    result.fidelity = parity_fidelity(result.p_minus, result.p_plus, result.scan.amplitude);
  }
  std::ostringstream csv;
  csv << "phi,parity\n";
  for (std::size_t k = 0; k < phases.size(); ++k) {
    csv << num(phases[k]) << ',' << num(result.scan.parities[k]) << '\n';
  }
  emit.csv(csv.str());
  emit.summary({{"A_p", num(result.scan.amplitude)},
                {"phase_offset", num(result.scan.phase_offset)},
                {"offset", num(result.scan.offset)},
                {"p_minus", num(result.p_minus)},
                {"p_zero", num(result.p_zero)},
                {"p_plus", num(result.p_plus)},
                {"fidelity", num(result.fidelity)},
                {"direct_fidelity", num(direct_fidelity(rho, dicke_state(2, 1, Axis::X)))}});
  return kSuccess;
}

Axis parse_axis(char c) {
  switch (c) {
  case 'x':
    return Axis::X;
  case 'y':
    return Axis::Y;
  case 'z':
    return Axis::Z;
  default:
    throw ConfigurationError(std::string("unknown axis '") + c + "'");
  }
}

int cmd_witness(Emitter &emit, int n, const std::string &state_name,
                const std::string &axes, std::uint64_t shots, std::uint64_t seed) {
  if (axes.size() != 2) {
    throw ConfigurationError("--axes takes two letters, e.g. yz");
  }
  const Axis a = parse_axis(axes[0]);
  const Axis b = parse_axis(axes[1]);
  const Matrix rho = named_state(state_name, n);
  double value = witness(rho, a, b);
  double sigma = 0.0;
  if (shots > 0) {
    emit.set_generator(true);
    const auto ra = sample_populations(rho, {shots, seed, 0, false}, a);
    const auto rb = sample_populations(rho, {shots, seed, 1, false}, b);
    const auto [va, sa] = ra.moment(2);
    const auto [vb, sb] = rb.moment(2);
    value = va + vb;
    sigma = std::hypot(sa, sb);
  }
  const bool detected = witness_detects_four_partite(n, a, b, value);
  std::ostringstream csv;
  csv << "axes,value,threshold,verdict\n";
  csv << axes << ',' << num(value) << ',' << num(kFourPartiteWitnessThreshold) << ','
      << (detected ? "genuine-four-partite" : "not-detected") << '\n';
  emit.csv(csv.str());
  emit.summary({{"witness", num(value)},
                {"sigma", num(sigma)},
                {"threshold_applies", (n == 4 && axes.find('x') == std::string::npos) ? "yes" : "no"},
                {"verdict", detected ? "genuine-four-partite" : "not-detected"}});
  return kSuccess;
}

int cmd_bounds(Emitter &emit, std::ostream &out, const std::string &input) {
  std::ifstream f(input, std::ios::binary);
  if (!f) {
    throw ConfigurationError("cannot open bounds input " + input);
  }
  const auto in = parse_bounds_input(f);
  const auto record = make_record(in.witness, in.populations, in.j_max, Axis::X);
  const auto errors = propagate_uncertainty(record, in.sigma_witness, in.sigma_populations);
  out << "F_lo = " << two_decimals(record.f_lo) << " +- " << two_decimals(errors.sigma_lo)
      << "  (raw " << num(record.f_lo, 6) << " +- " << num(errors.sigma_lo, 4) << ")\n";
  out << "F_hi = " << two_decimals(record.f_hi) << " +- " << two_decimals(errors.sigma_hi)
      << "  (raw " << num(record.f_hi, 6) << " +- " << num(errors.sigma_hi, 4) << ")\n";
  const bool ghz = excludes_ghz(record.f_lo);
  out << "GHZ excluded (F_lo > 3/4): " << (ghz ? "yes" : "no") << '\n';

  std::ostringstream csv;
  csv << "key,value\n";
  for (const auto &[k, v] : in.raw) {
    csv << k << ",\"" << v << "\"\n";
  }
  emit.csv(csv.str());
  emit.summary({{"F_lo", num(record.f_lo)},
                {"F_hi", num(record.f_hi)},
                {"sigma_F_lo", num(errors.sigma_lo)},
                {"sigma_F_hi", num(errors.sigma_hi)},
                {"ghz_excluded", ghz ? "yes" : "no"}});
  return kSuccess;
}

struct SweepRow {
  double value;
  double final_jz;
  double midpoint_fidelity;
  double drift;
};

int cmd_sweep(Emitter &emit, const SimOptions &base, const SimFlags &flags,
              const std::string &param, const std::string &values, int threads) {
  const auto grid = parse_list(values);
  if (grid.empty()) {
    throw ConfigurationError("--values must list at least one number");
  }
  SimOptions resolved = base;
  if (!base.preset.empty()) {
    const auto preset = make_preset(base.preset, base.n);
    if (flags.total_time->count() == 0) {
      resolved.total_time = preset.schedule.total_time();
    }
    if (flags.delta_ratio->count() == 0) {
      resolved.delta_ratio = preset.params.delta;
    }
  }
  // Each run owns its schedule and parameters; nothing is shared.
  auto one = [resolved, &flags, param](double v) {
    SimOptions o = resolved;
    if (param == "T") {
      o.total_time = v;
    } else {
      o.delta_ratio = v;
    }
    o.preset.clear();
    o.dt = 0.0;
    const auto sim = build_simulation(o, flags);
    const double total = sim.schedule.total_time();
    const auto scan =
        truncated_scan(sim.model, sim.schedule, sim.params, {0.5 * total, total}, sim.dt);
    const int n = sim.params.n_ions;
    const auto mid = spin_marginal(sim.model, scan[0].state, n, sim.params.n_max);
    const auto fin = spin_marginal(sim.model, scan[1].state, n, sim.params.n_max);
    return SweepRow{v, spin_moments(fin).mean_jz,
                    direct_fidelity(mid, dicke_state(n, n / 2, Axis::X)),
                    std::abs(scan[1].state.norm() - 1.0)};
  };
  const unsigned workers =
      threads > 0 ? static_cast<unsigned>(threads)
                  : std::max(1U, std::thread::hardware_concurrency());
  std::vector<SweepRow> rows(grid.size());
  for (std::size_t start = 0; start < grid.size(); start += workers) {
    std::vector<std::future<SweepRow>> batch;
    for (std::size_t k = start; k < std::min(grid.size(), start + workers); ++k) {
      batch.push_back(std::async(std::launch::async, one, grid[k]));
    }
    for (std::size_t k = 0; k < batch.size(); ++k) {
      rows[start + k] = batch[k].get();
    }
  }
  std::ostringstream csv;
  csv << param << ",final_mean_jz,midpoint_fidelity,norm_drift\n";
  for (const auto &r : rows) {
    csv << num(r.value) << ',' << num(r.final_jz) << ',' << num(r.midpoint_fidelity) << ','
        << num(r.drift, 4) << '\n';
  }
  emit.csv(csv.str());
  emit.summary({{"runs", std::to_string(rows.size())}, {"workers", std::to_string(workers)}});
  return kSuccess;
}

int cmd_repro(Emitter &emit, std::ostream &out) {
  const auto results = repro::run_all();
  bool all = true;
  std::ostringstream csv;
  csv << "criterion,name,status,detail\n";
  for (const auto &r : results) {
    out << repro::format_line(r) << '\n';
    all = all && r.passed;
    csv << r.id << ',' << r.name << ',' << (r.passed ? "PASS" : "FAIL") << ",\"" << r.detail
        << "\"\n";
  }
  const auto passed = std::count_if(results.begin(), results.end(),
                                    [](const auto &r) { return r.passed; });
  out << passed << '/' << results.size() << " criteria passed\n";
  emit.csv(csv.str());
  emit.summary({{"passed", std::to_string(passed)},
                {"total", std::to_string(results.size())}});
  return all ? kSuccess : kNumericalFailure;
}

} // namespace

std::vector<std::string> config_tokens(std::istream &in) {
  std::vector<std::string> tokens;
  for (const auto &[k, v] : read_key_values(in)) {
    tokens.push_back("--" + k);
    if (!v.empty()) {
      tokens.push_back(v);
    }
  }
  return tokens;
}

BoundsInput parse_bounds_input(std::istream &in) {
  BoundsInput b;
  bool have_w = false;
  bool have_p = false;
  bool have_j = false;
  for (const auto &[k, v] : read_key_values(in)) {
    b.raw.emplace_back(k, v);
    if (k == "W") {
      b.witness = parse_scalar(k, v);
      have_w = true;
    } else if (k == "sigma_W") {
      b.sigma_witness = parse_scalar(k, v);
    } else if (k == "p_list") {
      b.populations = parse_list(v);
      have_p = true;
    } else if (k == "sigma_list") {
      b.sigma_populations = parse_list(v);
    } else if (k == "j_M") {
      b.j_max = parse_scalar(k, v);
      have_j = true;
    } else {
      throw ConfigurationError("unknown key '" + k + "' in bounds input");
    }
  }
  if (!have_w || !have_p || !have_j) {
    throw ConfigurationError("bounds input needs W, p_list and j_M");
  }
  if (b.sigma_populations.empty()) {
    b.sigma_populations.assign(b.populations.size(), 0.0);
  }
  if (b.sigma_populations.size() != b.populations.size()) {
    throw ConfigurationError("sigma_list and p_list differ in length");
  }
  return b;
}

int run(const std::vector<std::string> &argv_in, std::ostream &out, std::ostream &err) {
  std::vector<std::string> args = argv_in;
  if (args.empty()) {
    args.emplace_back(kToolName);
  }

  // Splice `--config FILE` entries in front of the explicit flags so that
  // flags given on the command line win (last value taken).
  std::string config_file;
  std::vector<std::string> config_args;
  for (std::size_t i = 1; i < args.size(); ++i) {
    std::string file;
    if (args[i] == "--config" && i + 1 < args.size()) {
      file = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                 args.begin() + static_cast<std::ptrdiff_t>(i + 2));
    } else if (args[i].rfind("--config=", 0) == 0) {
      file = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      continue;
    }
    std::ifstream f(file);
    if (!f) {
      err << "error: cannot open config file " << file << '\n';
      return kUsage;
    }
    try {
      config_args = config_tokens(f);
    } catch (const std::exception &e) {
      err << "error: " << file << ": " << e.what() << '\n';
      return kUsage;
    }
    config_file = file;
    break;
  }
  if (!config_args.empty() && args.size() >= 2) {
    args.insert(args.begin() + 2, config_args.begin(), config_args.end());
  }

  CLI::App app{"Phonon-mediated multi-level STIRAP simulator and Dicke-state certification",
               kToolName};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.footer("Any subcommand also accepts --config FILE with 'key = value' lines; flags given "
             "on the command line override the file. Exit codes: 0 ok, 1 usage, "
             "2 physics precondition, 3 numerical failure.");
  app.require_subcommand(1);
  std::string out_path;
  std::string summary_path;
  auto add_io = [&](CLI::App *sub) {
    sub->add_option("--out", out_path, "CSV output path (default stdout)");
    sub->add_option("--summary", summary_path,
                    "Summary path (default <out>.summary.txt)");
  };

  int ds_n = 4;
  double ds_theta = kPi / 2;
  double ds_or = 1.0;
  double ds_ob = 1.0;
  auto *ds = app.add_subcommand("darkstate", "Dark-state amplitudes as CSV");
  ds->add_option("--n", ds_n, "Even number of ions")->capture_default_str();
  auto *theta_opt =
      ds->add_option("--theta", ds_theta, "Mixing angle in radians")->capture_default_str();
  auto *or_opt = ds->add_option("--omega-r", ds_or, "Red sideband amplitude");
  auto *ob_opt = ds->add_option("--omega-b", ds_ob, "Blue sideband amplitude");
  or_opt->excludes(theta_opt);
  ob_opt->excludes(theta_opt);
  add_io(ds);

  SimOptions ev_opts;
  int ev_stride = 0;
  auto *ev = app.add_subcommand("evolve", "Integrate a STIRAP schedule");
  const auto ev_flags = add_sim_options(ev, ev_opts);
  ev->add_option("--stride", ev_stride, "Record every k-th step (0 = about 1000 rows)");
  add_io(ev);

  SimOptions sn_opts;
  int sn_cuts = 21;
  auto *sn = app.add_subcommand("scan-noise", "Spin variances at truncation times");
  const auto sn_flags = add_sim_options(sn, sn_opts);
  sn->add_option("--cuts", sn_cuts, "Number of evenly spaced cut times")->capture_default_str();
  add_io(sn);

  std::string pa_state = "ideal";
  int pa_phases = 24;
  std::uint64_t pa_shots = 0;
  std::uint64_t pa_seed = 1;
  auto *pa = app.add_subcommand("parity", "Two-ion parity oscillation and fidelity");
  pa->add_option("--state", pa_state, "ideal | strict | acceptance | paper")
      ->check(CLI::IsMember({"ideal", "strict", "acceptance", "paper"}))
      ->capture_default_str();
  pa->add_option("--phases", pa_phases, "Analysis phases over [0, 2 pi)")->capture_default_str();
  pa->add_option("--shots", pa_shots, "Shots per setting (0 = exact)")->capture_default_str();
  pa->add_option("--seed", pa_seed, "Sampling seed")->capture_default_str();
  add_io(pa);

  int wi_n = 4;
  std::string wi_state = "ideal";
  std::string wi_axes = "yz";
  std::uint64_t wi_shots = 0;
  std::uint64_t wi_seed = 1;
  auto *wi = app.add_subcommand("witness", "Collective-spin entanglement witness");
  wi->add_option("--n", wi_n, "Number of ions")->capture_default_str();
  wi->add_option("--state", wi_state, "ideal | strict | acceptance | paper")
      ->check(CLI::IsMember({"ideal", "strict", "acceptance", "paper"}))
      ->capture_default_str();
  wi->add_option("--axes", wi_axes, "Axis pair, e.g. yz")->capture_default_str();
  wi->add_option("--shots", wi_shots, "Shots per setting (0 = exact)")->capture_default_str();
  wi->add_option("--seed", wi_seed, "Sampling seed")->capture_default_str();
  add_io(wi);

  std::string bo_input;
  auto *bo = app.add_subcommand("bounds", "Fidelity bounds from witness and populations");
  bo->add_option("--input", bo_input, "Key-value file: W, sigma_W, p_list, sigma_list, j_M")
      ->required();
  add_io(bo);

  SimOptions sw_opts;
  std::string sw_param = "T";
  std::string sw_values = "40,80,160,320";
  int sw_threads = 0;
  auto *sw = app.add_subcommand("sweep", "Parallel parameter sweep of transfer runs");
  const auto sw_flags = add_sim_options(sw, sw_opts);
  sw->add_option("--param", sw_param, "T | delta-ratio")
      ->check(CLI::IsMember({"T", "delta-ratio"}))
      ->capture_default_str();
  sw->add_option("--values", sw_values, "Comma-separated values")->capture_default_str();
  sw->add_option("--threads", sw_threads, "Worker threads (0 = hardware)")->capture_default_str();
  add_io(sw);

  auto *rp = app.add_subcommand("repro", "Run every acceptance criterion");
  add_io(rp);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
    app.parse(reversed);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError &e) {
    err << "usage error: " << e.what() << '\n';
    err << app.help();
    return kUsage;
  }

  CLI::App *sub = app.get_subcommands().front();
  Emitter emit(out, sub->get_name(), effective_config(sub, config_file), out_path,
               summary_path);
  try {
    if (sub == ds) {
      const bool omegas = or_opt->count() > 0 || ob_opt->count() > 0;
      return cmd_darkstate(emit, ds_n, ds_theta, ds_or, ds_ob, omegas);
    }
    if (sub == ev) {
      return cmd_evolve(emit, build_simulation(ev_opts, ev_flags), ev_stride);
    }
    if (sub == sn) {
      return cmd_scan_noise(emit, build_simulation(sn_opts, sn_flags), sn_cuts);
    }
    if (sub == pa) {
      return cmd_parity(emit, pa_state, pa_phases, pa_shots, pa_seed);
    }
    if (sub == wi) {
      return cmd_witness(emit, wi_n, wi_state, wi_axes, wi_shots, wi_seed);
    }
    if (sub == bo) {
      return cmd_bounds(emit, out, bo_input);
    }
    if (sub == sw) {
      return cmd_sweep(emit, sw_opts, sw_flags, sw_param, sw_values, sw_threads);
    }
    if (sub == rp) {
      return cmd_repro(emit, out);
    }
  } catch (const IntegrationError &e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const ConfigurationError &e) {
    err << "precondition violated: " << e.what() << '\n';
    return kPhysicsPrecondition;
  } catch (const DomainError &e) {
    err << "precondition violated: " << e.what() << '\n';
    return kPhysicsPrecondition;
  } catch (const UnsupportedError &e) {
    err << "precondition violated: " << e.what() << '\n';
    return kPhysicsPrecondition;
  } catch (const ResourceError &e) {
    err << "precondition violated: " << e.what() << '\n';
    return kPhysicsPrecondition;
  }
  err << "usage error: no subcommand\n";
  return kUsage;
}

} // namespace dicke::cli
