#include <gtest/gtest.h>

#include "dicke/dark_state.hpp"
#include "dicke/errors.hpp"
#include "dicke/evolution.hpp"
#include "dicke/model.hpp"
#include "dicke/observables.hpp"
#include "dicke/spin_algebra.hpp"
#include "oracles.hpp"

using namespace dicke;

namespace {

SystemParams base(int n, double delta = 20.0) {
  SystemParams p;
  p.n_ions = n;
  p.eta = 0.1;
  p.delta = delta;
  p.n_max = SystemParams::default_n_max(n);
  return p;
}

Vector ground(int dim) {
  Vector v = Vector::Zero(dim);
  v(0) = 1.0;
  return v;
}

double target_fidelity(const Matrix &rho, int n) {
  return direct_fidelity(rho, dicke_state(n, n / 2, Axis::X));
}

} // namespace

TEST(Schedule, EnvelopesAndEndpoints) {
  const auto s = PulseSchedule::linear(10.0, 2.0);
  EXPECT_DOUBLE_EQ(s.theta(0.0), 0.0);
  EXPECT_NEAR(s.theta(10.0), kPi, 1e-15);
  EXPECT_NEAR(s.coupling_red(0.0), 4.0, 1e-15);
  EXPECT_NEAR(s.coupling_blue(0.0), 0.0, 1e-15);
  EXPECT_NEAR(s.coupling_red(5.0), 2.0, 1e-12);
  EXPECT_NEAR(s.coupling_blue(5.0), 2.0, 1e-12);
  EXPECT_TRUE(s.has_transfer_endpoints());
  EXPECT_DOUBLE_EQ(s.adiabaticity(), 20.0);
  EXPECT_FALSE(s.adiabaticity_warning());
  EXPECT_TRUE(PulseSchedule::linear(2.0, 1.0).adiabaticity_warning());

  const auto smooth = PulseSchedule::smoothstep(10.0, 1.0);
  EXPECT_NEAR(smooth.theta(5.0), kPi / 2, 1e-15);
  EXPECT_NEAR(smooth.theta(10.0), kPi, 1e-15);

  const auto rev = s.reversed();
  EXPECT_NEAR(rev.coupling_red(2.0), s.coupling_blue(2.0), 1e-15);
  const auto cut = s.truncated(3.0);
  EXPECT_DOUBLE_EQ(cut.end_time(), 3.0);
  EXPECT_DOUBLE_EQ(cut.total_time(), 10.0);
  EXPECT_THROW(s.truncated(11.0), ConfigurationError);
  EXPECT_THROW(PulseSchedule::linear(0.0, 1.0), ConfigurationError);
}

TEST(Evolution, FrozenReducedMatchesExactExponential) {
  for (int n : {2, 4}) {
    const auto s = PulseSchedule::frozen(3.0, 1.0, 1.1);
    const auto p = base(n, 4.0);
    const auto traj = integrate_reduced(s, p, default_time_step(s, p));
    const RealMatrix h = reduced_hamiltonian(params_at(s, p, 0.0)).matrix();
    const Vector exact =
        oracle::expm(cplx{0.0, -3.0} * h.cast<cplx>()) * ground(n + 1);
    EXPECT_LT((traj.final_state() - exact).norm(), 1e-8) << "N=" << n;
  }
}

TEST(Evolution, FrozenFullMatchesRotatingFrameExponential) {
  for (int n : {2, 4}) {
    const auto s = PulseSchedule::frozen(2.0, 1.0, 0.9);
    auto p = base(n, 3.0);
    p.coupling_scale = 1.5;
    const auto traj = integrate_full(s, p, default_time_step(s, p));
    const Matrix h = oracle::rotating_frame_hamiltonian(
        n, p.n_max, p.coupling_scale * s.coupling_red(0.0),
        p.coupling_scale * s.coupling_blue(0.0), p.delta);
    const Vector exact = oracle::expm(cplx{0.0, -2.0} * h) * ground(h.rows());
    const Vector rot = to_rotating_frame(traj.final_state(), 2.0, p);
    EXPECT_LT((rot - exact).norm(), 1e-8) << "N=" << n;
  }
}

TEST(Evolution, NormDriftSmallPerUnitTime) {
  const auto s = PulseSchedule::linear(40.0, 1.0);
  for (auto model : {ModelTag::Reduced, ModelTag::Full}) {
    const auto p = base(4);
    const auto traj = integrate(model, s, p, default_time_step(s, p));
    EXPECT_LT(traj.max_norm_drift, 1e-8 * s.total_time()) << model_name(model);
    EXPECT_FALSE(traj.truncation_warning);
    for (std::size_t k = 0; k < traj.states.size(); k += 97) {
      const auto m = spin_moments(spin_marginal(traj, k));
      const double sum = m.var_jx + m.var_jy + m.var_jz + m.mean_jx * m.mean_jx +
                         m.mean_jy * m.mean_jy + m.mean_jz * m.mean_jz;
      EXPECT_NEAR(sum, 6.0, 1e-9);
    }
  }
}

TEST(Evolution, InfidelityDecreasesAsPulseLengthens) {
  const int n = 4;
  const auto p = base(n);
  double prev_mid = 1.0;
  double prev_final = 1.0;
  for (double t : {40.0, 80.0, 160.0, 320.0}) {
    const auto s = PulseSchedule::linear(t, 1.0);
    const auto scan =
        truncated_scan(ModelTag::Reduced, s, p, {0.5 * t, t}, default_time_step(s, p));
    const double mid = 1.0 - target_fidelity(spin_marginal(ModelTag::Reduced, scan[0].state, n, 0), n);
    const double fin = 1.0 - std::norm(scan[1].state(n));
    EXPECT_LT(mid, prev_mid) << "T=" << t;
    EXPECT_LT(fin, prev_final) << "T=" << t;
    prev_mid = mid;
    prev_final = fin;
  }
}

TEST(Evolution, TracksDarkManifoldAtStrictSettings) {
  const auto preset = make_preset("strict", 4);
  IntegrationOptions opt;
  opt.record_stride = 200;
  const auto traj = integrate_reduced(preset.schedule, preset.params, preset.dt, opt);
  double worst = 1.0;
  double prev_jz = -3.0;
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const double t = traj.times[k];
    const auto d = dark_coefficients(4, preset.schedule.coupling_red(t),
                                     preset.schedule.coupling_blue(t));
    const Vector dv = d.chain_vector().cast<cplx>();
    worst = std::min(worst, std::norm(dv.dot(traj.states[k])));
    const double jz = spin_moments(spin_marginal(traj, k)).mean_jz;
    EXPECT_GE(jz, prev_jz - 1e-9) << "t=" << t;
    prev_jz = jz;
  }
  EXPECT_GE(worst, 0.98);
  EXPECT_GE(prev_jz, 1.98);
}

TEST(Evolution, TruncatedScanMatchesSeparateRuns) {
  const auto s = PulseSchedule::linear(20.0, 1.0);
  const auto p = base(2);
  const double dt = default_time_step(s, p);
  const std::vector<double> cuts{15.0, 0.0, 7.3, 20.0};
  const auto scan = truncated_scan(ModelTag::Full, s, p, cuts, dt);
  ASSERT_EQ(scan.size(), cuts.size());
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    EXPECT_DOUBLE_EQ(scan[i].cut_time, cuts[i]);
    const auto traj = integrate_full(s.truncated(cuts[i]), p, dt);
    EXPECT_LT((scan[i].state - traj.final_state()).norm(), 1e-9) << "cut " << cuts[i];
  }
}

TEST(Evolution, PhononTruncationConverged) {
  const auto s = PulseSchedule::linear(40.0, 1.0);
  auto p = base(4);
  p.coupling_scale = 2.0;
  const double dt = default_time_step(s, p);
  const auto a = integrate_full(s, p, dt);
  p.n_max += 2;
  const auto b = integrate_full(s, p, dt);
  const double fa = target_fidelity(spin_marginal(a, a.states.size() / 2), 4);
  const double fb = target_fidelity(spin_marginal(b, b.states.size() / 2), 4);
  EXPECT_LT(std::abs(fa - fb), 1e-4);
}

TEST(Evolution, FullAndReducedAgreeAfterCalibration) {
  const auto s = PulseSchedule::linear(40.0, 1.0);
  const auto p = base(2);
  const auto fit = calibrate_coupling_scale(s, p, default_time_step(s, p));
  EXPECT_NEAR(fit.scale, 2.0, 0.05);
  EXPECT_GT(fit.overlap, 0.9999);
}

TEST(Evolution, GuardsAndWarnings) {
  const auto s = PulseSchedule::linear(10.0, 1.0);
  auto p = base(4);
  EXPECT_THROW(integrate_reduced(s, p, 0.1), ConfigurationError);
  EXPECT_THROW(integrate_reduced(s, p, -1.0), ConfigurationError);
  p.n_max = 3;
  EXPECT_THROW(integrate_full(s, p, default_time_step(s, p)), ConfigurationError);

  // Fast, weakly detuned drive pushes population up the phonon ladder.
  auto q = base(4, 1.0);
  q.n_max = 4;
  q.coupling_scale = 2.0;
  const auto fast = PulseSchedule::linear(3.0, 4.0);
  const auto traj = integrate_full(fast, q, default_time_step(fast, q));
  EXPECT_TRUE(traj.truncation_warning);
  EXPECT_GT(traj.max_leakage, 1e-3);

  IntegrationOptions strict;
  strict.max_norm_drift = 1e-18;
  EXPECT_THROW(integrate_reduced(s, base(4), default_time_step(s, base(4)), strict),
               IntegrationError);
}

TEST(Evolution, RecordStrideKeepsEndpoints) {
  const auto s = PulseSchedule::linear(5.0, 1.0);
  const auto p = base(2);
  IntegrationOptions opt;
  opt.record_stride = 7;
  const auto traj = integrate_reduced(s, p, default_time_step(s, p), opt);
  EXPECT_DOUBLE_EQ(traj.times.front(), 0.0);
  EXPECT_DOUBLE_EQ(traj.times.back(), 5.0);
  EXPECT_EQ(traj.times.size(), traj.states.size());
}

TEST(Presets, NamedSettings) {
  const auto strict = make_preset("strict", 4);
  EXPECT_DOUBLE_EQ(strict.schedule.total_time(), 400.0);
  EXPECT_DOUBLE_EQ(strict.params.delta, 20.0);
  const auto paper = make_preset("paper", 4);
  EXPECT_NEAR(paper.schedule.total_time(), 14.954, 1e-3);
  EXPECT_NEAR(peak_rabi_cycles(paper.schedule), 4.76, 0.01);
  EXPECT_THROW(make_preset("nope", 4), ConfigurationError);
}
