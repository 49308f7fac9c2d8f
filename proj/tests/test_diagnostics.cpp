#include <gtest/gtest.h>

#include <numbers>

#include "adiactl/diagnostics.hpp"
#include "test_support.hpp"

using namespace adiactl;
using adiactl::testing::random_phase;
using adiactl::testing::random_state;

namespace {

const Modeld kFig1 = fig1_model<double>();

// cos(alpha) = n.m from the stated rotating-frame vectors, written out independently.
double oracle_cos_alpha(double mu_b0, double theta, double omega) {
  const double b[3] = {mu_b0 * std::sin(theta), 0, mu_b0 * std::cos(theta) - omega / 2};
  const double norm = std::sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2]);
  const double m[3] = {-std::sin(theta), 0, -std::cos(theta)};
  return (b[0] * m[0] + b[1] * m[1] + b[2] * m[2]) / norm;
}

}  // namespace

TEST(Fidelity, EigenstatesGiveZeroOrOne) {
  const auto f = frame_at(kFig1, 0.9);
  std::mt19937_64 rng(61);
  EXPECT_NEAR(fidelity(f, CVector<double>(random_phase(rng) * f.state(0)), 0), 1, 1e-14);
  EXPECT_NEAR(fidelity(f, f.state(1), 0), 0, 1e-14);
}

TEST(Fidelity, GaugeIndependent) {
  std::mt19937_64 rng(62);
  for (int k = 0; k < 50; ++k) {
    auto f = frame_at(kFig1, 0.05 * k);
    const auto psi = random_state(rng, 2);
    const double before = fidelity(f, psi, 0);
    f.states.col(0) *= random_phase(rng);
    EXPECT_NEAR(fidelity(f, psi, 0), before, 1e-12);
  }
}

TEST(TotalSpectrum, ZeroFieldsMatchModelEnergies) {
  const auto f = frame_at(kFig1, 1.1);
  const std::vector<HermitianOperatord> none;
  const std::vector<double> no_fields;
  const auto e = total_spectrum<double>(h0_at(kFig1, 1.1), none, no_fields);
  EXPECT_LT((e - f.energies).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_NEAR(e(1) - e(0), 2, 1e-12);
}

TEST(TotalSpectrum, DriftCancelledAtMinusOne) {
  const std::vector<HermitianOperatord> hc{h0_at(kFig1, 0.0)};
  const std::vector<double> f{-1.0};
  const auto e = total_spectrum<double>(h0_at(kFig1, 0.0), hc, f);
  EXPECT_NEAR(e(0), 0, 1e-15);
  EXPECT_NEAR(e(1), 0, 1e-15);
}

TEST(TotalSpectrum, IdentityShifts) {
  const std::vector<HermitianOperatord> hc{HermitianOperatord::identity(2)};
  const std::vector<double> f{0.75};
  const auto e = total_spectrum<double>(h0_at(kFig1, 0.3), hc, f);
  EXPECT_NEAR(e(0), -0.25, 1e-14);
  EXPECT_NEAR(e(1), 1.75, 1e-14);
}

TEST(NonlinearVsTunneling, TrivialCases) {
  const std::vector<ControlOperator<double>> controls{ControlOperator<double>::scaled_drift(1.0)};
  const std::vector<double> zero{0.0};
  const auto a = nonlinearity_vs_tunneling<double>(kFig1, 0.4, frame_at(kFig1, 0.4), zero, controls);
  EXPECT_EQ(a.nonlinear, 0.0);
  RotatingFieldModel<double> still = fig1_model<double>();
  still.omega = 0;
  const Modeld m = still;
  const std::vector<double> f{2.0};
  const auto b = nonlinearity_vs_tunneling<double>(m, 0.4, frame_at(m, 0.4), f, controls);
  EXPECT_EQ(b.tunneling, 0.0);
  EXPECT_NEAR(b.nonlinear, 2.0, 1e-14);
}

TEST(NonlinearVsTunneling, DriftControlScalesTunneling) {
  // With H_c = H0, dH = (1 + f) dH0/dt and |<E+|dH0/dt|E->| = omega sin(theta).
  const std::vector<ControlOperator<double>> controls{ControlOperator<double>::scaled_drift(1.0)};
  const std::vector<double> f{0.5};
  const auto r = fig1_model<double>();
  const auto c = nonlinearity_vs_tunneling<double>(kFig1, 0.7, frame_at(kFig1, 0.7), f, controls);
  EXPECT_NEAR(c.tunneling, 1.5 * r.omega * std::sin(r.theta), 1e-12);
  EXPECT_NEAR(c.nonlinear, 0.5, 1e-14);
}

TEST(RabiOracle, ValuesForPreset) {
  const auto r = fig1_model<double>();
  const RabiOracle<double> o(r);
  const double ca = oracle_cos_alpha(r.mu_b0, r.theta, r.omega);
  EXPECT_NEAR(o.cos_alpha, ca, 1e-15);
  EXPECT_NEAR(o.min_fidelity(), 0.07900857355927181, 1e-12);
  EXPECT_NEAR(o.omega_eff, 1.4736257582079006, 1e-12);
  EXPECT_NEAR(o.period(), 2.1318795739634284, 1e-12);
  EXPECT_NEAR(o.mean_fidelity(), 0.5395042867796359, 1e-12);
  EXPECT_DOUBLE_EQ(o.fidelity(0), 1);
  EXPECT_NEAR(o.fidelity(o.period() / 2), o.min_fidelity(), 1e-14);
}

TEST(RabiOracle, AgreesWithExactPropagationForOtherParameters) {
  RotatingFieldModel<double> r{1.3, 1.1, 2.5};
  const Modeld m = r;
  IntegratorConfig<double> cfg;
  cfg.t1 = 2;
  cfg.dt = 5e-4;
  cfg.record_stride = 20;
  const auto traj = propagate(m, Schemed{NoControl{}}, StateVectord::normalized(frame_at(m, 0.0).state(0)), cfg);
  for (std::size_t i = 0; i < traj.size(); ++i)
    EXPECT_NEAR(fidelity(traj.frames[i], traj.states[i].amplitudes(), 0), rabi_oracle(r, traj.times[i]), 1e-8);
}

TEST(MinGap, RotatingIsTwoMuB0) {
  const std::vector<double> grid{0.0, 0.5, 1.7};
  EXPECT_NEAR(min_gap<double>(kFig1, grid).value, 2, 1e-12);
}

TEST(MinGap, LinearSweepMinimumAtMidpoint) {
  InterpolatedModel<double> im{pauli_combo<double>(1, 0, 0, 0), pauli_combo<double>(0, 0, 1, 0),
                               {ScheduleKind::linear, {}}, 1};
  std::vector<double> grid;
  for (int k = 0; k <= 100; ++k) grid.push_back(k / 100.0);
  const auto g = min_gap<double>(Modeld(im), grid);
  EXPECT_NEAR(g.value, std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(g.argmin, 0.5, 1e-15);
  const std::vector<double> single{0.2};
  EXPECT_NEAR(min_gap<double>(Modeld(im), single).value, 2 * std::sqrt(0.64 + 0.04), 1e-12);
  EXPECT_THROW(min_gap<double>(Modeld(im), std::vector<double>{}), ValueError);
}

TEST(LocalMinima, StrictInterior) {
  const std::vector<double> v{0, 1, 0.5, 0.5, 2, 1, 3, 0};
  EXPECT_EQ(local_minima<double>(v), (std::vector<std::size_t>{5}));
}

TEST(Diagnose, RowsMatchTrajectory) {
  SchemeAConfigd a;
  a.x_op = pauli_combo<double>(1, 0, 12, 0);
  a.controls = {ControlOperator<double>::scaled_drift(1.0)};
  a.combined = true;
  a.sign = 1;
  const Schemed s = a;
  IntegratorConfig<double> cfg;
  cfg.dt = 5e-4;
  cfg.record_stride = 20;
  const auto traj = propagate(kFig1, s, StateVectord::normalized(frame_at(kFig1, 0.0).state(0)), cfg);
  const auto rows = diagnose(traj, kFig1, s);
  ASSERT_EQ(rows.size(), traj.size());
  for (const auto& r : rows) {
    EXPECT_GE(r.fidelity, 0);
    EXPECT_LE(r.fidelity, 1 + 1e-9);
    EXPECT_NEAR(r.gap, r.total_energies(1) - r.total_energies(0), 1e-15);
    EXPECT_GE(r.gap, 0);
  }
  EXPECT_NEAR(rows[0].fields[0], -1, 1e-12);
}
