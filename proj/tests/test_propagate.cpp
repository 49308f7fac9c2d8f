#include <gtest/gtest.h>

#include <numbers>

#include "adiactl/diagnostics.hpp"
#include "adiactl/propagate.hpp"
#include "test_support.hpp"

using namespace adiactl;
using adiactl::testing::random_hermitian;
using adiactl::testing::random_state;
using C = std::complex<double>;

namespace {

const Modeld kFig1 = fig1_model<double>();

Modeld constant_model(const HermitianOperatord& h, double total) {
  InterpolatedModel<double> m{h, h, {ScheduleKind::linear, {}}, total};
  return m;
}

StateVectord ground0(const Modeld& m) { return StateVectord::normalized(frame_at(m, 0.0).state(0)); }

IntegratorConfig<double> window(double t1, double dt, int stride = 1) {
  IntegratorConfig<double> cfg;
  cfg.t1 = t1;
  cfg.dt = dt;
  cfg.record_stride = stride;
  return cfg;
}

}  // namespace

TEST(SchrodingerRhs, Basics) {
  CVector<double> up(2);
  up << 1, 0;
  EXPECT_EQ(schrodinger_rhs(HermitianOperatord::zero(2), up).norm(), 0.0);
  const auto r = schrodinger_rhs(pauli_combo<double>(0, 0, 1, 0), up);
  EXPECT_EQ(r(0), C(0, -1));
  EXPECT_EQ(r(1), C(0, 0));
  std::mt19937_64 rng(51);
  for (int k = 0; k < 20; ++k) {
    const auto psi = random_state(rng, 4);
    EXPECT_NEAR(psi.dot(schrodinger_rhs(random_hermitian(rng, 4), psi)).real(), 0, 1e-13);
  }
}

// Oracle: exp(-i sigma_z dt) in closed form.
TEST(Rk4Step, ConstantHamiltonianMatchesExponential) {
  const Modeld m = constant_model(pauli_combo<double>(0, 0, 1, 0), 1);
  std::mt19937_64 rng(52);
  const auto psi = random_state(rng, 2);
  const double dt = 1e-2;
  ControlContext<double> ctx;
  const auto step = rk4_step<double>(m, Schemed{NoControl{}}, psi, 0.0, dt, ctx, frame_at(m, 0.0));
  CVector<double> exact(2);
  exact << std::polar(1.0, -dt) * psi(0), std::polar(1.0, dt) * psi(1);
  EXPECT_LT((step.state - exact).norm(), 1e-9);
}

TEST(Rk4Step, PerStepNormDrift) {
  ControlContext<double> ctx;
  const auto psi = ground0(kFig1);
  const auto step = rk4_step<double>(kFig1, Schemed{NoControl{}}, psi.amplitudes(), 0.0, 1e-3, ctx, frame_at(kFig1, 0.0));
  EXPECT_LE(std::abs(step.state.norm() - 1), 1e-12);
}

TEST(IntegratorConfig, Validation) {
  IntegratorConfig<double> c;
  EXPECT_EQ(c.steps(), 3000);
  c.dt = 0.7;
  EXPECT_THROW(c.steps(), ValueError);
  c = {};
  c.t1 = 0;
  EXPECT_THROW(c.steps(), ValueError);
  c = {};
  c.dt = 4;
  EXPECT_THROW(c.steps(), ValueError);
  c = {};
  c.record_stride = 0;
  EXPECT_THROW(c.steps(), ValueError);
}

TEST(Propagate, SampleCountAndEndpoints) {
  const auto traj = propagate(kFig1, Schemed{NoControl{}}, ground0(kFig1), IntegratorConfig<double>{});
  ASSERT_EQ(traj.size(), 301u);
  EXPECT_EQ(traj.times.front(), 0.0);
  EXPECT_EQ(traj.times.back(), 3.0);
  for (std::size_t i = 1; i < traj.size(); ++i) EXPECT_GT(traj.times[i], traj.times[i - 1]);
  EXPECT_EQ(traj.states.size(), traj.size());
  EXPECT_EQ(traj.controls.size(), traj.size());
  EXPECT_EQ(traj.frames.size(), traj.size());
  for (const auto& c : traj.controls) EXPECT_TRUE(c.fields.empty());
}

TEST(Propagate, UnevenStrideKeepsFinalSample) {
  const auto traj = propagate(kFig1, Schemed{NoControl{}}, ground0(kFig1), window(1, 1e-2, 7));
  EXPECT_EQ(traj.size(), 100u / 7 + 2);
  EXPECT_EQ(traj.times.back(), 1.0);
}

TEST(Propagate, InitialFidelityIsOne) {
  const auto traj = propagate(kFig1, Schemed{NoControl{}}, ground0(kFig1), window(0.1, 1e-3));
  EXPECT_NEAR(fidelity(traj.frames[0], traj.states[0].amplitudes(), 0), 1.0, 1e-15);
}

TEST(Propagate, UncontrolledMatchesRabiOracle) {
  const auto traj = propagate(kFig1, Schemed{NoControl{}}, ground0(kFig1), IntegratorConfig<double>{});
  const RabiOracle<double> oracle(fig1_model<double>());
  for (std::size_t i = 0; i < traj.size(); ++i)
    EXPECT_NEAR(fidelity(traj.frames[i], traj.states[i].amplitudes(), 0), oracle.fidelity(traj.times[i]), 1e-6);
  EXPECT_LE(traj.max_norm_drift, 1e-9);
}

TEST(Propagate, ZeroFieldSchemeEqualsNoControl) {
  SchemeAConfigd a;
  a.x_op = pauli_combo<double>(1, 0, 0, 0);
  a.controls = {ControlOperator<double>::fixed(pauli_combo<double>(0, 0, 1, 0))};
  a.f_max = 0;
  const auto cfg = window(1, 1e-3, 10);
  const auto t0 = propagate(kFig1, Schemed{NoControl{}}, ground0(kFig1), cfg);
  const auto t1 = propagate(kFig1, Schemed{a}, ground0(kFig1), cfg);
  ASSERT_EQ(t0.size(), t1.size());
  for (std::size_t i = 0; i < t0.size(); ++i)
    EXPECT_LE((t0.states[i].amplitudes() - t1.states[i].amplitudes()).norm(), 1e-12);
}

TEST(Propagate, Deterministic) {
  SchemeBConfigd b;
  b.controls = {ControlOperator<double>::fixed(pauli_combo<double>(4, 1, 0, 0))};
  b.regularization = Regularization::smooth;
  b.epsilon = 0.1;
  const auto cfg = window(1, 1e-3, 10);
  const auto x = propagate(kFig1, Schemed{b}, ground0(kFig1), cfg);
  const auto y = propagate(kFig1, Schemed{b}, ground0(kFig1), cfg);
  for (std::size_t i = 0; i < x.size(); ++i) {
    EXPECT_TRUE(x.states[i].amplitudes() == y.states[i].amplitudes());
    EXPECT_EQ(x.controls[i].fields, y.controls[i].fields);
  }
}

TEST(Propagate, RenormalizationIsCounted) {
  auto cfg = window(1, 1e-2, 10);
  cfg.renormalize_every = 1;
  const auto traj = propagate(kFig1, Schemed{NoControl{}}, ground0(kFig1), cfg);
  EXPECT_EQ(traj.renormalizations, 100);
  EXPECT_LE(traj.max_norm_drift, 1e-15);
}

TEST(Propagate, RejectsUnnormalizedInitialState) {
  CVector<double> v(2);
  v << 1, 1;
  EXPECT_THROW(propagate(kFig1, Schemed{NoControl{}}, StateVectord::from_propagated(v), window(1, 1e-2)), ValueError);
}

TEST(Propagate, GaugeLossAbortsWithTime) {
  const Eigen::Index n = 5;
  CMatrix<double> diag = CMatrix<double>::Zero(n, n);
  CMatrix<double> dft(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    diag(i, i) = double(i);
    for (Eigen::Index j = 0; j < n; ++j)
      dft(i, j) = std::polar(1 / std::sqrt(double(n)), 2 * std::numbers::pi * double(i * j) / double(n));
  }
  InterpolatedModel<double> im{HermitianOperatord(diag), HermitianOperatord::hermitize(dft * diag * dft.adjoint()),
                               {ScheduleKind::linear, {}}, 1};
  const Modeld m = im;
  try {
    propagate(m, Schemed{NoControl{}}, ground0(m), window(1, 1));
    FAIL() << "expected GaugeTrackingError";
  } catch (const GaugeTrackingError& e) {
    EXPECT_EQ(e.time(), 1.0);
  }
}

// Self-convergence on [0, 1]: error at dt and dt/2 against a dt = 1e-5 reference.
TEST(Propagate, FourthOrderConvergence) {
  const auto end_state = [](double dt) {
    return propagate(kFig1, Schemed{NoControl{}}, ground0(kFig1), window(1, dt, 1000000)).states.back().amplitudes();
  };
  const auto ref = end_state(1e-5);
  const double e1 = (end_state(2e-2) - ref).norm();
  const double e2 = (end_state(1e-2) - ref).norm();
  EXPECT_NEAR(std::log2(e1 / e2), 4.0, 0.3);
}

// Oracle: centered finite difference of the recorded Lyapunov value.
TEST(Propagate, AnalyticRateMatchesFiniteDifference) {
  SchemeAConfigd a;
  a.x_op = pauli_combo<double>(1, 0, 3, 0);
  a.controls = {ControlOperator<double>::scaled_drift(1.0),
                ControlOperator<double>::fixed(pauli_combo<double>(0.5, 0.5, 0.5, 0))};
  SchemeBConfigd b;
  b.controls = {ControlOperator<double>::fixed(pauli_combo<double>(2, 1, 0, 0)),
                ControlOperator<double>::fixed(pauli_combo<double>(0, 0, 1, 0))};
  const auto f0 = frame_at(kFig1, 0.0);
  const auto psi0 = StateVectord::normalized(f0.state(0) + C(0.3, 0.6) * f0.state(1));
  const double dt = 1e-5;
  for (const Schemed& s : {Schemed{a}, Schemed{b}}) {
    const auto traj = propagate(kFig1, s, psi0, window(0.05, dt));
    int checked = 0;
    for (std::size_t i = 1; i + 1 < traj.size(); ++i) {
      if (traj.step_regularized[i - 1] || traj.step_regularized[i] || traj.step_clamped[i - 1] ||
          traj.step_clamped[i])
        continue;
      const double fd = (traj.controls[i + 1].lyapunov - traj.controls[i - 1].lyapunov) / (2 * dt);
      EXPECT_NEAR(traj.controls[i].lyapunov_rate, fd, 1e-5);
      ++checked;
    }
    EXPECT_GT(checked, 100);
  }
}
