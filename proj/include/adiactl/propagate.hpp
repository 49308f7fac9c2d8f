// Fixed-step RK4 integration of i d|psi>/dt = H(t, psi)|psi> with feedback fields
// recomputed from the stage state at every stage.
#pragma once

#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "adiactl/control.hpp"
#include "adiactl/eigenpath.hpp"
#include "adiactl/linalg.hpp"
#include "adiactl/models.hpp"

namespace adiactl {

struct NoControl {};

template <typename Scalar = double>
using Scheme = std::variant<NoControl, SchemeAConfig<Scalar>, SchemeBConfig<Scalar>>;

using Schemed = Scheme<double>;

template <typename Scalar = double>
struct IntegratorConfig {
  Scalar t0 = 0;
  Scalar t1 = 3;
  Scalar dt = 1e-3;
  int renormalize_every = 0;  // 0: never
  int record_stride = 10;

  long long steps() const {
    if (!(t1 > t0)) throw ValueError("IntegratorConfig: t1 must exceed t0");
    if (!(dt > 0) || dt > t1 - t0) throw ValueError("IntegratorConfig: dt must lie in (0, t1 - t0]");
    if (record_stride < 1) throw ValueError("IntegratorConfig: record_stride must be >= 1");
    if (renormalize_every < 0) throw ValueError("IntegratorConfig: renormalize_every must be >= 0");
    const Scalar ratio = (t1 - t0) / dt;
    const long long n = std::llround(ratio);
    if (std::abs(ratio - Scalar(n)) > Scalar(1e-6) * std::max(Scalar(1), ratio))
      throw ValueError("IntegratorConfig: dt must divide t1 - t0");
    return n;
  }
  Scalar time_at(long long k) const { return k == steps() ? t1 : t0 + Scalar(k) * dt; }
};

template <typename Scalar = double>
struct Trajectory {
  std::vector<Scalar> times;
  std::vector<StateVector<Scalar>> states;
  std::vector<ControlSample<Scalar>> controls;
  std::vector<EigenFrame<Scalar>> frames;
  // True when any RK4 stage of the step starting at this sample was regularized/clamped.
  std::vector<bool> step_regularized;
  std::vector<bool> step_clamped;

  int observed_level = 0;
  std::size_t control_count = 0;
  std::string scheme_name;
  Scalar max_norm_drift = 0;
  long long renormalizations = 0;

  std::size_t size() const { return times.size(); }
};

using Trajectoryd = Trajectory<double>;

/// -i H psi (hbar = 1).
template <typename Scalar>
CVector<Scalar> schrodinger_rhs(const HermitianOperator<Scalar>& h_total, const CVector<Scalar>& psi) {
  detail::require_same_dim(h_total.dim(), psi.size(), "schrodinger_rhs");
  return Complex<Scalar>(0, -1) * (h_total.matrix() * psi);
}

template <typename Scalar>
int scheme_level(const Scheme<Scalar>& scheme, int fallback) {
  if (const auto* b = std::get_if<SchemeBConfig<Scalar>>(&scheme)) return b->target_level;
  return fallback;
}

template <typename Scalar>
std::size_t scheme_control_count(const Scheme<Scalar>& scheme) {
  if (const auto* a = std::get_if<SchemeAConfig<Scalar>>(&scheme)) return a->controls.size();
  if (const auto* b = std::get_if<SchemeBConfig<Scalar>>(&scheme)) return b->controls.size();
  return 0;
}

template <typename Scalar>
std::vector<HermitianOperator<Scalar>> evaluate_controls(const std::vector<ControlOperator<Scalar>>& controls,
                                                         const TimeDependentHamiltonian<Scalar>& model, Scalar t) {
  std::vector<HermitianOperator<Scalar>> out;
  out.reserve(controls.size());
  for (const auto& c : controls) out.push_back(c.at(model, t));
  return out;
}

template <typename Scalar>
std::vector<HermitianOperator<Scalar>> evaluate_control_derivatives(
    const std::vector<ControlOperator<Scalar>>& controls, const TimeDependentHamiltonian<Scalar>& model, Scalar t) {
  std::vector<HermitianOperator<Scalar>> out;
  out.reserve(controls.size());
  for (const auto& c : controls) out.push_back(c.derivative(model, t));
  return out;
}

/// Feedback fields and total Hamiltonian at (t, psi). `frame_hint` keeps the Scheme B
/// target level continuous; it may be any nearby frame.
template <typename Scalar>
std::pair<ControlSample<Scalar>, HermitianOperator<Scalar>> evaluate_feedback(
    const TimeDependentHamiltonian<Scalar>& model, const Scheme<Scalar>& scheme, const CVector<Scalar>& psi, Scalar t,
    const EigenFrame<Scalar>& frame_hint, ControlContext<Scalar>& ctx) {
  HermitianOperator<Scalar> h0 = h0_at(model, t);
  if (std::holds_alternative<NoControl>(scheme)) {
    ControlSample<Scalar> s;
    s.t = t;
    return {s, h0};
  }
  if (const auto* a = std::get_if<SchemeAConfig<Scalar>>(&scheme)) {
    const auto controls = evaluate_controls(a->controls, model, t);
    ControlSample<Scalar> s = a->combined ? scheme_a_combined(*a, psi, h0, controls.at(0), ctx, t)
                                          : scheme_a_fields<Scalar>(*a, psi, h0, controls, ctx, t);
    auto h = total_hamiltonian<Scalar>(h0, controls, s.fields);
    return {std::move(s), std::move(h)};
  }
  const auto& b = std::get<SchemeBConfig<Scalar>>(scheme);
  const EigenFrame<Scalar> frame = frame_at(model, t, &frame_hint);
  const CVector<Scalar> target = frame.state(b.target_level);
  const CVector<Scalar> target_dot = eigenstate_derivative(model, t, b.target_level, frame);
  const auto controls = evaluate_controls(b.controls, model, t);
  ControlSample<Scalar> s = scheme_b_fields<Scalar>(b, psi, target, target_dot, h0, controls, ctx, t);
  auto h = total_hamiltonian<Scalar>(h0, controls, s.fields);
  return {std::move(s), std::move(h)};
}

template <typename Scalar>
struct StepResult {
  CVector<Scalar> state;
  ControlSample<Scalar> sample;  // stage-1 (beginning of step) sample
  bool any_regularized = false;
  bool any_clamped = false;
};

/// One classic RK4 step. The feedback fields, and with them H, are recomputed at
/// every stage from the stage state and stage time.
template <typename Scalar>
StepResult<Scalar> rk4_step(const TimeDependentHamiltonian<Scalar>& model, const Scheme<Scalar>& scheme,
                            const CVector<Scalar>& psi, Scalar t, Scalar dt, ControlContext<Scalar>& ctx,
                            const EigenFrame<Scalar>& frame_hint) {
  StepResult<Scalar> out;
  const Scalar half = dt / 2;
  auto stage = [&](const CVector<Scalar>& x, Scalar ts, bool first) {
    auto [sample, h] = evaluate_feedback(model, scheme, x, ts, frame_hint, ctx);
    out.any_regularized = out.any_regularized || sample.regularized;
    out.any_clamped = out.any_clamped || sample.clamped;
    if (first) out.sample = std::move(sample);
    return schrodinger_rhs(h, x);
  };
  const CVector<Scalar> k1 = stage(psi, t, true);
  const CVector<Scalar> k2 = stage(psi + half * k1, t + half, false);
  const CVector<Scalar> k3 = stage(psi + half * k2, t + half, false);
  const CVector<Scalar> k4 = stage(psi + dt * k3, t + dt, false);
  out.state = psi + (dt / 6) * (k1 + Scalar(2) * k2 + Scalar(2) * k3 + k4);
  return out;
}

namespace detail {

template <typename Scalar>
void fill_uncontrolled_lyapunov(ControlSample<Scalar>& s, const TimeDependentHamiltonian<Scalar>& model,
                                const EigenFrame<Scalar>& frame, int level, const CVector<Scalar>& psi) {
  // Without a scheme, V and dV/dt report the deviation from the observed level.
  const CVector<Scalar> target = frame.state(level);
  s.lyapunov = lyapunov_value_b(target, psi);
  s.lyapunov_rate =
      lyapunov_rate_b(psi, h0_at(model, frame.t), target, eigenstate_derivative(model, frame.t, level, frame));
}

}  // namespace detail

/// Integrates the closed-loop dynamics from psi0 over [t0, t1]. Samples are recorded
/// every record_stride steps and at both endpoints. `observed_level` selects the
/// instantaneous eigenstate used for fidelity when the scheme has no target of its own.
template <typename Scalar>
Trajectory<Scalar> propagate(const TimeDependentHamiltonian<Scalar>& model, const Scheme<Scalar>& scheme,
                             const StateVector<Scalar>& psi0, const IntegratorConfig<Scalar>& cfg,
                             int observed_level = 0) {
  const long long n = cfg.steps();
  const Eigen::Index dim = model_dim(model);
  detail::require_same_dim(psi0.dim(), dim, "propagate: psi0 vs model");
  if (std::abs(psi0.norm() - Scalar(1)) > Scalar(1e-6)) throw ValueError("propagate: psi0 is not normalized");

  Trajectory<Scalar> traj;
  traj.observed_level = scheme_level(scheme, observed_level);
  traj.control_count = scheme_control_count(scheme);
  traj.scheme_name = std::holds_alternative<NoControl>(scheme)            ? "none"
                     : std::holds_alternative<SchemeAConfig<Scalar>>(scheme) ? "A"
                                                                              : "B";
  if (traj.observed_level < 0 || traj.observed_level >= dim) throw ValueError("propagate: level out of range");
  const std::size_t expected = std::size_t(n / cfg.record_stride) + 1 + (n % cfg.record_stride ? 1 : 0);
  traj.times.reserve(expected);

  ControlContext<Scalar> ctx;
  CVector<Scalar> psi = psi0.amplitudes();
  EigenFrame<Scalar> frame = frame_at(model, cfg.t0);

  auto record = [&](Scalar t, ControlSample<Scalar> sample, bool step_reg, bool step_clamp) {
    if (std::holds_alternative<NoControl>(scheme))
      detail::fill_uncontrolled_lyapunov(sample, model, frame, traj.observed_level, psi);
    traj.times.push_back(t);
    traj.states.push_back(StateVector<Scalar>::from_propagated(psi));
    traj.controls.push_back(std::move(sample));
    traj.frames.push_back(frame);
    traj.step_regularized.push_back(step_reg);
    traj.step_clamped.push_back(step_clamp);
  };

  for (long long k = 0; k < n; ++k) {
    const Scalar t = cfg.time_at(k);
    StepResult<Scalar> step;
    try {
      step = rk4_step(model, scheme, psi, t, cfg.time_at(k + 1) - t, ctx, frame);
    } catch (const GaugeTrackingError&) {
      throw;
    } catch (const NumericalError& e) {
      throw NumericalError("propagate: at t=" + std::to_string(double(t)) + ": " + e.what());
    }
    if (k % cfg.record_stride == 0) record(t, step.sample, step.any_regularized, step.any_clamped);

    psi = std::move(step.state);
    if (cfg.renormalize_every > 0 && (k + 1) % cfg.renormalize_every == 0) {
      psi.normalize();
      ++traj.renormalizations;
    }
    traj.max_norm_drift = std::max(traj.max_norm_drift, std::abs(psi.norm() - Scalar(1)));
    frame = frame_at(model, cfg.time_at(k + 1), &frame);
  }

  // Final sample: fields evaluated at the end state, no step follows.
  record(cfg.t1, evaluate_feedback(model, scheme, psi, cfg.t1, frame, ctx).first, false, false);
  return traj;
}

}  // namespace adiactl
