// Observables evaluated along trajectories, plus the closed-form uncontrolled
// two-level solution used as an independent oracle.
#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "adiactl/control.hpp"
#include "adiactl/eigenpath.hpp"
#include "adiactl/linalg.hpp"
#include "adiactl/models.hpp"
#include "adiactl/propagate.hpp"

namespace adiactl {

template <typename Scalar = double>
struct DiagnosticsRow {
  Scalar t = 0;
  Scalar fidelity = 0;
  RVector<Scalar> total_energies;
  Scalar gap = 0;
  Scalar nonlinear_coeff = 0;
  Scalar tunneling_coeff = 0;
  Scalar lyapunov = 0;
  std::vector<Scalar> fields;
};

using DiagnosticsRowd = DiagnosticsRow<double>;

/// |<level|psi>|^2.
template <typename Scalar>
Scalar fidelity(const EigenFrame<Scalar>& frame, const CVector<Scalar>& psi, Eigen::Index level) {
  detail::require_same_dim(frame.dim(), psi.size(), "fidelity");
  return std::norm(frame.states.col(level).dot(psi));
}

/// Ascending eigenvalues of H0 + sum_j f_j H_cj.
template <typename Scalar>
RVector<Scalar> total_spectrum(const HermitianOperator<Scalar>& h0,
                               std::span<const HermitianOperator<Scalar>> controls, std::span<const Scalar> fields) {
  return eigh(total_hamiltonian<Scalar>(h0, controls, fields)).values;
}

template <typename Scalar>
struct CoefficientPair {
  Scalar nonlinear;
  Scalar tunneling;
};

/// nonlinear = |<n| sum_j f_j H_cj |n>| and tunneling = |<m| dH |n>| with
/// dH = dH0/dt + sum_j f_j dH_cj/dt, for target level n. For more than two levels
/// the tunneling coefficient is the root-sum-square over all m != n.
template <typename Scalar>
CoefficientPair<Scalar> nonlinearity_vs_tunneling(const TimeDependentHamiltonian<Scalar>& model, Scalar t,
                                                  const EigenFrame<Scalar>& frame, std::span<const Scalar> fields,
                                                  const std::vector<ControlOperator<Scalar>>& controls,
                                                  Eigen::Index level = 0) {
  if (fields.size() != controls.size())
    throw DimensionError("nonlinearity_vs_tunneling: fields vs controls", Eigen::Index(fields.size()),
                         Eigen::Index(controls.size()));
  const Eigen::Index n = frame.dim();
  CMatrix<Scalar> feedback = CMatrix<Scalar>::Zero(n, n);
  CMatrix<Scalar> dh = dh0_dt(model, t).matrix();
  for (std::size_t j = 0; j < controls.size(); ++j) {
    if (fields[j] == Scalar(0)) continue;
    feedback += fields[j] * controls[j].at(model, t).matrix();
    dh += fields[j] * controls[j].derivative(model, t).matrix();
  }
  const CVector<Scalar> target = frame.states.col(level);
  CoefficientPair<Scalar> out{std::abs(expectation_complex<Scalar>(feedback, target)), 0};
  Scalar acc = 0;
  for (Eigen::Index m = 0; m < n; ++m)
    if (m != level) acc += std::norm(frame.states.col(m).dot(dh * target));
  out.tunneling = std::sqrt(acc);
  return out;
}

/// Rotating-frame solution of the uncontrolled rotating-field model started in |E-(0)>.
/// In the frame co-rotating with the field the Hamiltonian is static with
/// effective field B_eff = (mu_b0 sin(theta), 0, mu_b0 cos(theta) - omega/2); the
/// Bloch vector precesses about n = B_eff/|B_eff| at angular rate 2|B_eff| starting
/// from m = -(sin(theta), 0, cos(theta)).
template <typename Scalar = double>
struct RabiOracle {
  Scalar omega_eff;  // |B_eff|
  Scalar cos_alpha;  // n . m

  explicit RabiOracle(const RotatingFieldModel<Scalar>& model) {
    const Scalar bx = model.mu_b0 * std::sin(model.theta);
    const Scalar bz = model.mu_b0 * std::cos(model.theta) - model.omega / 2;
    omega_eff = std::hypot(bx, bz);
    if (omega_eff == Scalar(0)) {
      cos_alpha = 1;
      return;
    }
    cos_alpha = -(bx * std::sin(model.theta) + bz * std::cos(model.theta)) / omega_eff;
  }

  Scalar fidelity(Scalar t) const {
    const Scalar c2 = cos_alpha * cos_alpha;
    return (Scalar(1) + c2 + (Scalar(1) - c2) * std::cos(Scalar(2) * omega_eff * t)) / 2;
  }
  Scalar min_fidelity() const { return cos_alpha * cos_alpha; }
  Scalar mean_fidelity() const { return (Scalar(1) + cos_alpha * cos_alpha) / 2; }
  Scalar period() const { return std::numbers::pi_v<Scalar> / omega_eff; }
};

template <typename Scalar>
Scalar rabi_oracle(const RotatingFieldModel<Scalar>& model, Scalar t) {
  return RabiOracle<Scalar>(model).fidelity(t);
}

template <typename Scalar>
struct GapMinimum {
  Scalar value;
  Scalar argmin;
};

/// Minimum of E_1(t) - E_0(t) of H0 over the grid.
template <typename Scalar>
GapMinimum<Scalar> min_gap(const TimeDependentHamiltonian<Scalar>& model, std::span<const Scalar> grid) {
  if (grid.empty()) throw ValueError("min_gap: empty grid");
  if (model_dim(model) < 2) throw ValueError("min_gap: model has a single level");
  GapMinimum<Scalar> best{std::numeric_limits<Scalar>::infinity(), grid.front()};
  for (Scalar t : grid) {
    const auto e = eigh(h0_at(model, t)).values;
    const Scalar gap = e(1) - e(0);
    if (gap < best.value) best = {gap, t};
  }
  return best;
}

/// Indices of strict interior local minima of a sampled series.
template <typename Scalar>
std::vector<std::size_t> local_minima(std::span<const Scalar> values) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i + 1 < values.size(); ++i)
    if (values[i] < values[i - 1] && values[i] < values[i + 1]) out.push_back(i);
  return out;
}

template <typename Scalar>
const std::vector<ControlOperator<Scalar>>& scheme_controls(const Scheme<Scalar>& scheme) {
  static const std::vector<ControlOperator<Scalar>> none;
  if (const auto* a = std::get_if<SchemeAConfig<Scalar>>(&scheme)) return a->controls;
  if (const auto* b = std::get_if<SchemeBConfig<Scalar>>(&scheme)) return b->controls;
  return none;
}

/// One diagnostics row per recorded trajectory sample.
template <typename Scalar>
std::vector<DiagnosticsRow<Scalar>> diagnose(const Trajectory<Scalar>& traj,
                                             const TimeDependentHamiltonian<Scalar>& model,
                                             const Scheme<Scalar>& scheme) {
  const auto& controls = scheme_controls(scheme);
  std::vector<DiagnosticsRow<Scalar>> rows;
  rows.reserve(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const Scalar t = traj.times[i];
    const auto& sample = traj.controls[i];
    DiagnosticsRow<Scalar> row;
    row.t = t;
    row.fidelity = fidelity(traj.frames[i], traj.states[i].amplitudes(), traj.observed_level);
    const auto hc = evaluate_controls(controls, model, t);
    row.total_energies = total_spectrum<Scalar>(h0_at(model, t), hc, sample.fields);
    row.gap = row.total_energies.size() > 1 ? row.total_energies(1) - row.total_energies(0) : Scalar(0);
    const auto coeffs = nonlinearity_vs_tunneling<Scalar>(model, t, traj.frames[i], sample.fields, controls,
                                                          traj.observed_level);
    row.nonlinear_coeff = coeffs.nonlinear;
    row.tunneling_coeff = coeffs.tunneling;
    row.lyapunov = sample.lyapunov;
    row.fields = sample.fields;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace adiactl
