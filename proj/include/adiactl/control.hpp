// Lyapunov feedback fields for the two control schemes.
//
// Scheme A drives V = <X>^2 using controls that commute with H0 and never looks at
// the instantaneous eigenstates. Scheme B drives V = 1 - |<n(t)|psi>|^2 toward zero
// for a chosen instantaneous eigenstate |n(t)>. Both expose a pivot control whose
// field cancels the drift contribution to dV/dt; the remaining controls carry the
// feedback term. hbar = 1.
#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "adiactl/linalg.hpp"
#include "adiactl/models.hpp"

namespace adiactl {

/// A control Hamiltonian H_c(t): either a fixed operator or a fixed multiple of the drift H0(t).
template <typename Scalar = double>
class ControlOperator {
 public:
  static ControlOperator fixed(HermitianOperator<Scalar> op) {
    ControlOperator c;
    c.op_ = std::move(op);
    return c;
  }
  static ControlOperator scaled_drift(Scalar scale) {
    ControlOperator c;
    c.follows_drift_ = true;
    c.scale_ = scale;
    return c;
  }

  bool follows_drift() const { return follows_drift_; }
  Scalar drift_scale() const { return scale_; }
  const HermitianOperator<Scalar>& fixed_operator() const { return op_; }

  HermitianOperator<Scalar> at(const TimeDependentHamiltonian<Scalar>& model, Scalar t) const {
    return follows_drift_ ? scale_ * h0_at(model, t) : op_;
  }
  HermitianOperator<Scalar> derivative(const TimeDependentHamiltonian<Scalar>& model, Scalar t) const {
    return follows_drift_ ? scale_ * dh0_dt(model, t) : HermitianOperator<Scalar>::zero(op_.dim());
  }

 private:
  ControlOperator() = default;
  bool follows_drift_ = false;
  Scalar scale_ = 1;
  HermitianOperator<Scalar> op_;
};

/// How a pivot field is formed when its denominator d approaches zero.
///  hold_last: |d| < epsilon keeps the last valid pivot value.
///  smooth:    the ratio num/d is replaced by num*d/(d^2 + epsilon^2) everywhere,
///             which is continuous and bounded by |num|/(2 epsilon). Samples whose
///             pivot deviates from the exact ratio by more than kSmoothFlagDeviation
///             are flagged regularized.
enum class Regularization { hold_last, smooth };

inline constexpr double kSmoothFlagDeviation = 1e-3;

template <typename Scalar = double>
struct SchemeAConfig {
  HermitianOperator<Scalar> x_op;
  std::vector<ControlOperator<Scalar>> controls;
  int pivot = 0;
  // Multiplier on the non-pivot feedback term i<X><[H_c, X]>. -1 makes every
  // non-pivot contribution to dV/dt non-positive; +1 is the literal form used by the rotating-field presets.
  int sign = -1;
  Scalar epsilon = 1e-6;
  Scalar f_max = 1e3;
  Regularization regularization = Regularization::hold_last;
  bool combined = false;  // single-control form: feedback term minus the drift ratio
  bool strict = false;    // enforce [H0, H_c] = 0 at every evaluation
};

template <typename Scalar = double>
struct SchemeBConfig {
  std::vector<ControlOperator<Scalar>> controls;
  int pivot = 0;
  int target_level = 0;
  Scalar epsilon = 1e-6;
  Scalar f_max = 1e3;
  Regularization regularization = Regularization::hold_last;
};

template <typename Scalar = double>
struct ControlSample {
  Scalar t = 0;
  std::vector<Scalar> fields;
  Scalar lyapunov = 0;
  Scalar lyapunov_rate = 0;
  Scalar pivot_denominator = 0;
  int pivot_used = 0;
  bool regularized = false;
  bool clamped = false;
};

/// Per-trajectory mutable state of the hold-last-value regularizer. Never share
/// one context between trajectories.
template <typename Scalar = double>
struct ControlContext {
  std::optional<Scalar> held_pivot;
};

using SchemeAConfigd = SchemeAConfig<double>;
using SchemeBConfigd = SchemeBConfig<double>;
using ControlSampled = ControlSample<double>;

inline constexpr double kProportionalityTol = 1e-9;
inline constexpr double kCommutationTol = 1e-9;

namespace detail {

// Returns kappa with h0 = kappa * hc within kProportionalityTol, if such a kappa exists.
template <typename Scalar>
std::optional<Scalar> proportionality(const HermitianOperator<Scalar>& h0, const HermitianOperator<Scalar>& hc) {
  const Scalar denom = hc.matrix().squaredNorm();
  if (denom == Scalar(0)) return std::nullopt;
  const Scalar kappa = (hc.matrix().adjoint() * h0.matrix()).trace().real() / denom;
  if ((h0.matrix() - kappa * hc.matrix()).cwiseAbs().maxCoeff() <= Scalar(kProportionalityTol)) return kappa;
  return std::nullopt;
}

// Im <psi|[A, X]|psi>; the full expectation is i times this value.
template <typename Scalar>
Scalar commutator_im(const HermitianOperator<Scalar>& a, const HermitianOperator<Scalar>& x,
                     const CVector<Scalar>& psi) {
  return expectation_complex<Scalar>(commutator(a, x), psi).imag();
}

template <typename Scalar>
void clamp_fields(ControlSample<Scalar>& s, Scalar f_max) {
  for (auto& f : s.fields) {
    if (std::abs(f) > f_max) {
      f = std::clamp(f, -f_max, f_max);
      s.clamped = true;
    }
  }
}

template <typename Scalar>
void require_controls(std::size_t count, int pivot, const char* who) {
  if (count == 0) throw ValueError(std::string(who) + ": at least one control operator is required");
  if (pivot < 0 || std::size_t(pivot) >= count) throw ValueError(std::string(who) + ": pivot index out of range");
}

// Chooses the pivot channel: the configured one if its denominator clears epsilon,
// otherwise the channel with the largest denominator above epsilon, otherwise none.
template <typename Scalar>
std::optional<int> select_pivot(const std::vector<Scalar>& denominators, int configured, Scalar epsilon) {
  if (std::abs(denominators[std::size_t(configured)]) >= epsilon) return configured;
  std::optional<int> best;
  for (std::size_t j = 0; j < denominators.size(); ++j)
    if (std::abs(denominators[j]) >= epsilon && (!best || std::abs(denominators[j]) > std::abs(denominators[std::size_t(*best)])))
      best = int(j);
  return best;
}

}  // namespace detail

template <typename Scalar>
HermitianOperator<Scalar> total_hamiltonian(const HermitianOperator<Scalar>& h0,
                                            std::span<const HermitianOperator<Scalar>> controls,
                                            std::span<const Scalar> fields) {
  if (controls.size() != fields.size())
    throw DimensionError("total_hamiltonian: controls vs fields", Eigen::Index(controls.size()),
                         Eigen::Index(fields.size()));
  HermitianOperator<Scalar> h = h0;
  for (std::size_t j = 0; j < controls.size(); ++j)
    if (fields[j] != Scalar(0)) h += fields[j] * controls[j];
  return h;
}

/// V = |<psi|X|psi>|^2.
template <typename Scalar>
Scalar lyapunov_value_a(const HermitianOperator<Scalar>& x, const CVector<Scalar>& psi) {
  const Scalar a = expectation_complex<Scalar>(x.matrix(), psi).real();
  return a * a;
}

/// V = 1 - |<target|psi>|^2.
template <typename Scalar>
Scalar lyapunov_value_b(const CVector<Scalar>& target, const CVector<Scalar>& psi) {
  return Scalar(1) - std::norm(target.dot(psi));
}

/// dV/dt = 2i <X><[H, X]> for the total Hamiltonian H.
template <typename Scalar>
Scalar lyapunov_rate_a(const HermitianOperator<Scalar>& x, const CVector<Scalar>& psi,
                       const HermitianOperator<Scalar>& h_total) {
  const Scalar a = expectation_complex<Scalar>(x.matrix(), psi).real();
  return Scalar(-2) * a * detail::commutator_im(h_total, x, psi);
}

/// dV/dt = -2 Re(<n'|psi><psi|n>) - 2 Im(<n|H|psi><psi|n>) for the total Hamiltonian H.
template <typename Scalar>
Scalar lyapunov_rate_b(const CVector<Scalar>& psi, const HermitianOperator<Scalar>& h_total,
                       const CVector<Scalar>& target, const CVector<Scalar>& target_dot) {
  const Complex<Scalar> psi_n = psi.dot(target);  // <psi|n>
  const Complex<Scalar> drift = target_dot.dot(psi) * psi_n;
  const Complex<Scalar> driven = target.dot(h_total.matrix() * psi) * psi_n;
  return Scalar(-2) * drift.real() - Scalar(2) * driven.imag();
}

namespace detail {

template <typename Scalar>
struct PivotChoice {
  int index;
  Scalar field;
  bool regularized;
};

// Pivot field numerator / den[j] for the channel chosen by select_pivot, regularized
// per `mode` when no denominator is usable.
template <typename Scalar>
PivotChoice<Scalar> resolve_pivot(Scalar numerator, const std::vector<Scalar>& den, int configured, Scalar epsilon,
                                  Regularization mode, const ControlContext<Scalar>& ctx) {
  std::optional<int> chosen = select_pivot(den, configured, epsilon);
  if (mode == Regularization::smooth) {
    if (!chosen) chosen = select_pivot(den, configured, Scalar(0));
    const Scalar d = den[std::size_t(*chosen)];
    const Scalar damp = d * d + epsilon * epsilon;
    return {*chosen, numerator * d / damp, epsilon * epsilon / damp > Scalar(kSmoothFlagDeviation)};
  }
  if (chosen) return {*chosen, numerator / den[std::size_t(*chosen)], false};
  return {configured, ctx.held_pivot.value_or(Scalar(0)), true};
}

}  // namespace detail

/// Multi-control Scheme A. Non-pivot fields are sign * i<X><[H_cj, X]>; the pivot
/// field -<[H0, X]>/<[H_cj0, X]> cancels the drift term of dV/dt. When H0 is a
/// multiple kappa * H_cj0 the ratio is the constant kappa even where both
/// expectations vanish, so the pivot is -kappa there.
template <typename Scalar>
ControlSample<Scalar> scheme_a_fields(const SchemeAConfig<Scalar>& cfg, const CVector<Scalar>& psi,
                                      const HermitianOperator<Scalar>& h0,
                                      std::span<const HermitianOperator<Scalar>> controls,
                                      ControlContext<Scalar>& ctx, Scalar t = 0) {
  detail::require_controls<Scalar>(controls.size(), cfg.pivot, "scheme_a_fields");
  detail::require_same_dim(h0.dim(), psi.size(), "scheme_a_fields: h0 vs psi");
  detail::require_same_dim(cfg.x_op.dim(), psi.size(), "scheme_a_fields: X vs psi");
  if (cfg.strict)
    for (const auto& hc : controls)
      if (commutator(h0, hc).cwiseAbs().maxCoeff() > Scalar(kCommutationTol))
        throw ValueError("scheme_a_fields: control does not commute with H0 (strict mode)");

  const std::size_t m = controls.size();
  const Scalar a = expectation_complex<Scalar>(cfg.x_op.matrix(), psi).real();
  std::vector<Scalar> den(m);
  for (std::size_t j = 0; j < m; ++j) den[j] = detail::commutator_im(controls[j], cfg.x_op, psi);

  detail::PivotChoice<Scalar> pivot;
  if (auto kappa = detail::proportionality(h0, controls[std::size_t(cfg.pivot)]))
    pivot = {cfg.pivot, -*kappa, false};
  else
    pivot = detail::resolve_pivot(-detail::commutator_im(h0, cfg.x_op, psi), den, cfg.pivot, cfg.epsilon,
                                  cfg.regularization, ctx);

  ControlSample<Scalar> s;
  s.t = t;
  s.pivot_used = pivot.index;
  s.pivot_denominator = den[std::size_t(pivot.index)];
  s.regularized = pivot.regularized;
  s.fields.resize(m);
  for (std::size_t j = 0; j < m; ++j)
    s.fields[j] = (int(j) == pivot.index) ? pivot.field : Scalar(-cfg.sign) * a * den[j];
  detail::clamp_fields(s, cfg.f_max);
  if (!s.regularized) ctx.held_pivot = s.fields[std::size_t(s.pivot_used)];

  const auto h = total_hamiltonian<Scalar>(h0, controls, s.fields);
  s.lyapunov = a * a;
  s.lyapunov_rate = lyapunov_rate_a(cfg.x_op, psi, h);
  return s;
}

/// Single-control Scheme A: f = sign * i<X><[H_c, X]> - <[H0, X]>/<[H_c, X]>.
/// If H0 = kappa * H_c the ratio is replaced by kappa, which keeps f finite
/// everywhere. Otherwise the ratio is regularized as configured.
template <typename Scalar>
ControlSample<Scalar> scheme_a_combined(const SchemeAConfig<Scalar>& cfg, const CVector<Scalar>& psi,
                                        const HermitianOperator<Scalar>& h0, const HermitianOperator<Scalar>& hc,
                                        ControlContext<Scalar>& ctx, Scalar t = 0) {
  if (cfg.controls.size() > 1) throw ValueError("scheme_a_combined: exactly one control operator is allowed");
  detail::require_same_dim(h0.dim(), psi.size(), "scheme_a_combined: h0 vs psi");
  detail::require_same_dim(hc.dim(), psi.size(), "scheme_a_combined: H_c vs psi");
  if (cfg.strict && commutator(h0, hc).cwiseAbs().maxCoeff() > Scalar(kCommutationTol))
    throw ValueError("scheme_a_combined: control does not commute with H0 (strict mode)");

  const Scalar a = expectation_complex<Scalar>(cfg.x_op.matrix(), psi).real();
  const Scalar den = detail::commutator_im(hc, cfg.x_op, psi);

  ControlSample<Scalar> s;
  s.t = t;
  s.pivot_denominator = den;

  // `drift_term` is -<[H0, X]>/<[H_c, X]>.
  Scalar drift_term;
  if (auto kappa = detail::proportionality(h0, hc)) {
    drift_term = -*kappa;
  } else {
    const auto pivot = detail::resolve_pivot(-detail::commutator_im(h0, cfg.x_op, psi), std::vector<Scalar>{den}, 0,
                                             cfg.epsilon, cfg.regularization, ctx);
    drift_term = pivot.field;
    s.regularized = pivot.regularized;
    if (!s.regularized) ctx.held_pivot = drift_term;
  }

  s.fields = {Scalar(-cfg.sign) * a * den + drift_term};
  detail::clamp_fields(s, cfg.f_max);

  const HermitianOperator<Scalar> h = h0 + s.fields[0] * hc;
  s.lyapunov = a * a;
  s.lyapunov_rate = lyapunov_rate_a(cfg.x_op, psi, h);
  return s;
}

/// Scheme B fields for target |n> with derivative |n'> (any gauge). Non-pivot
/// fields are -2 Im(<psi|H'_j|n><n|psi>); the pivot field is
/// -Re(<n'|psi><psi|n>) / Im(<n|H'_j0|psi><psi|n>). Every quantity involved is
/// invariant under |n> -> e^{i a}|n>, |n'> -> e^{i a}(|n'> + i b|n>).
template <typename Scalar>
ControlSample<Scalar> scheme_b_fields(const SchemeBConfig<Scalar>& cfg, const CVector<Scalar>& psi,
                                      const CVector<Scalar>& target, const CVector<Scalar>& target_dot,
                                      const HermitianOperator<Scalar>& h0,
                                      std::span<const HermitianOperator<Scalar>> controls,
                                      ControlContext<Scalar>& ctx, Scalar t = 0) {
  detail::require_controls<Scalar>(controls.size(), cfg.pivot, "scheme_b_fields");
  detail::require_same_dim(target.size(), psi.size(), "scheme_b_fields: target vs psi");
  detail::require_same_dim(target_dot.size(), psi.size(), "scheme_b_fields: target_dot vs psi");
  detail::require_same_dim(h0.dim(), psi.size(), "scheme_b_fields: h0 vs psi");

  const std::size_t m = controls.size();
  const Complex<Scalar> psi_n = psi.dot(target);  // <psi|n>
  const Scalar drift = (target_dot.dot(psi) * psi_n).real();
  std::vector<Scalar> den(m);
  for (std::size_t j = 0; j < m; ++j) {
    detail::require_same_dim(controls[j].dim(), psi.size(), "scheme_b_fields: control vs psi");
    den[j] = (target.dot(controls[j].matrix() * psi) * psi_n).imag();
  }

  const auto pivot = detail::resolve_pivot(-drift, den, cfg.pivot, cfg.epsilon, cfg.regularization, ctx);

  ControlSample<Scalar> s;
  s.t = t;
  s.pivot_used = pivot.index;
  s.pivot_denominator = den[std::size_t(pivot.index)];
  s.regularized = pivot.regularized;
  s.fields.resize(m);
  // Im(<psi|H'|n><n|psi>) = -Im(<n|H'|psi><psi|n>).
  for (std::size_t j = 0; j < m; ++j) s.fields[j] = (int(j) == pivot.index) ? pivot.field : Scalar(2) * den[j];
  detail::clamp_fields(s, cfg.f_max);
  if (!s.regularized) ctx.held_pivot = s.fields[std::size_t(s.pivot_used)];

  const auto h = total_hamiltonian<Scalar>(h0, controls, s.fields);
  s.lyapunov = lyapunov_value_b(target, psi);
  s.lyapunov_rate = lyapunov_rate_b(psi, h, target, target_dot);
  return s;
}

}  // namespace adiactl
