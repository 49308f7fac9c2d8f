// Instantaneous eigenframes of H0(t) with a smooth (parallel-transport) gauge.
#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "adiactl/linalg.hpp"
#include "adiactl/models.hpp"

namespace adiactl {

template <typename Scalar = double>
struct EigenFrame {
  Scalar t = 0;
  RVector<Scalar> energies;
  CMatrix<Scalar> states;  // column k is level k

  Eigen::Index dim() const { return energies.size(); }
  CVector<Scalar> state(Eigen::Index k) const { return states.col(k); }
};

using EigenFramed = EigenFrame<double>;

inline constexpr double kGaugeLossOverlap = 0.5;
inline constexpr double kDegeneracyGap = 1e-8;

namespace detail {

// Rotates column k so that its last component above `floor` is real positive. For the
// rotating-field model this is the phase convention in which the |down> amplitude
// of both closed-form eigenstates is real.
template <typename Scalar>
void fix_trailing_phase(CMatrix<Scalar>& v, Eigen::Index k) {
  for (Eigen::Index i = v.rows() - 1; i >= 0; --i) {
    const Scalar mag = std::abs(v(i, k));
    if (mag > Scalar(1e-12)) {
      v.col(k) *= std::conj(v(i, k)) / mag;
      return;
    }
  }
}

}  // namespace detail

/// Eigenpairs of H0(t). Without `prev`, levels are ascending and each state's last
/// non-negligible component is real positive. With `prev`, levels are matched to
/// prev by maximal |overlap| and each phase is rotated so <prev_k|cur_k> > 0.
template <typename Scalar>
EigenFrame<Scalar> frame_at(const TimeDependentHamiltonian<Scalar>& model, Scalar t,
                            const EigenFrame<Scalar>* prev = nullptr) {
  const auto sys = eigh(h0_at(model, t));
  const Eigen::Index n = sys.values.size();
  EigenFrame<Scalar> out;
  out.t = t;

  if (prev == nullptr) {
    out.energies = sys.values;
    out.states = sys.vectors;
    for (Eigen::Index k = 0; k < n; ++k) detail::fix_trailing_phase<Scalar>(out.states, k);
    return out;
  }

  if (prev->dim() != n) throw DimensionError("frame_at: prev frame", prev->dim(), n);

  const CMatrix<Scalar> overlap = prev->states.adjoint() * sys.vectors;  // (prev k, cur j)
  const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> mag = overlap.cwiseAbs();

  // Greedy assignment, most confident rows first.
  std::vector<Eigen::Index> rows(static_cast<std::size_t>(n));
  std::iota(rows.begin(), rows.end(), Eigen::Index{0});
  std::stable_sort(rows.begin(), rows.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return mag.row(a).maxCoeff() > mag.row(b).maxCoeff(); });
  std::vector<bool> taken(static_cast<std::size_t>(n), false);
  std::vector<Eigen::Index> match(static_cast<std::size_t>(n), -1);
  for (Eigen::Index k : rows) {
    Eigen::Index best = -1;
    for (Eigen::Index j = 0; j < n; ++j)
      if (!taken[std::size_t(j)] && (best < 0 || mag(k, j) > mag(k, best))) best = j;
    if (mag(k, best) < Scalar(kGaugeLossOverlap))
      throw GaugeTrackingError("frame_at: gauge tracking lost at t=" + std::to_string(double(t)) + " (level " +
                                   std::to_string(k) + " overlap " + std::to_string(double(mag(k, best))) +
                                   "); use a smaller grid step",
                               double(t));
    taken[std::size_t(best)] = true;
    match[std::size_t(k)] = best;
  }

  out.energies.resize(n);
  out.states.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index j = match[std::size_t(k)];
    out.energies(k) = sys.values(j);
    const Complex<Scalar> ov = overlap(k, j);
    out.states.col(k) = sys.vectors.col(j) * (std::conj(ov) / std::abs(ov));
  }
  return out;
}

/// |dn/dt> in the gauge <n|dn/dt> = 0, from the sum over m != n of
/// |m><m|dH0/dt|n> / (E_n - E_m).
template <typename Scalar>
CVector<Scalar> eigenstate_derivative(const TimeDependentHamiltonian<Scalar>& model, Scalar t, Eigen::Index level,
                                      const EigenFrame<Scalar>& frame) {
  const Eigen::Index n = frame.dim();
  if (level < 0 || level >= n) throw ValueError("eigenstate_derivative: level out of range");
  const CMatrix<Scalar> dh = dh0_dt(model, t).matrix();
  const CVector<Scalar> psi_n = frame.states.col(level);
  const CVector<Scalar> dh_n = dh * psi_n;
  CVector<Scalar> out = CVector<Scalar>::Zero(n);
  for (Eigen::Index m = 0; m < n; ++m) {
    if (m == level) continue;
    const Scalar gap = frame.energies(level) - frame.energies(m);
    if (std::abs(gap) <= Scalar(kDegeneracyGap))
      throw DegeneracyError("eigenstate_derivative: levels " + std::to_string(level) + " and " + std::to_string(m) +
                                " are degenerate at t=" + std::to_string(double(t)),
                            int(level), int(m));
    const CVector<Scalar> psi_m = frame.states.col(m);
    out += psi_m * (psi_m.dot(dh_n) / gap);
  }
  return out;
}

/// Closed-form eigenframe of the rotating-field model:
///   |E+> = cos(theta/2) e^{-i phi}|up> + sin(theta/2)|down>,  E+ = +mu_b0
///   |E-> = -sin(theta/2) e^{-i phi}|up> + cos(theta/2)|down>, E- = -mu_b0
/// Level 0 is |E->.
template <typename Scalar>
EigenFrame<Scalar> analytic_rotating_eigs(const RotatingFieldModel<Scalar>& model, Scalar t) {
  using C = Complex<Scalar>;
  const Scalar phi = model.omega * t;
  const Scalar c = std::cos(model.theta / 2), s = std::sin(model.theta / 2);
  const C rot = std::polar(Scalar(1), -phi);
  EigenFrame<Scalar> out;
  out.t = t;
  out.energies.resize(2);
  out.energies << -model.mu_b0, model.mu_b0;
  out.states.resize(2, 2);
  out.states << -s * rot, c * rot,
                C(c, 0), C(s, 0);
  return out;
}

/// Time derivative of the closed-form |E-> (level 0) or |E+> (level 1), in their own gauge.
template <typename Scalar>
CVector<Scalar> analytic_rotating_derivative(const RotatingFieldModel<Scalar>& model, Scalar t, Eigen::Index level) {
  const EigenFrame<Scalar> f = analytic_rotating_eigs(model, t);
  CVector<Scalar> d = CVector<Scalar>::Zero(2);
  d(0) = Complex<Scalar>(0, -model.omega) * f.states(0, level);
  return d;
}

}  // namespace adiactl
