// Time-dependent drift Hamiltonians H0(t) with analytic time derivatives.
#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "adiactl/linalg.hpp"

namespace adiactl {

/// mu*B(t).sigma with a field of fixed polar angle rotating at angular frequency omega:
/// phi = omega * t.
template <typename Scalar = double>
struct RotatingFieldModel {
  Scalar mu_b0 = 1;
  Scalar theta = std::numbers::pi_v<Scalar> / 4;
  Scalar omega = 4;

  void validate() const {
    if (!(mu_b0 > 0)) throw ValueError("RotatingFieldModel: mu_b0 must be positive");
    if (!(theta >= 0 && theta <= std::numbers::pi_v<Scalar>))
      throw ValueError("RotatingFieldModel: theta must lie in [0, pi]");
    if (!std::isfinite(omega)) throw ValueError("RotatingFieldModel: omega must be finite");
  }
};

/// Preset used by the rotating-field figures: mu_b0 = 1, omega = 4, theta = pi/4.
template <typename Scalar = double>
RotatingFieldModel<Scalar> fig1_model() {
  return {Scalar(1), std::numbers::pi_v<Scalar> / 4, Scalar(4)};
}

enum class ScheduleKind { linear, smoothstep, polyline };

/// lambda(t) on [0, T]. Polyline knots are (t, lambda) pairs spanning [0, T].
template <typename Scalar = double>
struct Schedule {
  ScheduleKind kind = ScheduleKind::linear;
  std::vector<std::pair<Scalar, Scalar>> knots;
};

template <typename Scalar>
struct ScheduleValue {
  Scalar lambda;
  Scalar lambda_dot;
};

/// (1 - lambda(t)) H_i + lambda(t) H_f for t in [0, T].
template <typename Scalar = double>
struct InterpolatedModel {
  HermitianOperator<Scalar> h_i;
  HermitianOperator<Scalar> h_f;
  Schedule<Scalar> schedule;
  Scalar total_time = 1;

  void validate() const {
    if (h_i.dim() != h_f.dim()) throw DimensionError("InterpolatedModel: h_i vs h_f", h_i.dim(), h_f.dim());
    if (!(total_time > 0)) throw ValueError("InterpolatedModel: total_time must be positive");
    if (schedule.kind == ScheduleKind::polyline) {
      const auto& k = schedule.knots;
      if (k.size() < 2) throw ValueError("InterpolatedModel: polyline needs at least two knots");
      if (k.front().first != Scalar(0) || k.back().first != total_time)
        throw ValueError("InterpolatedModel: polyline must span [0, T]");
      if (k.front().second != Scalar(0) || k.back().second != Scalar(1))
        throw ValueError("InterpolatedModel: polyline must run from lambda=0 to lambda=1");
      for (std::size_t i = 1; i < k.size(); ++i) {
        if (!(k[i].first > k[i - 1].first)) throw ValueError("InterpolatedModel: polyline times must increase");
        if (k[i].second < k[i - 1].second) throw ValueError("InterpolatedModel: polyline must be nondecreasing");
      }
    }
  }
};

/// Time-stamped operator list, linearly interpolated and re-Hermitized.
template <typename Scalar = double>
struct TabulatedModel {
  std::vector<Scalar> times;
  std::vector<CMatrix<Scalar>> matrices;

  void validate() const {
    if (times.size() < 2) throw ValueError("TabulatedModel: need at least two samples");
    if (times.size() != matrices.size())
      throw DimensionError("TabulatedModel: times vs matrices", Eigen::Index(times.size()),
                           Eigen::Index(matrices.size()));
    for (std::size_t i = 1; i < times.size(); ++i)
      if (!(times[i] > times[i - 1])) throw ValueError("TabulatedModel: times must be strictly increasing");
    const auto n = matrices.front().rows();
    for (const auto& m : matrices) {
      if (m.rows() != m.cols()) throw DimensionError("TabulatedModel: matrix not square", m.rows(), m.cols());
      if (m.rows() != n) throw DimensionError("TabulatedModel: inconsistent matrix dims", n, m.rows());
    }
  }
};

template <typename Scalar = double>
using TimeDependentHamiltonian =
    std::variant<RotatingFieldModel<Scalar>, InterpolatedModel<Scalar>, TabulatedModel<Scalar>>;

using Modeld = TimeDependentHamiltonian<double>;

/// Parses {"times": [...], "matrices": [[[re, im], ...], ...]} (defined in models.cpp).
TabulatedModel<double> load_tabulated_model(const std::string& json_text);

template <typename Scalar>
Eigen::Index model_dim(const TimeDependentHamiltonian<Scalar>& model) {
  struct {
    Eigen::Index operator()(const RotatingFieldModel<Scalar>&) const { return 2; }
    Eigen::Index operator()(const InterpolatedModel<Scalar>& m) const { return m.h_i.dim(); }
    Eigen::Index operator()(const TabulatedModel<Scalar>& m) const { return m.matrices.front().rows(); }
  } visitor;
  return std::visit(visitor, model);
}

template <typename Scalar>
ScheduleValue<Scalar> schedule_eval(const InterpolatedModel<Scalar>& model, Scalar t) {
  const Scalar T = model.total_time;
  if (!(t >= 0 && t <= T))
    throw DomainError("schedule_eval: t=" + std::to_string(double(t)) + " outside [0, " + std::to_string(double(T)) +
                      "]");
  const Scalar u = t / T;
  switch (model.schedule.kind) {
    case ScheduleKind::linear:
      return {u, Scalar(1) / T};
    case ScheduleKind::smoothstep:
      return {u * u * (Scalar(3) - Scalar(2) * u), Scalar(6) * u * (Scalar(1) - u) / T};
    case ScheduleKind::polyline: {
      const auto& k = model.schedule.knots;
      // Right-sided slope at interior knots, left-sided at T.
      std::size_t i = 1;
      while (i + 1 < k.size() && t >= k[i].first) ++i;
      const auto& [ta, la] = k[i - 1];
      const auto& [tb, lb] = k[i];
      const Scalar slope = (lb - la) / (tb - ta);
      return {la + slope * (t - ta), slope};
    }
  }
  throw ValueError("schedule_eval: unknown schedule");
}

namespace detail {

template <typename Scalar>
std::pair<std::size_t, Scalar> tabulated_segment(const TabulatedModel<Scalar>& m, Scalar t) {
  if (!(t >= m.times.front() && t <= m.times.back()))
    throw DomainError("tabulated model: t=" + std::to_string(double(t)) + " outside tabulated range");
  std::size_t i = 1;
  while (i + 1 < m.times.size() && t >= m.times[i]) ++i;
  const Scalar w = (t - m.times[i - 1]) / (m.times[i] - m.times[i - 1]);
  return {i, w};
}

}  // namespace detail

template <typename Scalar>
HermitianOperator<Scalar> h0_at(const TimeDependentHamiltonian<Scalar>& model, Scalar t) {
  struct {
    Scalar t;
    HermitianOperator<Scalar> operator()(const RotatingFieldModel<Scalar>& m) const {
      const Scalar phi = m.omega * t;
      const Scalar st = std::sin(m.theta);
      return pauli_combo<Scalar>(m.mu_b0 * st * std::cos(phi), m.mu_b0 * st * std::sin(phi),
                                 m.mu_b0 * std::cos(m.theta), 0);
    }
    HermitianOperator<Scalar> operator()(const InterpolatedModel<Scalar>& m) const {
      const auto s = schedule_eval(m, t);
      if (s.lambda == Scalar(0)) return m.h_i;
      if (s.lambda == Scalar(1)) return m.h_f;
      return (Scalar(1) - s.lambda) * m.h_i + s.lambda * m.h_f;
    }
    HermitianOperator<Scalar> operator()(const TabulatedModel<Scalar>& m) const {
      const auto [i, w] = detail::tabulated_segment(m, t);
      return HermitianOperator<Scalar>::hermitize((Scalar(1) - w) * m.matrices[i - 1] + w * m.matrices[i]);
    }
  } visitor{t};
  return std::visit(visitor, model);
}

template <typename Scalar>
HermitianOperator<Scalar> dh0_dt(const TimeDependentHamiltonian<Scalar>& model, Scalar t) {
  struct {
    Scalar t;
    HermitianOperator<Scalar> operator()(const RotatingFieldModel<Scalar>& m) const {
      const Scalar phi = m.omega * t;
      const Scalar amp = m.mu_b0 * m.omega * std::sin(m.theta);
      return pauli_combo<Scalar>(-amp * std::sin(phi), amp * std::cos(phi), 0, 0);
    }
    HermitianOperator<Scalar> operator()(const InterpolatedModel<Scalar>& m) const {
      return schedule_eval(m, t).lambda_dot * (m.h_f - m.h_i);
    }
    HermitianOperator<Scalar> operator()(const TabulatedModel<Scalar>& m) const {
      const auto [i, w] = detail::tabulated_segment(m, t);
      const Scalar span = m.times[i] - m.times[i - 1];
      return HermitianOperator<Scalar>::hermitize((m.matrices[i] - m.matrices[i - 1]) / span);
    }
  } visitor{t};
  return std::visit(visitor, model);
}

}  // namespace adiactl
