// Dense complex linear algebra for small Hermitian systems.
//
// Everything here is templated on the real scalar type; the complex entry
// type is std::complex<Scalar>. Dimensions are expected to stay small
// (n <= ~16), so the eigensolver is a cyclic complex Jacobi sweep.
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "adiactl/errors.hpp"

namespace adiactl {

template <typename Scalar>
using Complex = std::complex<Scalar>;

template <typename Scalar>
using CMatrix = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using CVector = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, 1>;

template <typename Scalar>
using RVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

inline constexpr double kHermitianTol = 1e-12;

namespace detail {

template <typename Scalar>
bool all_finite(const CMatrix<Scalar>& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
  return true;
}

template <typename Scalar>
Scalar max_antihermitian_residue(const CMatrix<Scalar>& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline void require_same_dim(Eigen::Index a, Eigen::Index b, const char* what) {
  if (a != b) throw DimensionError(what, a, b);
}

}  // namespace detail

/// A dense complex matrix that is Hermitian within kHermitianTol entrywise.
///
/// Construction validates squareness, finiteness and Hermiticity. Sums and
/// real multiples of Hermitian operators stay Hermitian and skip the check.
template <typename Scalar = double>
class HermitianOperator {
 public:
  using Matrix = CMatrix<Scalar>;

  HermitianOperator() = default;

  explicit HermitianOperator(Matrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols())
      throw DimensionError("HermitianOperator: matrix is not square", m_.rows(), m_.cols());
    if (m_.rows() == 0) throw ValueError("HermitianOperator: empty matrix");
    if (!detail::all_finite<Scalar>(m_)) throw ValueError("HermitianOperator: non-finite entry");
    const Scalar residue = detail::max_antihermitian_residue<Scalar>(m_);
    if (residue > Scalar(kHermitianTol))
      throw ValueError("HermitianOperator: matrix differs from its adjoint by " + std::to_string(double(residue)));
  }

  /// Projects an arbitrary square matrix onto its Hermitian part (A + A^dagger)/2.
  static HermitianOperator hermitize(const Matrix& m) {
    if (m.rows() != m.cols())
      throw DimensionError("HermitianOperator::hermitize: matrix is not square", m.rows(), m.cols());
    return HermitianOperator(Matrix((m + m.adjoint()) / Scalar(2)), Trusted{});
  }

  static HermitianOperator zero(Eigen::Index dim) { return HermitianOperator(Matrix::Zero(dim, dim), Trusted{}); }
  static HermitianOperator identity(Eigen::Index dim) {
    return HermitianOperator(Matrix::Identity(dim, dim), Trusted{});
  }

  const Matrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }

  HermitianOperator& operator+=(const HermitianOperator& o) {
    detail::require_same_dim(dim(), o.dim(), "HermitianOperator +=");
    m_ += o.m_;
    return *this;
  }
  HermitianOperator& operator-=(const HermitianOperator& o) {
    detail::require_same_dim(dim(), o.dim(), "HermitianOperator -=");
    m_ -= o.m_;
    return *this;
  }
  HermitianOperator& operator*=(Scalar s) {
    m_ *= s;
    return *this;
  }

  friend HermitianOperator operator+(HermitianOperator a, const HermitianOperator& b) { return a += b; }
  friend HermitianOperator operator-(HermitianOperator a, const HermitianOperator& b) { return a -= b; }
  friend HermitianOperator operator*(Scalar s, HermitianOperator a) { return a *= s; }
  friend HermitianOperator operator*(HermitianOperator a, Scalar s) { return a *= s; }

 private:
  struct Trusted {};
  HermitianOperator(Matrix m, Trusted) : m_(std::move(m)) {}

  Matrix m_;
};

/// Unit-norm state. `normalized` rescales its input; `from_propagated` keeps the
/// amplitudes as produced by an integrator so that norm drift stays observable.
template <typename Scalar = double>
class StateVector {
 public:
  using Vector = CVector<Scalar>;

  StateVector() = default;

  static StateVector normalized(const Vector& v) {
    const Scalar n = v.norm();
    if (!(n > Scalar(1e-14))) throw ValueError("StateVector: cannot normalize a (near) zero vector");
    return StateVector(Vector(v / n));
  }

  static StateVector from_propagated(Vector v) { return StateVector(std::move(v)); }

  const Vector& amplitudes() const { return v_; }
  Eigen::Index dim() const { return v_.size(); }
  Scalar norm() const { return v_.norm(); }

 private:
  explicit StateVector(Vector v) : v_(std::move(v)) {}
  Vector v_;
};

using HermitianOperatord = HermitianOperator<double>;
using StateVectord = StateVector<double>;

template <typename Scalar>
StateVector<Scalar> normalize(const CVector<Scalar>& v) {
  return StateVector<Scalar>::normalized(v);
}

/// [a, b] = ab - ba. Anti-Hermitian for Hermitian a, b.
template <typename Scalar>
CMatrix<Scalar> commutator(const HermitianOperator<Scalar>& a, const HermitianOperator<Scalar>& b) {
  detail::require_same_dim(a.dim(), b.dim(), "commutator");
  return a.matrix() * b.matrix() - b.matrix() * a.matrix();
}

/// <psi|m|psi> without any reality assertion.
template <typename Scalar>
Complex<Scalar> expectation_complex(const CMatrix<Scalar>& m, const CVector<Scalar>& psi) {
  detail::require_same_dim(m.rows(), psi.size(), "expectation_complex");
  return psi.dot(m * psi);  // Eigen's dot conjugates the left operand
}

/// Real expectation value of a Hermitian operator.
template <typename Scalar>
Scalar expectation(const HermitianOperator<Scalar>& op, const CVector<Scalar>& psi) {
  const Complex<Scalar> raw = expectation_complex<Scalar>(op.matrix(), psi);
  if (std::abs(raw.imag()) > Scalar(1e-10))
    throw NumericalError("expectation: imaginary part " + std::to_string(double(raw.imag())) +
                         " exceeds 1e-10; operator is not Hermitian enough");
  return raw.real();
}

template <typename Scalar>
Scalar expectation(const HermitianOperator<Scalar>& op, const StateVector<Scalar>& psi) {
  return expectation(op, psi.amplitudes());
}

/// cx*sx + cy*sy + cz*sz + cid*I for a two-level system.
template <typename Scalar = double>
HermitianOperator<Scalar> pauli_combo(Scalar cx, Scalar cy, Scalar cz, Scalar cid) {
  using C = Complex<Scalar>;
  CMatrix<Scalar> m(2, 2);
  m << C(cz + cid, 0), C(cx, -cy),
       C(cx, cy), C(-cz + cid, 0);
  return HermitianOperator<Scalar>(m);
}

template <typename Scalar>
struct Eigensystem {
  RVector<Scalar> values;    // ascending
  CMatrix<Scalar> vectors;   // orthonormal columns
};

namespace detail {

// One complex Jacobi rotation zeroing a(p, q). Accumulates into v.
template <typename Scalar>
void jacobi_rotate(CMatrix<Scalar>& a, CMatrix<Scalar>& v, Eigen::Index p, Eigen::Index q) {
  using C = Complex<Scalar>;
  const C apq = a(p, q);
  const Scalar mag = std::abs(apq);
  if (mag == Scalar(0)) return;
  const C phase = apq / mag;  // e^{i alpha}
  const Scalar app = a(p, p).real();
  const Scalar aqq = a(q, q).real();
  const Scalar theta = (aqq - app) / (Scalar(2) * mag);
  const Scalar t = (theta >= 0 ? Scalar(1) : Scalar(-1)) / (std::abs(theta) + std::sqrt(theta * theta + Scalar(1)));
  const Scalar c = Scalar(1) / std::sqrt(t * t + Scalar(1));
  const Scalar s = t * c;

  // U = diag(1, conj(phase)) * [[c, s], [-s, c]] restricted to (p, q).
  const C upp(c, 0), upq(s, 0);
  const C uqp = -s * std::conj(phase);
  const C uqq = c * std::conj(phase);

  const Eigen::Index n = a.rows();
  for (Eigen::Index k = 0; k < n; ++k) {  // a <- a U
    const C akp = a(k, p), akq = a(k, q);
    a(k, p) = akp * upp + akq * uqp;
    a(k, q) = akp * upq + akq * uqq;
  }
  for (Eigen::Index k = 0; k < n; ++k) {  // a <- U^dagger a
    const C apk = a(p, k), aqk = a(q, k);
    a(p, k) = std::conj(upp) * apk + std::conj(uqp) * aqk;
    a(q, k) = std::conj(upq) * apk + std::conj(uqq) * aqk;
  }
  a(p, q) = C(0);
  a(q, p) = C(0);
  a(p, p) = C(a(p, p).real(), 0);
  a(q, q) = C(a(q, q).real(), 0);
  for (Eigen::Index k = 0; k < n; ++k) {  // v <- v U
    const C vkp = v(k, p), vkq = v(k, q);
    v(k, p) = vkp * upp + vkq * uqp;
    v(k, q) = vkp * upq + vkq * uqq;
  }
}

template <typename Scalar>
Scalar off_diagonal_norm(const CMatrix<Scalar>& a) {
  Scalar acc = 0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (i != j) acc += std::norm(a(i, j));
  return std::sqrt(acc);
}

// Rotates column k so that its first component with modulus above `floor` is real positive.
template <typename Scalar>
void fix_leading_phase(CMatrix<Scalar>& v, Eigen::Index k) {
  const Scalar floor = Scalar(1e-12);
  for (Eigen::Index i = 0; i < v.rows(); ++i) {
    const Scalar mag = std::abs(v(i, k));
    if (mag > floor) {
      v.col(k) *= std::conj(v(i, k)) / mag;
      return;
    }
  }
}

}  // namespace detail

/// Eigendecomposition of a Hermitian operator by cyclic Jacobi rotations.
///
/// Eigenvalues come back ascending, eigenvectors as orthonormal columns whose
/// first non-negligible component is real positive. A 2x2 input needs exactly
/// one rotation. Output is a deterministic function of the input.
template <typename Scalar>
Eigensystem<Scalar> eigh(const HermitianOperator<Scalar>& op) {
  const Eigen::Index n = op.dim();
  CMatrix<Scalar> a = op.matrix();
  CMatrix<Scalar> v = CMatrix<Scalar>::Identity(n, n);

  if (n == 2) {
    detail::jacobi_rotate<Scalar>(a, v, 0, 1);
  } else if (n > 2) {
    const Scalar scale = std::max(a.cwiseAbs().maxCoeff(), std::numeric_limits<Scalar>::min());
    const Scalar tol = std::numeric_limits<Scalar>::epsilon() * scale;
    constexpr int kMaxSweeps = 100;
    int sweep = 0;
    for (; sweep < kMaxSweeps && detail::off_diagonal_norm<Scalar>(a) > tol; ++sweep)
      for (Eigen::Index p = 0; p < n - 1; ++p)
        for (Eigen::Index q = p + 1; q < n; ++q) detail::jacobi_rotate<Scalar>(a, v, p, q);
    if (sweep == kMaxSweeps) throw NumericalError("eigh: Jacobi sweeps did not converge");
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i).real() < a(j, j).real(); });

  Eigensystem<Scalar> out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = a(order[std::size_t(k)], order[std::size_t(k)]).real();
    out.vectors.col(k) = v.col(order[std::size_t(k)]);
    detail::fix_leading_phase<Scalar>(out.vectors, k);
  }
  return out;
}

}  // namespace adiactl
