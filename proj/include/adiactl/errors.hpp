#pragma once

#include <stdexcept>
#include <string>

namespace adiactl {

/// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid input value (non-Hermitian operator, out-of-range parameter, ...).
class ValueError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public ValueError {
 public:
  DimensionError(const std::string& what, long long lhs, long long rhs)
      : ValueError(what + ": dimension mismatch (" + std::to_string(lhs) + " vs " + std::to_string(rhs) + ")"),
        lhs_(lhs),
        rhs_(rhs) {}

  long long lhs() const { return lhs_; }
  long long rhs() const { return rhs_; }

 private:
  long long lhs_;
  long long rhs_;
};

/// Time outside a model's domain.
class DomainError : public ValueError {
 public:
  using ValueError::ValueError;
};

/// Failure of a numerical procedure on otherwise valid input.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class GaugeTrackingError : public NumericalError {
 public:
  GaugeTrackingError(const std::string& what, double t) : NumericalError(what), t_(t) {}
  double time() const { return t_; }

 private:
  double t_;
};

class DegeneracyError : public NumericalError {
 public:
  DegeneracyError(const std::string& what, int level_a, int level_b)
      : NumericalError(what), a_(level_a), b_(level_b) {}
  int level_a() const { return a_; }
  int level_b() const { return b_; }

 private:
  int a_;
  int b_;
};

}  // namespace adiactl
