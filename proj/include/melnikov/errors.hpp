#pragma once

#include <stdexcept>
#include <string>

namespace melnikov {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a formula (e.g. LV Hamiltonian at x <= 0).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Energy or degree outside the admissible range.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Energy inside the guard band around a center or saddle level.
class DegenerateOvalError : public Error {
 public:
  using Error::Error;
};

/// Quadrature failed to converge; carries the best estimate reached.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double estimate, double error_estimate)
      : Error(what), estimate_(estimate), error_estimate_(error_estimate) {}
  double estimate() const noexcept { return estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double estimate_;
  double error_estimate_;
};

/// Index pattern the recurrences cannot reach.
class UnsupportedIndexError : public Error {
 public:
  using Error::Error;
};

/// Caller violated a documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// An invariant the construction guarantees did not hold.
class InternalError : public Error {
 public:
  using Error::Error;
};

/// Evaluation requested too close to a singular locus of a PF/Riccati relation.
class NearSingularError : public Error {
 public:
  using Error::Error;
};

/// A ratio of integrals was requested where its denominator (nearly) vanishes.
class RatioDenominatorError : public Error {
 public:
  using Error::Error;
};

/// Trajectory integration failed (step underflow, event cap, escape).
class IntegrationError : public Error {
 public:
  using Error::Error;
};

/// Counted structure contradicts a claim the code relies on.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace melnikov
