#pragma once

#include <stdexcept>
#include <string>

namespace edpp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (Im tau <= 0, t <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure could not reach its stated precision. Carries the
/// best estimate obtained before giving up.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double best_estimate = 0.0)
      : Error(what), best_estimate_(best_estimate) {}
  double best_estimate() const noexcept { return best_estimate_; }

 private:
  double best_estimate_;
};

class InvalidSpecError : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

/// Input for which the requested quantity is undefined (e.g. 0/0 residuals).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

class IllConditionedError : public Error {
 public:
  using Error::Error;
};

/// A quantity that must be real came out with a non-negligible imaginary part.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

class UnderflowError : public Error {
 public:
  using Error::Error;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

}  // namespace edpp
