#pragma once

#include <stdexcept>
#include <string>

namespace regulink {

// Root of every error the library raises. The CLI maps the subclasses onto
// exit codes: usage 2, I/O 3, numerically inconclusive 4, anything else 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input outside the mathematical domain of an operation (non-unit
// quaternion, non-orthogonal matrix, zero frame input, m <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A map evaluation produced a non-finite value.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

// Projection pole (or chart overlap) too close to a singular point.
class ProjectionError : public Error {
 public:
  using Error::Error;
};

// Value is a critical value of the map (zero or rank-deficient differential).
class NotRegularError : public Error {
 public:
  using Error::Error;
};

// The corrector failed to converge back onto the fiber.
class TracingError : public Error {
 public:
  using Error::Error;
};

// Continuation hit the step budget without returning to its start.
class NonClosureError : public Error {
 public:
  using Error::Error;
};

// Two loops are too close for a reliable linking number; refine the trace.
class ProximityError : public Error {
 public:
  using Error::Error;
};

// An estimate failed its residual or standard-error gate; more samples (or a
// finer step) are needed.
class InconclusiveError : public Error {
 public:
  using Error::Error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace regulink
