#pragma once

#include <stdexcept>
#include <string>

namespace plgraph {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (halo vertex passed where an
/// interior vertex is required, mismatched field sizes, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Graph construction would exceed the configured vertex cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Barrier parameters outside the admissible window of their family.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Linear solve failed (not SPD, no convergence, singular recurrence).
class SolverError : public Error {
 public:
  using Error::Error;
};

/// Field failed a sub/supersolution classification required by a check.
class ClassificationError : public Error {
 public:
  using Error::Error;
};

}  // namespace plgraph
