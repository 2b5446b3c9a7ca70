#pragma once

#include <stdexcept>
#include <string>

namespace daelti {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Matrix dimensions or entries are inconsistent with the operation.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Malformed input text (matrix files, problem JSON, CSV).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Time grid is too short, non-uniform or not increasing.
class GridError : public Error {
 public:
  using Error::Error;
};

/// A least-squares system that should be exactly solvable was not.
class ResidualTooLarge : public Error {
 public:
  using Error::Error;
};

/// A subspace expected to be invariant under a map is not.
class NotInvariant : public Error {
 public:
  using Error::Error;
};

/// Two realizations are not related by a feedback transformation.
class NotEquivalent : public Error {
 public:
  using Error::Error;
};

/// Riccati integration produced non-finite entries.
class NonFiniteP : public Error {
 public:
  using Error::Error;
};

/// No stabilizing gain could be found to start the Newton iteration.
class NoStabilizingStart : public Error {
 public:
  using Error::Error;
};

/// The initial value z is not in the consistency space.
class InconsistentInitialState : public Error {
 public:
  using Error::Error;
};

/// The DAE is not behaviorally stabilizable from the given initial value.
class NotStabilizable : public Error {
 public:
  using Error::Error;
};

/// A closed-loop replay violated its algebraic feedback constraint.
class ConstraintViolated : public Error {
 public:
  using Error::Error;
};

}  // namespace daelti
