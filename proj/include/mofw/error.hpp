#pragma once

#include <stdexcept>
#include <string>

namespace mofw {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A point violates the polytope beyond the allowed tolerance.
class InfeasiblePoint : public Error {
 public:
  using Error::Error;
};

/// A precondition on a numeric argument is violated (bad direction, bad weights, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A subproblem LP came back infeasible, unbounded, or hit its pivot budget.
class LpFailure : public Error {
 public:
  using Error::Error;
};

/// Backtracking or halving budget exhausted, or an iterative routine failed to converge.
class ConvergenceFailure : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace mofw
