#pragma once

#include <stdexcept>
#include <string>

namespace bubblefem {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument or violated precondition (bad mesh, n out of range, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Evaluation point outside the domain of a field or exact solution.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Operator/parameter combination for which a bubble coefficient is undefined
/// (vanishing closed-form denominator or numerically singular Gram matrix).
class DegenerateOperatorError : public Error {
 public:
  using Error::Error;
};

/// Boundary-value problem without any Dirichlet condition.
class IllPosedError : public Error {
 public:
  using Error::Error;
};

class AssemblyError : public Error {
 public:
  using Error::Error;
};

class LinearSolveError : public Error {
 public:
  using Error::Error;
};

}  // namespace bubblefem
