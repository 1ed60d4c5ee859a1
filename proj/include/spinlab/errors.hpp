#pragma once

#include <stdexcept>
#include <string>

namespace spinlab {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dimension product exceeds the Hilbert-space cap.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Operand shapes do not match the requested operation.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Input outside the mathematical domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Lattice or system size outside the supported range.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// Model violates the normalization convention of the Hamiltonian (irregular graph).
class ConventionError : public Error {
 public:
  using Error::Error;
};

class IterationError : public Error {
 public:
  using Error::Error;
};

/// Iterative eigensolver did not converge; the message carries the residual trace.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// Analytic formula evaluated outside the range where it is a physical state.
class ParameterRangeError : public Error {
 public:
  using Error::Error;
};

/// Malformed or invariant-violating input document.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace spinlab
