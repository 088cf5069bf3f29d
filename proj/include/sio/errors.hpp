#pragma once

#include <stdexcept>
#include <string>

namespace sio {

// Base of every error raised by the library. The CLI maps ParseError to exit
// code 2 and everything else derived from Error to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input document or option value.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Non-finite scalar handed to a constructor.
class NonFiniteError : public Error {
 public:
  using Error::Error;
};

// A matrix or Bloch vector that is not a valid qubit state.
class InvalidStateError : public Error {
 public:
  using Error::Error;
};

// A Kraus list that violates completeness or is empty.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Channel lacks the class (bistochastic SIO) an operation requires.
class ClassificationError : public Error {
 public:
  using Error::Error;
};

// Pauli transfer matrix is not of the expected block form.
class StructureError : public Error {
 public:
  using Error::Error;
};

class InvalidParametersError : public Error {
 public:
  using Error::Error;
};

// Transfer parameters that no bistochastic SIO realizes.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// Pauli-only decomposition requested on complex b parameters.
class NotApplicableError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class LimitError : public Error {
 public:
  using Error::Error;
};

}  // namespace sio
