#pragma once

#include <stdexcept>
#include <string>

namespace hybridpir {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inputs that are individually malformed or mutually inconsistent
// (mismatched fields, wrong shapes, bad descriptors).
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

// Argument outside the domain of an operation (inverse of zero, index out of
// range, storage ratio outside [1/N, 1]).
class DomainError : public Error {
 public:
  using Error::Error;
};

class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

class FieldTooSmallError : public ConfigurationError {
 public:
  using ConfigurationError::ConfigurationError;
};

class InsufficientSharesError : public Error {
 public:
  using Error::Error;
};

// Redundant shares that do not lie on a single codeword.
class CorruptionError : public Error {
 public:
  using Error::Error;
};

// (N, M, t, K) violates 1 <= K <= t <= N or M >= 1.
class InfeasibleParametersError : public Error {
 public:
  using Error::Error;
};

// No schedule exists at the requested subpacketization.
class FeasibilityError : public Error {
 public:
  using Error::Error;
};

// A query asked a database for a row it does not store.
class ProtocolViolationError : public Error {
 public:
  using Error::Error;
};

class DecodingIntegrityError : public Error {
 public:
  using Error::Error;
};

class EnumerationBoundError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace hybridpir
