#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace edaplan {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. Carries the 1-based line (and column when known).
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column = 0);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Input that is legal in the full language but outside the supported subset.
class UnsupportedConstruct : public ParseError {
 public:
  using ParseError::ParseError;
};

/// Well-formed input that violates a structural rule (dangling reference, duplicate key...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A caller broke a documented precondition (shape mismatch, non-positive runtime...).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// Inconsistent configuration: missing price row, mixed applications, empty dataset.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Operation invoked on an object in the wrong state (untrained model, infeasible plan).
class StateError : public Error {
 public:
  using Error::Error;
};

/// Model or data file that cannot be read back.
class LoadError : public Error {
 public:
  using Error::Error;
};

class VersionError : public LoadError {
 public:
  using LoadError::LoadError;
};

}  // namespace edaplan
