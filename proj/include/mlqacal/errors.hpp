#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mlqacal {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input files that cannot be read or do not follow the log schemas.
/// The CLI maps this family to exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A record violates the log schema. `line` is 1-based; 0 when unknown.
class SchemaError : public InputError {
 public:
  SchemaError(std::size_t line, std::string field, const std::string& what)
      : InputError(format(line, field, what)), line_(line), field_(std::move(field)) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  static std::string format(std::size_t line, const std::string& field, const std::string& what) {
    std::string msg = "schema error";
    if (line > 0) msg += " at line " + std::to_string(line);
    if (!field.empty()) msg += " (field `" + field + "`)";
    return msg + ": " + what;
  }

  std::size_t line_;
  std::string field_;
};

/// A record carries the wrong model kind for the requested operation.
class KindError : public InputError {
 public:
  using InputError::InputError;
};

/// The input stream contained no records.
class EmptyInputError : public InputError {
 public:
  using InputError::InputError;
};

/// Invalid user-supplied configuration (bin counts, k, bounds, flags).
class ConfigError : public InputError {
 public:
  using InputError::InputError;
};

/// Domain failures: nothing to compute on, degenerate fits, shortfalls.
/// The CLI maps this family to exit code 1.
class DomainError : public Error {
 public:
  using Error::Error;
};

class ExtractionError : public DomainError {
 public:
  using DomainError::DomainError;
};

class FitError : public DomainError {
 public:
  using DomainError::DomainError;
};

class ManifestError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Correlation over a sample where one side has zero variance.
class UndefinedCorrelationError : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace mlqacal
