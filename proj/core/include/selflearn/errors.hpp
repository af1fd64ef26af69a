#pragma once

#include <stdexcept>
#include <string>

namespace selflearn {

/// Coarse error classes. The command-line tool maps these to exit codes
/// (config 2, data 3, numerical 4).
enum class ErrorCategory { config, data, numerical };

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

/// Invalid configuration or argument value (out-of-range parameter, bad flag).
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorCategory::config, what) {}
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorCategory::config, what) {}
};

/// Operand dimensions do not agree.
class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& what) : Error(ErrorCategory::data, what) {}
};

/// Class symbols cannot be mapped onto a two-value encoding.
class EncodingError : public Error {
 public:
  explicit EncodingError(const std::string& what) : Error(ErrorCategory::data, what) {}
};

/// Dataset ingestion and splitting failures. `kind` distinguishes the cause.
class DataError : public Error {
 public:
  enum class Kind {
    missing_file,
    missing_column,
    non_numeric,
    missing_value,
    too_many_classes,
    malformed,
    insufficient_rows,
    class_presence,
  };

  DataError(Kind kind, const std::string& what) : Error(ErrorCategory::data, what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// The regularized normal matrix is singular (only possible at lambda = 0).
class RankDeficiencyError : public Error {
 public:
  explicit RankDeficiencyError(const std::string& what)
      : Error(ErrorCategory::numerical, what) {}
};

/// An internal invariant was violated at runtime (e.g. BCD objective went up).
class InvariantViolation : public Error {
 public:
  explicit InvariantViolation(const std::string& what)
      : Error(ErrorCategory::numerical, what) {}
};

int exit_code(ErrorCategory category) noexcept;

}  // namespace selflearn
