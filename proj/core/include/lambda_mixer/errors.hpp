#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lambda_mixer {

/// Base class of every error raised by the library. `kind()` is a stable
/// machine-readable identifier used in CLI error records.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  [[nodiscard]] virtual std::string_view kind() const noexcept = 0;
};

/// Failures of the numerical machinery (solver, integrator, detection).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Malformed or out-of-range run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

#define LAMBDA_MIXER_DEFINE_ERROR(Name, Base)                           \
  class Name : public Base {                                            \
   public:                                                              \
    using Base::Base;                                                   \
    [[nodiscard]] std::string_view kind() const noexcept override {     \
      return #Name;                                                     \
    }                                                                   \
  };

LAMBDA_MIXER_DEFINE_ERROR(ConvergenceFailure, NumericalError)
LAMBDA_MIXER_DEFINE_ERROR(AmbiguousBranch, NumericalError)
LAMBDA_MIXER_DEFINE_ERROR(DegenerateDenominator, NumericalError)
LAMBDA_MIXER_DEFINE_ERROR(StepSizeUnderflow, NumericalError)
LAMBDA_MIXER_DEFINE_ERROR(UndefinedPhase, NumericalError)
LAMBDA_MIXER_DEFINE_ERROR(NoCycleFound, NumericalError)
LAMBDA_MIXER_DEFINE_ERROR(PhaseSingularity, NumericalError)
LAMBDA_MIXER_DEFINE_ERROR(OutOfValidityRegion, NumericalError)

// A CSV artifact that does not match its declared column schema.
LAMBDA_MIXER_DEFINE_ERROR(SchemaError, Error)

#undef LAMBDA_MIXER_DEFINE_ERROR

/// Syntax error in a key = value document; line and column are 1-based.
class ParseError : public ConfigError {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what);
  [[nodiscard]] std::string_view kind() const noexcept override { return "ParseError"; }
  [[nodiscard]] std::size_t line() const noexcept { return line_; }
  [[nodiscard]] std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// A value outside its allowed range. `key()` names the offending setting.
class ValidationError : public ConfigError {
 public:
  ValidationError(std::string key, const std::string& what);
  [[nodiscard]] std::string_view kind() const noexcept override { return "ValidationError"; }
  [[nodiscard]] const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class UnknownKey : public ConfigError {
 public:
  explicit UnknownKey(std::string key);
  [[nodiscard]] std::string_view kind() const noexcept override { return "UnknownKey"; }
  [[nodiscard]] const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace lambda_mixer
