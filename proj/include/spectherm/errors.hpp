#pragma once

#include <stdexcept>
#include <string>

namespace spectherm {

/// Base for every error raised by the library that is not a plain argument
/// or domain violation.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Arithmetic or solver breakdown (maps to CLI exit code 3).
class NumericalError : public Error {
 public:
  using Error::Error;
};

class BasisConstructionError : public NumericalError {
 public:
  BasisConstructionError(const std::string& what, int degree)
      : NumericalError(what), degree_(degree) {}
  int degree() const noexcept { return degree_; }

 private:
  int degree_;
};

/// The 2x2 lifting system for a pair of opposite sides is singular.
class DegenerateBoundaryError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class IllConditionedBasisError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class AssemblyAccuracyError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class InstabilityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Non-finite state encountered while time stepping.
class NumericalFailure : public NumericalError {
 public:
  NumericalFailure(const std::string& what, long step)
      : NumericalError(what), step_(step) {}
  long step() const noexcept { return step_; }

 private:
  long step_;
};

class OracleError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Operation not defined for the given cell shape (maps to exit code 4).
class UnsupportedShapeError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file or configuration (maps to exit code 2).
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line = 0)
      : Error(line > 0 ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace spectherm
