#pragma once

#include <stdexcept>
#include <string>

namespace cnsdecay {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Field or array dimensions disagree with the grid they are used with.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An argument lies outside the mathematical domain of an operation
/// (negative time, zero frequency, empty window, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Raised by eigenmodes() at xi = 0; callers treat the zero mode as constant.
class ZeroFrequencyError : public DomainError {
 public:
  ZeroFrequencyError() : DomainError("symbol has no mode decomposition at zero frequency") {}
};

/// Density 1 + rho dropped to or below zero somewhere on the grid.
class PositivityError : public Error {
 public:
  PositivityError(const std::string& what, double min_density)
      : Error(what), min_density_(min_density) {}
  double min_density() const noexcept { return min_density_; }

 private:
  double min_density_;
};

/// Non-finite values appeared in a field.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature failed to meet its tolerance.
class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, double achieved_relative_error)
      : Error(what), achieved_(achieved_relative_error) {}
  double achieved_relative_error() const noexcept { return achieved_; }

 private:
  double achieved_;
};

/// A series-level check received too few samples or too short a window.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

/// Fit input contains a nonpositive value inside the fit window.
class NonPositiveValueError : public Error {
 public:
  NonPositiveValueError(const std::string& what, std::size_t sample_index)
      : Error(what), index_(sample_index) {}
  std::size_t sample_index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Invalid configuration; carries the offending dotted key.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Initial data cannot satisfy the requested constraints.
class InitialDataError : public Error {
 public:
  InitialDataError(const std::string& what, double max_admissible_amplitude = 0.0)
      : Error(what), max_amplitude_(max_admissible_amplitude) {}
  double max_admissible_amplitude() const noexcept { return max_amplitude_; }

 private:
  double max_amplitude_;
};

/// Malformed checkpoint or artifact file.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace cnsdecay
