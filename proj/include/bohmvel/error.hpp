#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bohmvel {

enum class ErrorKind {
  InvalidInput,
  Domain,
  Configuration,
  NumericalFailure,
  NonConverged,
  NodeProximity,
  Regularity,
};

const char* to_string(ErrorKind kind) noexcept;

/// Base exception for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InvalidInputError : public Error {
 public:
  explicit InvalidInputError(const std::string& what) : Error(ErrorKind::InvalidInput, what) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::Domain, what) {}
};

class ConfigurationError : public Error {
 public:
  explicit ConfigurationError(const std::string& what) : Error(ErrorKind::Configuration, what) {}
};

class NumericalFailureError : public Error {
 public:
  NumericalFailureError(const std::string& what, std::vector<std::pair<std::string, double>> diagnostics = {})
      : Error(ErrorKind::NumericalFailure, what), diagnostics_(std::move(diagnostics)) {}
  const std::vector<std::pair<std::string, double>>& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::vector<std::pair<std::string, double>> diagnostics_;
};

/// A limit that was expected to settle did not; carries the residual sequence.
class NonConvergedError : public Error {
 public:
  NonConvergedError(const std::string& what, std::vector<double> residuals)
      : Error(ErrorKind::NonConverged, what), residuals_(std::move(residuals)) {}
  const std::vector<double>& residuals() const noexcept { return residuals_; }

 private:
  std::vector<double> residuals_;
};

class NodeProximityError : public Error {
 public:
  NodeProximityError(const std::string& what, double rho) : Error(ErrorKind::NodeProximity, what), rho_(rho) {}
  double rho() const noexcept { return rho_; }

 private:
  double rho_;
};

}  // namespace bohmvel
