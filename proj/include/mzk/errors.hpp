#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mzk {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid grid sizes, periods, config values or preconditions on inputs.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

/// Wavenumber grid too coarse for the requested cutoff support.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// A time integral was requested over a single sample.
class QuadratureError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> residuals)
      : Error(what), residual_history(std::move(residuals)) {}
  std::vector<double> residual_history;
};

class InstabilityError : public Error {
 public:
  using Error::Error;
};

/// Picard iterates grew instead of contracting.
class ContractionError : public Error {
 public:
  ContractionError(const std::string& what, std::vector<double> norms)
      : Error(what), iterate_norms(std::move(norms)) {}
  std::vector<double> iterate_norms;
};

class FitError : public Error {
 public:
  using Error::Error;
};

/// Snapshot or CSV content that cannot be decoded.
class FormatError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace mzk
