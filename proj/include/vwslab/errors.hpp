#pragma once

#include <stdexcept>
#include <string>

namespace vwslab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of an operation (e.g. ε outside the
/// guard of an iterated-logarithm scale).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature stopped with an error estimate above tolerance.
class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, double estimate)
      : Error(what), estimate_(estimate) {}
  double estimate() const { return estimate_; }

 private:
  double estimate_;
};

/// Pointwise sampling was requested for a singular distribution.
class SingularSampleError : public Error {
 public:
  using Error::Error;
};

/// A sampled field does not decay at the edge of the periodic box.
class DomainTruncationError : public Error {
 public:
  using Error::Error;
};

/// A derivative order above the configured maximum was requested.
class DerivativeOrderError : public Error {
 public:
  using Error::Error;
};

/// Malformed or schema-violating configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace vwslab
