#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace helios {

// Base class of every error raised by the library. Callers that only care
// about "something went wrong in helios" catch this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Sample vector has the wrong length for the grid it is used with.
class InputShapeError : public Error {
 public:
  using Error::Error;
};

// A scalar parameter is outside its admissible range (eps <= 0, odd N, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Non-finite input samples.
class InputError : public Error {
 public:
  using Error::Error;
};

// Boundary geometry violates an invariant (names the invariant in what()).
class GeometryError : public Error {
 public:
  using Error::Error;
};

// Dense solve failed or its relative residual exceeded the gate.
class LinearAlgebraError : public Error {
 public:
  LinearAlgebraError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

// An independent oracle could not certify its own answer (boundary misfit
// above its gate). Comparisons against it must abort, never pass.
class OracleInconclusive : public Error {
 public:
  OracleInconclusive(const std::string& what, double misfit)
      : Error(what), misfit_(misfit) {}
  double misfit() const noexcept { return misfit_; }

 private:
  double misfit_;
};

// Sign-convention calibration identity failed.
class ConventionError : public Error {
 public:
  using Error::Error;
};

// Time stepping produced a non-finite or runaway interface.
class BlowUpError : public Error {
 public:
  BlowUpError(const std::string& what, std::size_t node, double time)
      : Error(what), node_(node), time_(time) {}
  std::size_t node() const noexcept { return node_; }
  double time() const noexcept { return time_; }

 private:
  std::size_t node_;
  double time_;
};

// Configuration file failed schema validation.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace helios
