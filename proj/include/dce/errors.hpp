#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace dce {

/// Base of every error raised by the library. `module()` names the component
/// that raised it so orchestration code can report provenance.
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& what)
      : std::runtime_error(module + ": " + what), module_(std::move(module)) {}
  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// integrator
class StepUnderflow : public Error {
 public:
  explicit StepUnderflow(const std::string& what) : Error("integrator", what) {}
};
class NonFiniteState : public Error {
 public:
  explicit NonFiniteState(const std::string& what) : Error("integrator", what) {}
};

// bogoliubov
class TimeBeforeMotionStop : public Error {
 public:
  explicit TimeBeforeMotionStop(const std::string& what) : Error("bogoliubov", what) {}
};

// extrapolation
class InsufficientLevels : public Error {
 public:
  explicit InsufficientLevels(const std::string& what) : Error("extrapolation", what) {}
};
class NonGeometricNs : public Error {
 public:
  explicit NonGeometricNs(const std::string& what) : Error("extrapolation", what) {}
};

// conformal
class NoConvergence : public Error {
 public:
  explicit NoConvergence(const std::string& what) : Error("conformal", what) {}
};
class MaxReflectionsExceeded : public Error {
 public:
  explicit MaxReflectionsExceeded(const std::string& what) : Error("conformal", what) {}
};
class DerivativeUnavailable : public Error {
 public:
  explicit DerivativeUnavailable(const std::string& what) : Error("conformal", what) {}
};

// cli
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error("cli", what) {}
};

}  // namespace dce
