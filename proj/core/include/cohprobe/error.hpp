#pragma once

#include <stdexcept>
#include <string>

namespace cohprobe {

enum class ErrorKind {
  InvalidArgument,
  NotDensityMatrix,
  UnphysicalExpectations,
  Numerical,
  ToleranceNotReached,
  BoundaryMaximum,
  FitError,
};

const char* to_string(ErrorKind kind) noexcept;

/// Base exception for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace cohprobe
