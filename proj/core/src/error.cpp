#include "cohprobe/error.hpp"

namespace cohprobe {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument:
      return "invalid argument";
    case ErrorKind::NotDensityMatrix:
      return "not a density matrix";
    case ErrorKind::UnphysicalExpectations:
      return "unphysical expectations";
    case ErrorKind::Numerical:
      return "numerical error";
    case ErrorKind::ToleranceNotReached:
      return "tolerance not reached";
    case ErrorKind::BoundaryMaximum:
      return "boundary maximum";
    case ErrorKind::FitError:
      return "fit error";
  }
  return "unknown error";
}

}  // namespace cohprobe
