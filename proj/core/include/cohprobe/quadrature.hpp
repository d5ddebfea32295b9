#pragma once

// Deterministic adaptive quadrature: Gauss-Kronrod (10/21) on intervals and
// its tensor product on rectangles, both with global error-driven bisection.

#include <functional>
#include <string>

#include "cohprobe/error.hpp"

namespace cohprobe::quad {

struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_subdivisions = 2000;

  void validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  double err_estimate = 0.0;
  int subdivisions = 0;
};

/// Raised when the subdivision budget runs out; carries the best estimate.
class ToleranceNotReached : public Error {
 public:
  ToleranceNotReached(const std::string& what, QuadratureResult best)
      : Error(ErrorKind::ToleranceNotReached, what), best_(best) {}

  const QuadratureResult& best() const noexcept { return best_; }

 private:
  QuadratureResult best_;
};

using Integrand1d = std::function<double(double)>;
using Integrand2d = std::function<double(double, double)>;

QuadratureResult integrate_1d(const Integrand1d& f, double a, double b,
                              const QuadratureSpec& spec = {});

/// Integral over the rectangle [ax, bx] x [ay, by].
QuadratureResult integrate_2d(const Integrand2d& f, double ax, double bx, double ay, double by,
                              const QuadratureSpec& spec = {});

/// Integral over the Brillouin zone [-pi, pi]^2.
QuadratureResult integrate_2d(const Integrand2d& f, const QuadratureSpec& spec = {});

}  // namespace cohprobe::quad
