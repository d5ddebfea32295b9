#pragma once

// One-dimensional maximization helpers shared by the sweep and locus code.

#include <functional>
#include <vector>

namespace cohprobe::optimize {

/// Maximize a unimodal f on [a, b] by golden-section search; returns the
/// abscissa once the bracket is narrower than tol.
double golden_section_max(const std::function<double(double)>& f, double a, double b, double tol);

struct GridMaximum {
  std::size_t index = 0;
  double x = 0.0;
  double value = 0.0;
  bool tie = false;
  bool at_boundary = false;
};

/// Argmax over sampled values. Ties (another sample within tie_tol of the
/// maximum) resolve to the smallest x and set the tie flag.
GridMaximum grid_argmax(const std::vector<double>& xs, const std::vector<double>& values,
                        double tie_tol = 1e-12);

/// Uniform grid lo, lo + step, ..., up to hi (hi included when it lands within
/// step * 1e-9 of a grid point).
std::vector<double> uniform_grid(double lo, double hi, double step);

}  // namespace cohprobe::optimize
