#pragma once

#include <Eigen/Dense>

#include <random>

#include "cohprobe/quantum.hpp"

namespace testutil {

using cohprobe::quantum::Matrix;

// Ginibre draw G G^dagger / tr, full rank with probability one.
inline Matrix random_density(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = {n(rng), n(rng)};
  Matrix r = g * g.adjoint();
  r /= r.trace().real();
  return (r + r.adjoint()) * 0.5;
}

// Random two-qubit X state: positive diagonal, anti-diagonal within the
// positivity bound of each 2x2 block.
inline Matrix random_x_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double d[4];
  double s = 0.0;
  for (double& x : d) s += (x = u(rng) + 1e-3);
  for (double& x : d) x /= s;
  auto coherence = [&](double a, double b) {
    const double mag = std::sqrt(a * b) * u(rng);
    const double ph = 2.0 * M_PI * u(rng);
    return std::polar(mag, ph);
  };
  Matrix r = Matrix::Zero(4, 4);
  for (int i = 0; i < 4; ++i) r(i, i) = d[i];
  r(0, 3) = coherence(d[0], d[3]);
  r(3, 0) = std::conj(r(0, 3));
  r(1, 2) = coherence(d[1], d[2]);
  r(2, 1) = std::conj(r(1, 2));
  return r;
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace testutil

namespace testutil {

// Composite Simpson rule, an independent check on the adaptive integrator.
template <class F>
double simpson(F f, double a, double b, int n) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace testutil
