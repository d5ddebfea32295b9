#pragma once

// Pauli algebra, reduced density matrices and the relative-entropy coherence
// measure C(rho) = S(rho_diag) - S(rho), always in the sigma^z product basis.

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "cohprobe/error.hpp"

namespace cohprobe::quantum {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

inline constexpr double kHermiticityTol = 1e-12;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kUnphysicalTol = 1e-8;
inline constexpr double kBlochTol = 1e-10;

/// Pauli matrix sigma^alpha with alpha in {0,1,2,3} = {I, x, y, z}.
Eigen::Matrix2cd pauli(int alpha);

/// Hermitian, unit-trace, positive semidefinite matrix.
///
/// Construction validates the invariants. Asymmetry below kHermiticityTol is
/// removed by symmetrizing; anything larger is rejected. The spectrum is
/// computed once and cached, so entropy queries are cheap.
class DensityMatrix {
 public:
  explicit DensityMatrix(Matrix m);

  /// Trusted spectral construction: `spectrum` must be the eigenvalues of `m`.
  /// Used by callers that already diagonalized (e.g. Gibbs states) to avoid a
  /// second decomposition. Hermiticity and trace are still checked.
  DensityMatrix(Matrix m, std::vector<double> spectrum);

  Eigen::Index dim() const noexcept { return m_.rows(); }
  const Matrix& matrix() const noexcept { return m_; }
  Complex operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  /// Eigenvalues in ascending order.
  std::span<const double> spectrum() const noexcept { return spectrum_; }
  double min_eigenvalue() const noexcept { return spectrum_.front(); }

  bool is_diagonal() const noexcept;

 private:
  Matrix m_;
  std::vector<double> spectrum_;
};

struct OneSiteExpectations {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// Two-site Pauli table c[a][b] = <sigma^a (x) sigma^b>, with c[0][0] = 1.
struct TwoSiteExpectations {
  std::array<std::array<double, 4>, 4> c{{{1.0, 0.0, 0.0, 0.0},
                                          {0.0, 0.0, 0.0, 0.0},
                                          {0.0, 0.0, 0.0, 0.0},
                                          {0.0, 0.0, 0.0, 0.0}}};

  double& operator()(int a, int b) { return c[a][b]; }
  double operator()(int a, int b) const { return c[a][b]; }
};

/// (I + x sigma^x + y sigma^y + z sigma^z) / 2.
DensityMatrix reconstruct_one_site(const OneSiteExpectations& e);

/// sum_{a,b} c[a][b] sigma^a (x) sigma^b / 4. Throws UnphysicalExpectations
/// when the reconstruction has an eigenvalue below -kUnphysicalTol.
DensityMatrix reconstruct_two_site(const TwoSiteExpectations& e);

/// tr(rho sigma^a) for a 2x2 state.
OneSiteExpectations one_site_expectations(const DensityMatrix& rho);

/// tr(rho sigma^a (x) sigma^b) for a 4x4 state.
TwoSiteExpectations two_site_expectations(const DensityMatrix& rho);

/// -sum p log2 p over a probability vector. Entries in [-kPsdTol, 0) are
/// clipped to zero and the remainder renormalized.
double shannon_entropy(std::span<const double> p);

/// Binary entropy H2(p) in bits.
double binary_entropy(double p);

/// Von Neumann entropy in bits.
double von_neumann_entropy(const DensityMatrix& rho);

/// Remove every off-diagonal entry.
DensityMatrix dephase(const DensityMatrix& rho);

/// Relative-entropy coherence in bits; clipped to be non-negative.
double coherence(const DensityMatrix& rho);

}  // namespace cohprobe::quantum
