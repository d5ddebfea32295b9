#include "cohprobe/quantum.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

namespace cohprobe::quantum {
namespace {

std::vector<double> hermitian_spectrum(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::Numerical, "eigen-decomposition failed");
  }
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

// Returns the symmetrized matrix or throws when the asymmetry is too large.
Matrix enforce_hermitian(Matrix m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorKind::NotDensityMatrix, "density matrix must be square and non-empty");
  }
  if (!std::has_single_bit(static_cast<std::size_t>(m.rows())) || m.rows() < 2) {
    throw Error(ErrorKind::NotDensityMatrix, "density matrix dimension must be 2^n with n >= 1");
  }
  const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (asym > kHermiticityTol) {
    std::ostringstream os;
    os << "matrix is not Hermitian (max asymmetry " << asym << ")";
    throw Error(ErrorKind::NotDensityMatrix, os.str());
  }
  if (asym > 0.0) {
    Matrix sym = (m + m.adjoint()) * 0.5;
    return sym;
  }
  return m;
}

void check_trace(const Matrix& m) {
  const Complex tr = m.trace();
  if (std::abs(tr.real() - 1.0) > kTraceTol || std::abs(tr.imag()) > kTraceTol) {
    std::ostringstream os;
    os << "trace is " << tr.real() << (tr.imag() >= 0 ? "+" : "") << tr.imag() << "i, expected 1";
    throw Error(ErrorKind::NotDensityMatrix, os.str());
  }
}

void check_psd(double min_eigenvalue) {
  if (min_eigenvalue < -kPsdTol) {
    std::ostringstream os;
    os << "matrix is not positive semidefinite (min eigenvalue " << min_eigenvalue << ")";
    throw Error(ErrorKind::NotDensityMatrix, os.str());
  }
}

}  // namespace

Eigen::Matrix2cd pauli(int alpha) {
  using namespace std::complex_literals;
  Eigen::Matrix2cd s;
  switch (alpha) {
    case 0:
      s << 1.0, 0.0, 0.0, 1.0;
      break;
    case 1:
      s << 0.0, 1.0, 1.0, 0.0;
      break;
    case 2:
      s << 0.0, -1.0i, 1.0i, 0.0;
      break;
    case 3:
      s << 1.0, 0.0, 0.0, -1.0;
      break;
    default:
      throw Error(ErrorKind::InvalidArgument, "Pauli index must be 0..3");
  }
  return s;
}

DensityMatrix::DensityMatrix(Matrix m) : m_(enforce_hermitian(std::move(m))) {
  check_trace(m_);
  spectrum_ = hermitian_spectrum(m_);
  check_psd(spectrum_.front());
}

DensityMatrix::DensityMatrix(Matrix m, std::vector<double> spectrum)
    : m_(enforce_hermitian(std::move(m))), spectrum_(std::move(spectrum)) {
  if (static_cast<Eigen::Index>(spectrum_.size()) != m_.rows()) {
    throw Error(ErrorKind::InvalidArgument, "spectrum size does not match matrix dimension");
  }
  std::sort(spectrum_.begin(), spectrum_.end());
  check_trace(m_);
  check_psd(spectrum_.front());
}

bool DensityMatrix::is_diagonal() const noexcept {
  for (Eigen::Index j = 0; j < m_.cols(); ++j) {
    for (Eigen::Index i = 0; i < m_.rows(); ++i) {
      if (i != j && m_(i, j) != Complex{0.0, 0.0}) return false;
    }
  }
  return true;
}

DensityMatrix reconstruct_one_site(const OneSiteExpectations& e) {
  const double r2 = e.x * e.x + e.y * e.y + e.z * e.z;
  if (!std::isfinite(r2) || r2 > 1.0 + kBlochTol) {
    std::ostringstream os;
    os << "Bloch vector (" << e.x << ", " << e.y << ", " << e.z << ") lies outside the unit ball";
    throw Error(ErrorKind::UnphysicalExpectations, os.str());
  }
  Matrix m = 0.5 * (pauli(0) + e.x * pauli(1) + e.y * pauli(2) + e.z * pauli(3));
  return DensityMatrix(std::move(m));
}

DensityMatrix reconstruct_two_site(const TwoSiteExpectations& e) {
  if (e(0, 0) != 1.0) {
    throw Error(ErrorKind::InvalidArgument, "two-site table must have c[0][0] = 1");
  }
  Matrix m = Matrix::Zero(4, 4);
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      if (e(a, b) == 0.0) continue;
      Eigen::Matrix4cd term = Eigen::kroneckerProduct(pauli(a), pauli(b));
      m += e(a, b) * term;
    }
  }
  m *= 0.25;
  std::vector<double> spectrum = hermitian_spectrum(m);
  if (spectrum.front() < -kUnphysicalTol) {
    std::ostringstream os;
    os << "unphysical expectations: reconstructed two-site matrix has eigenvalue "
       << spectrum.front();
    throw Error(ErrorKind::UnphysicalExpectations, os.str());
  }
  if (spectrum.front() < -kPsdTol) {
    std::ostringstream os;
    os << "unphysical expectations: eigenvalue " << spectrum.front()
       << " beyond the density-matrix tolerance";
    throw Error(ErrorKind::UnphysicalExpectations, os.str());
  }
  return DensityMatrix(std::move(m), std::move(spectrum));
}

OneSiteExpectations one_site_expectations(const DensityMatrix& rho) {
  if (rho.dim() != 2) {
    throw Error(ErrorKind::InvalidArgument, "one-site expectations need a 2x2 state");
  }
  const auto& m = rho.matrix();
  return {(m * pauli(1)).trace().real(), (m * pauli(2)).trace().real(),
          (m * pauli(3)).trace().real()};
}

TwoSiteExpectations two_site_expectations(const DensityMatrix& rho) {
  if (rho.dim() != 4) {
    throw Error(ErrorKind::InvalidArgument, "two-site expectations need a 4x4 state");
  }
  TwoSiteExpectations e;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      Eigen::Matrix4cd op = Eigen::kroneckerProduct(pauli(a), pauli(b));
      e(a, b) = (rho.matrix() * op).trace().real();
    }
  }
  e(0, 0) = 1.0;
  return e;
}

double shannon_entropy(std::span<const double> p) {
  double total = 0.0;
  for (double v : p) {
    if (v < -kPsdTol) {
      throw Error(ErrorKind::Numerical, "negative probability beyond clipping tolerance");
    }
    total += std::max(v, 0.0);
  }
  if (!(total > 0.0)) throw Error(ErrorKind::Numerical, "probability vector sums to zero");
  double s = 0.0;
  for (double v : p) {
    const double q = std::max(v, 0.0) / total;
    if (q > 0.0) s -= q * std::log2(q);
  }
  return std::max(s, 0.0);
}

double binary_entropy(double p) {
  const std::array<double, 2> probs{p, 1.0 - p};
  return shannon_entropy(probs);
}

double von_neumann_entropy(const DensityMatrix& rho) { return shannon_entropy(rho.spectrum()); }

DensityMatrix dephase(const DensityMatrix& rho) {
  Matrix d = Matrix::Zero(rho.dim(), rho.dim());
  std::vector<double> diag(static_cast<std::size_t>(rho.dim()));
  for (Eigen::Index i = 0; i < rho.dim(); ++i) {
    d(i, i) = Complex{rho(i, i).real(), 0.0};
    diag[static_cast<std::size_t>(i)] = rho(i, i).real();
  }
  return DensityMatrix(std::move(d), std::move(diag));
}

double coherence(const DensityMatrix& rho) {
  if (rho.is_diagonal()) return 0.0;
  std::vector<double> diag(static_cast<std::size_t>(rho.dim()));
  for (Eigen::Index i = 0; i < rho.dim(); ++i) diag[static_cast<std::size_t>(i)] = rho(i, i).real();
  const double c = shannon_entropy(diag) - von_neumann_entropy(rho);
  return std::max(c, 0.0);
}

}  // namespace cohprobe::quantum
