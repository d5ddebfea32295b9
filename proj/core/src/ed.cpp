#include "cohprobe/ed.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <sstream>

namespace cohprobe::ed {
namespace {

using quantum::Complex;

int spin(std::uint32_t s, int site) { return ((s >> site) & 1u) ? -1 : 1; }

// Calls emit(target, amplitude) for every nonzero <target|H|s>.
template <class Emit>
void for_each_element(const ChainSpec& spec, const std::vector<std::pair<int, int>>& bonds,
                      std::uint32_t s, Emit&& emit) {
  double diagonal = 0.0;
  if (spec.model == Model::Tfim) {
    const bool field_convention = spec.convention == tfim::Convention::FieldOverCoupling;
    const double coupling = field_convention ? 1.0 : spec.lambda;
    const double field = field_convention ? spec.lambda : 1.0;
    for (const auto& [i, j] : bonds) diagonal -= coupling * spin(s, i) * spin(s, j);
    if (field != 0.0) {
      for (int i = 0; i < spec.n_sites; ++i) emit(s ^ (1u << i), -field);
    }
  } else {
    // -1/2 (xx + yy) swaps antiparallel neighbours with amplitude -1.
    for (const auto& [i, j] : bonds) {
      if (spin(s, i) != spin(s, j)) emit(s ^ (1u << i) ^ (1u << j), -1.0);
    }
    for (int i = 0; i < spec.n_sites; ++i) diagonal -= spec.lambda * spin(s, i);
  }
  emit(s, diagonal);
}

std::uint32_t rotate(std::uint32_t s, int n) {
  const std::uint32_t mask = (1u << n) - 1u;
  return ((s << 1) | (s >> (n - 1))) & mask;
}

// Bits of `keep` sites of state s, first site most significant.
std::uint32_t gather(std::uint32_t s, std::span<const int> keep) {
  std::uint32_t a = 0;
  for (int site : keep) a = (a << 1) | ((s >> site) & 1u);
  return a;
}

std::uint32_t scatter(std::uint32_t a, std::span<const int> keep) {
  std::uint32_t s = 0;
  const auto k = keep.size();
  for (std::size_t i = 0; i < k; ++i) {
    const std::uint32_t bit = (a >> (k - 1 - i)) & 1u;
    s |= bit << keep[i];
  }
  return s;
}

void check_keep(std::span<const int> keep, int n_sites) {
  if (keep.empty() || keep.size() > 2) {
    throw Error(ErrorKind::InvalidArgument, "reduce keeps one or two sites");
  }
  for (int site : keep) {
    if (site < 0 || site >= n_sites) {
      std::ostringstream os;
      os << "site index " << site << " outside a chain of " << n_sites << " sites";
      throw Error(ErrorKind::InvalidArgument, os.str());
    }
  }
  if (keep.size() == 2 && keep[0] == keep[1]) {
    throw Error(ErrorKind::InvalidArgument, "kept sites must be distinct");
  }
}

int sites_of_dimension(Eigen::Index dim) {
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  if ((Eigen::Index{1} << n) != dim) {
    throw Error(ErrorKind::InvalidArgument, "matrix dimension is not a power of two");
  }
  return n;
}

quantum::Matrix trace_out(const Eigen::Ref<const Eigen::VectorXcd>& psi, int n_sites,
                          std::span<const int> keep) {
  const std::uint32_t kdim = 1u << keep.size();
  std::uint32_t keep_mask = 0;
  for (int site : keep) keep_mask |= 1u << site;
  std::vector<std::uint32_t> placed(kdim);
  for (std::uint32_t a = 0; a < kdim; ++a) placed[a] = scatter(a, keep);

  quantum::Matrix r = quantum::Matrix::Zero(kdim, kdim);
  const std::uint32_t dim = 1u << n_sites;
  for (std::uint32_t s = 0; s < dim; ++s) {
    const Complex amp = psi(s);
    if (amp == Complex{0.0, 0.0}) continue;
    const std::uint32_t rest = s & ~keep_mask;
    const std::uint32_t a = gather(s, keep);
    for (std::uint32_t b = 0; b < kdim; ++b) r(a, b) += amp * std::conj(psi(rest | placed[b]));
  }
  return r;
}

}  // namespace

const char* to_string(Model m) noexcept { return m == Model::Tfim ? "tfim" : "xx"; }

void ChainSpec::validate() const {
  if (n_sites < 2 || n_sites > kMaxSites) {
    std::ostringstream os;
    os << "chain length must be in [2, " << kMaxSites << "], got " << n_sites;
    throw Error(ErrorKind::InvalidArgument, os.str());
  }
  if (boundary == Boundary::Periodic && n_sites == 3) {
    throw Error(ErrorKind::InvalidArgument, "periodic oracle chains need N >= 4");
  }
  if (!std::isfinite(lambda)) throw Error(ErrorKind::InvalidArgument, "lambda must be finite");
  if (!(kBT >= 0.0)) throw Error(ErrorKind::InvalidArgument, "kBT must be non-negative");
}

Boundary ChainSpec::effective_boundary() const noexcept {
  return n_sites == 2 ? Boundary::Open : boundary;
}

std::vector<std::pair<int, int>> ChainSpec::bonds() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i + 1 < n_sites; ++i) out.emplace_back(i, i + 1);
  if (effective_boundary() == Boundary::Periodic) out.emplace_back(n_sites - 1, 0);
  return out;
}

Eigen::MatrixXd build_hamiltonian(const ChainSpec& spec) {
  spec.validate();
  const auto bonds = spec.bonds();
  const std::uint32_t dim = 1u << spec.n_sites;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (std::uint32_t s = 0; s < dim; ++s) {
    for_each_element(spec, bonds, s, [&](std::uint32_t t, double amp) { h(t, s) += amp; });
  }
  return h;
}

Spectrum::Spectrum(int n_sites, bool translation_blocks, std::vector<Block> blocks)
    : n_sites_(n_sites), translation_blocks_(translation_blocks), blocks_(std::move(blocks)) {}

std::vector<double> Spectrum::energies() const {
  std::vector<double> e;
  e.reserve(dimension());
  for (const Block& b : blocks_) e.insert(e.end(), b.energies.data(), b.energies.data() + b.energies.size());
  std::sort(e.begin(), e.end());
  return e;
}

double Spectrum::ground_energy() const {
  double e0 = std::numeric_limits<double>::infinity();
  for (const Block& b : blocks_) {
    if (b.energies.size() > 0) e0 = std::min(e0, b.energies.minCoeff());
  }
  return e0;
}

Eigen::VectorXcd Spectrum::expand(std::size_t block, Eigen::Index index) const {
  const Block& b = blocks_.at(block);
  Eigen::VectorXcd full = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dimension()));
  if (!translation_blocks_) {
    for (std::size_t i = 0; i < b.reps.size(); ++i) full(b.reps[i]) = b.vectors(static_cast<Eigen::Index>(i), index);
    return full;
  }
  const double k = 2.0 * std::numbers::pi * b.momentum / n_sites_;
  for (std::size_t i = 0; i < b.reps.size(); ++i) {
    const Complex c = b.vectors(static_cast<Eigen::Index>(i), index);
    if (c == Complex{0.0, 0.0}) continue;
    const int period = b.periods[i];
    const double norm = 1.0 / std::sqrt(static_cast<double>(period));
    std::uint32_t s = b.reps[i];
    for (int j = 0; j < period; ++j) {
      full(s) += c * std::polar(norm, -k * j);
      s = rotate(s, n_sites_);
    }
  }
  return full;
}

std::shared_ptr<const Spectrum> diagonalize(const Eigen::MatrixXd& hamiltonian) {
  if (hamiltonian.rows() != hamiltonian.cols()) {
    throw Error(ErrorKind::InvalidArgument, "Hamiltonian must be square");
  }
  const int n = sites_of_dimension(hamiltonian.rows());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hamiltonian);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::Numerical, "diagonalization failed");
  Spectrum::Block b;
  b.reps.resize(static_cast<std::size_t>(hamiltonian.rows()));
  for (std::size_t i = 0; i < b.reps.size(); ++i) b.reps[i] = static_cast<std::uint32_t>(i);
  b.periods.assign(b.reps.size(), 1);
  b.energies = solver.eigenvalues();
  b.vectors = solver.eigenvectors().cast<Complex>();
  std::vector<Spectrum::Block> blocks;
  blocks.push_back(std::move(b));
  return std::make_shared<const Spectrum>(n, false, std::move(blocks));
}

std::shared_ptr<const Spectrum> diagonalize(const ChainSpec& spec) {
  spec.validate();
  if (spec.effective_boundary() != Boundary::Periodic) return diagonalize(build_hamiltonian(spec));

  const int n = spec.n_sites;
  const std::uint32_t dim = 1u << n;
  const auto bonds = spec.bonds();

  // Orbit representative (smallest member), shift with s = T^shift(rep), and
  // orbit length for every basis state.
  std::vector<std::uint32_t> rep(dim);
  std::vector<int> shift(dim);
  std::vector<int> period(dim, 0);
  std::vector<bool> seen(dim, false);
  for (std::uint32_t s = 0; s < dim; ++s) {
    if (seen[s]) continue;
    std::vector<std::uint32_t> orbit{s};
    for (std::uint32_t t = rotate(s, n); t != s; t = rotate(t, n)) orbit.push_back(t);
    const std::uint32_t r = *std::min_element(orbit.begin(), orbit.end());
    const auto r_pos = static_cast<int>(std::find(orbit.begin(), orbit.end(), r) - orbit.begin());
    const int len = static_cast<int>(orbit.size());
    for (int j = 0; j < len; ++j) {
      const std::uint32_t t = orbit[static_cast<std::size_t>(j)];
      seen[t] = true;
      rep[t] = r;
      shift[t] = ((j - r_pos) % len + len) % len;
    }
    period[r] = len;
  }

  std::vector<Spectrum::Block> blocks;
  for (int m = 0; m < n; ++m) {
    Spectrum::Block b;
    b.momentum = m;
    std::vector<int> slot(dim, -1);
    for (std::uint32_t s = 0; s < dim; ++s) {
      if (period[s] > 0 && (m * period[s]) % n == 0) {
        slot[s] = static_cast<int>(b.reps.size());
        b.reps.push_back(s);
        b.periods.push_back(period[s]);
      }
    }
    if (b.reps.empty()) continue;
    const double k = 2.0 * std::numbers::pi * m / n;
    const auto size = static_cast<Eigen::Index>(b.reps.size());
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(size, size);
    for (Eigen::Index col = 0; col < size; ++col) {
      const std::uint32_t a = b.reps[static_cast<std::size_t>(col)];
      const double ra = b.periods[static_cast<std::size_t>(col)];
      for_each_element(spec, bonds, a, [&](std::uint32_t t, double amp) {
        const std::uint32_t r = rep[t];
        const int row = slot[r];
        if (row < 0) return;
        const double rr = period[r];
        h(row, col) += amp * std::polar(std::sqrt(ra / rr), k * shift[t]);
      });
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    if (solver.info() != Eigen::Success) throw Error(ErrorKind::Numerical, "block diagonalization failed");
    b.energies = solver.eigenvalues();
    b.vectors = solver.eigenvectors();
    blocks.push_back(std::move(b));
  }
  return std::make_shared<const Spectrum>(n, true, std::move(blocks));
}

GibbsState::GibbsState(std::shared_ptr<const Spectrum> spectrum, double kBT)
    : spectrum_(std::move(spectrum)), kBT_(kBT) {
  if (!(kBT >= 0.0) || !std::isfinite(kBT)) {
    throw Error(ErrorKind::InvalidArgument, "Gibbs state needs a finite kBT >= 0");
  }
  const double e0 = spectrum_->ground_energy();
  if (kBT == 0.0) {
    // Equal mixture of the (possibly degenerate) ground manifold.
    const auto& blocks = spectrum_->blocks();
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      for (Eigen::Index i = 0; i < blocks[b].energies.size(); ++i) {
        if (blocks[b].energies(i) - e0 < 1e-9) weights_.push_back({b, i, 1.0});
      }
    }
    for (Weight& w : weights_) w.weight /= static_cast<double>(weights_.size());
    return;
  }
  // exp(-40) ~ 4e-18: lighter states cannot move any reduced entry.
  constexpr double kCutoff = 40.0;
  double z = 0.0;
  const auto& blocks = spectrum_->blocks();
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (Eigen::Index i = 0; i < blocks[b].energies.size(); ++i) {
      const double x = (blocks[b].energies(i) - e0) / kBT;
      if (x > kCutoff) continue;
      const double w = std::exp(-x);
      weights_.push_back({b, i, w});
      z += w;
    }
  }
  for (Weight& w : weights_) w.weight /= z;
}

quantum::DensityMatrix GibbsState::density_matrix() const {
  const auto dim = static_cast<Eigen::Index>(spectrum_->dimension());
  quantum::Matrix rho = quantum::Matrix::Zero(dim, dim);
  for (const Weight& w : weights_) {
    const Eigen::VectorXcd v = spectrum_->expand(w.block, w.index);
    rho.noalias() += w.weight * v * v.adjoint();
  }
  return quantum::DensityMatrix(std::move(rho));
}

quantum::DensityMatrix gibbs_state(const Eigen::MatrixXd& hamiltonian, double kBT) {
  const GibbsState state(diagonalize(hamiltonian), kBT);
  const auto dim = hamiltonian.rows();
  const auto& block = state.spectrum().blocks().front();
  quantum::Matrix rho = quantum::Matrix::Zero(dim, dim);
  std::vector<double> spectrum(static_cast<std::size_t>(dim), 0.0);
  std::size_t slot = 0;
  for (const auto& w : state.weights()) {
    const Eigen::VectorXcd v = block.vectors.col(w.index);
    rho.noalias() += w.weight * v * v.adjoint();
    spectrum[slot++] = w.weight;
  }
  return quantum::DensityMatrix(std::move(rho), std::move(spectrum));
}

quantum::DensityMatrix reduce(const quantum::DensityMatrix& rho, std::span<const int> keep_sites) {
  const int n = sites_of_dimension(rho.dim());
  check_keep(keep_sites, n);
  const std::uint32_t kdim = 1u << keep_sites.size();
  std::uint32_t keep_mask = 0;
  for (int site : keep_sites) keep_mask |= 1u << site;
  const quantum::Matrix& m = rho.matrix();
  quantum::Matrix r = quantum::Matrix::Zero(kdim, kdim);
  const std::uint32_t dim = 1u << n;
  for (std::uint32_t rest = 0; rest < dim; ++rest) {
    if (rest & keep_mask) continue;
    for (std::uint32_t a = 0; a < kdim; ++a) {
      for (std::uint32_t b = 0; b < kdim; ++b) {
        r(a, b) += m(rest | scatter(a, keep_sites), rest | scatter(b, keep_sites));
      }
    }
  }
  return quantum::DensityMatrix(std::move(r));
}

quantum::DensityMatrix reduce(const GibbsState& state, std::span<const int> keep_sites) {
  const int n = state.spectrum().n_sites();
  check_keep(keep_sites, n);
  const std::uint32_t kdim = 1u << keep_sites.size();
  quantum::Matrix r = quantum::Matrix::Zero(kdim, kdim);
  for (const auto& w : state.weights()) {
    const Eigen::VectorXcd v = state.spectrum().expand(w.block, w.index);
    r += w.weight * trace_out(v, n, keep_sites);
  }
  return quantum::DensityMatrix(std::move(r));
}

ChainObservables observables(const quantum::DensityMatrix& bond) {
  const quantum::TwoSiteExpectations e = quantum::two_site_expectations(bond);
  return {e(1, 0), e(2, 0), e(3, 0), e(1, 1), e(2, 2), e(3, 3)};
}

ChainObservables gibbs_observables(const ChainSpec& spec) {
  spec.validate();
  const GibbsState state(diagonalize(spec), spec.kBT);
  const int bond[2] = {0, 1};
  return observables(reduce(state, bond));
}

}  // namespace cohprobe::ed
