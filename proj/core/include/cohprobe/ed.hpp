#pragma once

// Exact diagonalization of small spin-1/2 chains (N <= 12): the independent
// oracle for the thermodynamic-limit formulas.
//
// Basis states are bit strings with bit k = 1 meaning site k is down
// (sigma^z = -1). Reduced matrices order the kept sites as Kronecker factors,
// the first kept site being the most significant.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "cohprobe/quantum.hpp"
#include "cohprobe/tfim.hpp"

namespace cohprobe::ed {

inline constexpr int kMaxSites = 12;

enum class Model { Tfim, Xx };
enum class Boundary { Periodic, Open };

const char* to_string(Model m) noexcept;

struct ChainSpec {
  int n_sites = 8;
  Model model = Model::Tfim;
  double lambda = 0.0;
  double kBT = 0.0;
  Boundary boundary = Boundary::Periodic;
  /// TFIM only: FieldOverCoupling gives H = -sum zz - lambda sum x,
  /// CouplingOverField gives H = -lambda sum zz - sum x.
  tfim::Convention convention = tfim::Convention::FieldOverCoupling;

  void validate() const;

  /// Periodic chains of two sites would count their single bond twice, so
  /// they are treated as open.
  Boundary effective_boundary() const noexcept;

  std::vector<std::pair<int, int>> bonds() const;
};

/// Dense 2^N x 2^N Hamiltonian (real symmetric for both models).
Eigen::MatrixXd build_hamiltonian(const ChainSpec& spec);

/// Eigen-decomposition, block diagonal in lattice momentum for periodic
/// chains and a single dense block otherwise.
class Spectrum {
 public:
  struct Block {
    int momentum = 0;                 // k = 2 pi momentum / N
    std::vector<std::uint32_t> reps;  // orbit representatives (all states for dense)
    std::vector<int> periods;         // orbit lengths (1 for dense)
    Eigen::VectorXd energies;
    Eigen::MatrixXcd vectors;
  };

  Spectrum(int n_sites, bool translation_blocks, std::vector<Block> blocks);

  int n_sites() const noexcept { return n_sites_; }
  std::size_t dimension() const noexcept { return std::size_t{1} << n_sites_; }
  const std::vector<Block>& blocks() const noexcept { return blocks_; }

  /// All energies in ascending order.
  std::vector<double> energies() const;
  double ground_energy() const;

  /// Eigenvector `index` of block `block`, expanded in the full basis.
  Eigen::VectorXcd expand(std::size_t block, Eigen::Index index) const;

 private:
  int n_sites_;
  bool translation_blocks_;
  std::vector<Block> blocks_;
};

/// Momentum blocks when the chain is periodic, dense otherwise.
std::shared_ptr<const Spectrum> diagonalize(const ChainSpec& spec);

/// Dense diagonalization of an explicit Hamiltonian.
std::shared_ptr<const Spectrum> diagonalize(const Eigen::MatrixXd& hamiltonian);

/// exp(-H / kBT) / Z held in spectral form. kBT = 0 gives the equal mixture
/// of the ground manifold.
class GibbsState {
 public:
  struct Weight {
    std::size_t block;
    Eigen::Index index;
    double weight;
  };

  GibbsState(std::shared_ptr<const Spectrum> spectrum, double kBT);

  const Spectrum& spectrum() const noexcept { return *spectrum_; }
  double kBT() const noexcept { return kBT_; }
  /// Eigenstates with non-negligible weight.
  const std::vector<Weight>& weights() const noexcept { return weights_; }

  /// The full 2^N x 2^N matrix.
  quantum::DensityMatrix density_matrix() const;

 private:
  std::shared_ptr<const Spectrum> spectrum_;
  double kBT_;
  std::vector<Weight> weights_;
};

/// Gibbs state of an explicit Hamiltonian as a full density matrix. The lowest
/// energy is subtracted before exponentiating.
quantum::DensityMatrix gibbs_state(const Eigen::MatrixXd& hamiltonian, double kBT);

/// Partial trace keeping one or two sites.
quantum::DensityMatrix reduce(const quantum::DensityMatrix& rho, std::span<const int> keep_sites);
quantum::DensityMatrix reduce(const GibbsState& state, std::span<const int> keep_sites);

/// Nearest-neighbour observables of sites (i, i + 1).
struct ChainObservables {
  double sx = 0.0;
  double sy = 0.0;
  double sz = 0.0;
  double gxx = 0.0;
  double gyy = 0.0;
  double gzz = 0.0;
};

ChainObservables observables(const quantum::DensityMatrix& bond);

/// Diagonalize, build the Gibbs state at spec.kBT and read the bond (0, 1).
ChainObservables gibbs_observables(const ChainSpec& spec);

}  // namespace cohprobe::ed
