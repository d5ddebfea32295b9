#pragma once

// Quantum discord of two-qubit X states, measurement on the second qubit.

#include <vector>

#include "cohprobe/quadrature.hpp"
#include "cohprobe/quantum.hpp"

namespace cohprobe::discord {

inline constexpr double kXPatternTol = 1e-12;
inline constexpr double kFallbackTol = 1e-6;

/// 4x4 density matrix whose only nonzero entries sit on the diagonal and the
/// anti-diagonal.
class XState {
 public:
  explicit XState(quantum::DensityMatrix rho);

  const quantum::DensityMatrix& density_matrix() const noexcept { return rho_; }

 private:
  quantum::DensityMatrix rho_;
};

/// Discord with the optimal azimuth fixed analytically and the polar angle
/// optimized numerically.
double discord_analytic(const XState& x);

/// Grid over (theta, phi) projectors on the full state, then local refinement
/// of the best cell.
double discord_bruteforce(const XState& x, int angle_grid_n = 721);

/// The same brute-force minimization for any two-qubit state.
double discord_general(const quantum::DensityMatrix& rho, int angle_grid_n = 721);

struct DiscordOptions {
  /// Cross-check the analytic value against brute force and keep the latter
  /// when they disagree by more than kFallbackTol.
  bool verify = false;
  int angle_grid_n = 721;
};

struct DiscordValue {
  double value = 0.0;
  bool fell_back = false;
};

DiscordValue discord(const XState& x, const DiscordOptions& options = {});

/// Mutual information S(A) + S(B) - S(AB), in bits.
double mutual_information(const quantum::DensityMatrix& rho);

/// Marginal entropies S(A), S(B).
std::pair<double, double> marginal_entropies(const quantum::DensityMatrix& rho);

/// Discord of the nearest-neighbour TFIM Gibbs state in the x <-> z swapped basis.
double ising_thermal_discord(double lambda, double kBT, const quad::QuadratureSpec& spec = {},
                             const DiscordOptions& options = {});

struct DiscordMaximum {
  double kBT = 0.0;
  double lambda_at_max = 0.0;
  double discord_max = 0.0;
  bool out_of_range = false;
  bool tie = false;
};

struct LocusOptions {
  double lambda_min = 0.0;
  double lambda_max = 2.0;
  double lambda_step = 0.01;
  double refine_tol = 1e-5;
  quad::QuadratureSpec quadrature{};
  DiscordOptions discord{};
};

/// Per-temperature argmax of the discord over the lambda range, refined by
/// golden section. Maxima on the range boundary are flagged, not thrown.
std::vector<DiscordMaximum> discord_max_locus(const std::vector<double>& kBT_list,
                                              const LocusOptions& options = {});

}  // namespace cohprobe::discord
