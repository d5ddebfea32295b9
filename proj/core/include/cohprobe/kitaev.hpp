#pragma once

// Kitaev honeycomb model, vortex-free sector, thermodynamic limit.
// Energies are in units of Jx + Jy + Jz = 1.

#include "cohprobe/quadrature.hpp"
#include "cohprobe/quantum.hpp"

namespace cohprobe::kitaev {

inline constexpr double kPathCriticalJx = 0.5;
inline constexpr double kGaplessTol = 1e-8;

struct KitaevPoint {
  double jx = 1.0;
  double jy = 0.0;
  double jz = 0.0;

  /// Point on the line Jy = Jz = (1 - Jx) / 2.
  static KitaevPoint on_path(double jx);

  void validate() const;

  /// True inside the gapless region, where each coupling is at most the sum of
  /// the other two.
  bool gapless() const noexcept;
};

struct Dispersion {
  double eps = 0.0;
  double delta = 0.0;

  double magnitude() const;
};

/// eps = Jx + Jy cos wy + Jz cos wz,  delta = Jy sin wy + Jz sin wz.
Dispersion dispersion(const KitaevPoint& p, double wy, double wz);

/// 2 min_q |f(q)|: coarse grid_n x grid_n scan then zoomed local refinement.
double gap(const KitaevPoint& p, int grid_n = 256);

/// (1 / 4 pi^2) int int eps / sqrt(eps^2 + delta^2) over the Brillouin zone.
/// In the gapless region the tolerance is relaxed to at least kGaplessTol.
quad::QuadratureResult xx_link_correlator_result(const KitaevPoint& p,
                                                 const quad::QuadratureSpec& spec = {});

double xx_link_correlator(const KitaevPoint& p, const quad::QuadratureSpec& spec = {});

/// The x-link two-site state: ones on the diagonal and g on the anti-diagonal, over 4.
quantum::DensityMatrix x_link_density_matrix(double g);

/// Coherence of the x-link state built from the Pauli table with only c[1][1] = g.
double kitaev_coherence(const KitaevPoint& p, const quad::QuadratureSpec& spec = {});

/// Closed form of the same quantity: 1 - H2((1 + g) / 2).
double closed_form_coherence(double g);

}  // namespace cohprobe::kitaev
