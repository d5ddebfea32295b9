#pragma once

// Transverse-field Ising chain in the thermodynamic limit.
//
// Zero-temperature formulas use lambda = J/B (H = -J sum zz - B sum x);
// finite-temperature formulas use lambda = field with unit coupling
// (H = -sum zz - lambda sum x). The convention travels with every point.

#include "cohprobe/quadrature.hpp"
#include "cohprobe/quantum.hpp"

namespace cohprobe::tfim {

inline constexpr double kCriticalLambda = 1.0;

enum class Convention { CouplingOverField, FieldOverCoupling };
enum class StateKind { SymmetryBroken, ThermalGround, Gibbs };

const char* to_string(Convention c) noexcept;
const char* to_string(StateKind k) noexcept;

struct TfimPoint {
  double lambda = 0.0;
  Convention convention = Convention::CouplingOverField;
  double kBT = 0.0;
  StateKind state_kind = StateKind::ThermalGround;

  static TfimPoint symmetry_broken(double lambda);
  static TfimPoint thermal_ground(double lambda);
  static TfimPoint gibbs(double lambda, double kBT);

  /// Throws InvalidArgument when the kind, temperature and convention disagree.
  void validate() const;
};

/// Nearest-neighbour observables of the Gibbs state (field along x).
struct TfimObservables {
  double sx = 0.0;
  double sy = 0.0;
  double sz = 0.0;
  double gxx = 0.0;
  double gyy = 0.0;
  double gzz = 0.0;
  double g_plus = 0.0;
  double g_minus = 0.0;
};

/// Order parameter of the |0+> branch: 0 for lambda <= 1, (1 - lambda^-2)^(1/8) above.
double ground_sz(double lambda);

/// Transverse magnetization (1/pi) int_0^pi (1 + l cos p) / sqrt(1 + l^2 + 2 l cos p) dp.
double ground_sx(double lambda, const quad::QuadratureSpec& spec = {});

/// Thermal transverse magnetization, field convention.
double thermal_sx(double lambda, double kBT, const quad::QuadratureSpec& spec = {});

/// One- and two-site thermal observables, field convention.
TfimObservables thermal_observables(double lambda, double kBT,
                                    const quad::QuadratureSpec& spec = {});

/// Two-site table of the Gibbs state written after exchanging sigma^x and
/// sigma^z on every site, which puts it in X form:
/// [II + <xx> zz + <yy> yy + <zz> xx + <x>(zI + Iz)] / 4.
quantum::TwoSiteExpectations thermal_two_site(double lambda, double kBT,
                                              const quad::QuadratureSpec& spec = {});

/// Same state in the original basis: [II + <xx> xx + <yy> yy + <zz> zz + <x>(xI + Ix)] / 4.
quantum::TwoSiteExpectations thermal_two_site_native(double lambda, double kBT,
                                                     const quad::QuadratureSpec& spec = {});

/// Exchange the x and z labels of a two-site table on both sites.
quantum::TwoSiteExpectations swap_x_z(const quantum::TwoSiteExpectations& e);

quantum::OneSiteExpectations one_site_expectations(const TfimPoint& p,
                                                   const quad::QuadratureSpec& spec = {});

quantum::DensityMatrix one_site_state(const TfimPoint& p, const quad::QuadratureSpec& spec = {});

double one_site_coherence(const TfimPoint& p, const quad::QuadratureSpec& spec = {});

}  // namespace cohprobe::tfim
