#pragma once

// Coherence susceptibility chi = dC/dparam: finite differences, parameter
// sweeps, extremum localization and the crossover-line fit.

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cohprobe/quadrature.hpp"
#include "cohprobe/xx.hpp"

namespace cohprobe::scan {

using CoherenceFn = std::function<double(double)>;

inline constexpr double kSingularGrowth = 5.0;

struct SweepSpec {
  double param_min = 0.0;
  double param_max = 2.0;
  double step = 1e-3;
  double diff_step = 1e-4;
  bool refine = false;
  /// Combine steps h and h/2 for an O(h^4) derivative.
  bool richardson = false;
  /// Where the coherence function is defined. Grid points whose stencil
  /// would leave it get a one-sided second-order difference.
  double domain_min = -std::numeric_limits<double>::infinity();
  double domain_max = std::numeric_limits<double>::infinity();

  void validate() const;
};

struct Sample {
  double param = 0.0;
  double coherence = 0.0;
  double chi = 0.0;
};

struct Failure {
  double param = 0.0;
  std::string message;
};

/// The extremal-|chi| sample re-differentiated with half the step. A growth
/// ratio of at least kSingularGrowth marks a suspected non-analytic point.
struct Singularity {
  double param = 0.0;
  double chi = 0.0;
  double chi_half_step = 0.0;
  double growth = 0.0;
  bool suspected = false;
};

struct SusceptibilityCurve {
  std::vector<Sample> samples;
  std::vector<Failure> failures;
  SweepSpec spec;
  std::string model;
  double kBT = 0.0;
  std::optional<Singularity> singularity;

  /// Index of the sample with the largest |chi|.
  std::size_t extremal_index() const;
};

/// (f(x + h) - f(x - h)) / 2h, or the Richardson combination of h and h/2.
double central_difference(const CoherenceFn& f, double x, double h, bool richardson = false);

/// Central difference when [x - h, x + h] lies in [lo, hi], otherwise the
/// three-point one-sided formula pointing into the domain.
double difference(const CoherenceFn& f, double x, double h, bool richardson, double lo, double hi);

/// Evaluate coherence and chi on the grid. Per-point failures are recorded
/// and skipped. Points are evaluated concurrently; the curve is assembled in
/// parameter order and is bit-identical across thread counts.
SusceptibilityCurve sweep(const CoherenceFn& f, const SweepSpec& spec, std::string model = {},
                          double kBT = 0.0, unsigned threads = 0);

struct ChiMaximum {
  double lambda_M = 0.0;
  double chi_max = 0.0;
  bool tie = false;
};

/// Grid argmax of chi refined by golden section on the underlying coherence
/// function. Throws BoundaryMaximum when the grid maximum is an end point.
ChiMaximum locate_chi_maximum(const SusceptibilityCurve& curve, const CoherenceFn& f,
                              double tol = 1e-5);

struct LocusPoint {
  double kBT = 0.0;
  double lambda_M = 0.0;
};

struct CrossoverFit {
  std::vector<LocusPoint> locus;
  double slope = 0.0;        // d lambda_M / d kBT below the knee
  double intercept = 0.0;    // lambda_M extrapolated to kBT = 0
  double knee_kBT = 0.0;
  double slope_above = 0.0;  // slope above the knee
  double fit_residual = 0.0; // RMS
};

/// Continuous two-segment linear fit of lambda_M(kBT) with a free knee.
/// Needs at least three points on each side of the knee.
CrossoverFit fit_crossover(std::vector<LocusPoint> locus);

struct TfimLocusSpec {
  double lambda_min = 0.5;
  double lambda_max = 2.0;
  double step = 1e-2;
  double diff_step = 1e-4;
  double refine_tol = 1e-5;
  quad::QuadratureSpec quadrature{};
};

/// lambda_M(kBT) of the one-site TFIM Gibbs coherence (field convention).
std::vector<LocusPoint> tfim_chi_locus(const std::vector<double>& kBT_list,
                                       const TfimLocusSpec& spec = {}, unsigned threads = 0);

/// Coherence as a function of the sweep parameter for each model.
namespace family {

CoherenceFn tfim_symmetry_broken(const quad::QuadratureSpec& spec = {});
CoherenceFn tfim_thermal_ground(const quad::QuadratureSpec& spec = {});
CoherenceFn tfim_gibbs(double kBT, const quad::QuadratureSpec& spec = {});
CoherenceFn xx_chain(xx::YyTreatment yy = xx::YyTreatment::FromSymmetry);
/// Kitaev x-link coherence along Jy = Jz = (1 - Jx) / 2, parameter Jx.
CoherenceFn kitaev_path(const quad::QuadratureSpec& spec = {});

}  // namespace family

}  // namespace cohprobe::scan
