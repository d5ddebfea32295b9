#include "cohprobe/scan.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cohprobe/kitaev.hpp"
#include "cohprobe/optimize.hpp"
#include "cohprobe/parallel.hpp"
#include "cohprobe/tfim.hpp"

namespace cohprobe::scan {
namespace {

struct HingeFit {
  double intercept;
  double slope;
  double bend;
  double sse;
};

HingeFit fit_hinge(const std::vector<LocusPoint>& pts, double knee) {
  const auto n = static_cast<Eigen::Index>(pts.size());
  Eigen::MatrixXd a(n, 3);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = pts[static_cast<std::size_t>(i)].kBT;
    a(i, 0) = 1.0;
    a(i, 1) = t;
    a(i, 2) = std::max(0.0, t - knee);
    y(i) = pts[static_cast<std::size_t>(i)].lambda_M;
  }
  const Eigen::Vector3d coef = a.colPivHouseholderQr().solve(y);
  const double sse = (a * coef - y).squaredNorm();
  return {coef(0), coef(1), coef(2), sse};
}

}  // namespace

void SweepSpec::validate() const {
  if (!(param_min < param_max)) throw Error(ErrorKind::InvalidArgument, "sweep needs param_min < param_max");
  if (!(step > 0.0)) throw Error(ErrorKind::InvalidArgument, "sweep step must be positive");
  if (!(diff_step > 0.0) || diff_step > step) {
    throw Error(ErrorKind::InvalidArgument, "diff_step must satisfy 0 < diff_step <= step");
  }
  if (param_min < domain_min || param_max > domain_max) {
    throw Error(ErrorKind::InvalidArgument, "sweep range leaves the model domain");
  }
}

std::size_t SusceptibilityCurve::extremal_index() const {
  if (samples.empty()) throw Error(ErrorKind::InvalidArgument, "empty susceptibility curve");
  std::size_t best = 0;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (std::abs(samples[i].chi) > std::abs(samples[best].chi)) best = i;
  }
  return best;
}

double central_difference(const CoherenceFn& f, double x, double h, bool richardson) {
  if (!(h > 0.0)) throw Error(ErrorKind::InvalidArgument, "difference step must be positive");
  const double d1 = (f(x + h) - f(x - h)) / (2.0 * h);
  if (!richardson) return d1;
  const double h2 = 0.5 * h;
  const double d2 = (f(x + h2) - f(x - h2)) / (2.0 * h2);
  return (4.0 * d2 - d1) / 3.0;
}

double difference(const CoherenceFn& f, double x, double h, bool richardson, double lo, double hi) {
  if (!(h > 0.0)) throw Error(ErrorKind::InvalidArgument, "difference step must be positive");
  if (x - h >= lo && x + h <= hi) return central_difference(f, x, h, richardson);
  const double dir = x - h < lo ? 1.0 : -1.0;
  if (x + dir * 2.0 * h < lo || x + dir * 2.0 * h > hi) {
    throw Error(ErrorKind::InvalidArgument, "difference stencil does not fit in the domain");
  }
  auto one_sided = [&](double s) {
    return dir * (-3.0 * f(x) + 4.0 * f(x + dir * s) - f(x + dir * 2.0 * s)) / (2.0 * s);
  };
  const double d1 = one_sided(h);
  if (!richardson) return d1;
  return (4.0 * one_sided(0.5 * h) - d1) / 3.0;
}

SusceptibilityCurve sweep(const CoherenceFn& f, const SweepSpec& spec, std::string model,
                          double kBT, unsigned threads) {
  spec.validate();
  const std::vector<double> grid = optimize::uniform_grid(spec.param_min, spec.param_max, spec.step);
  const std::size_t n = grid.size();
  // When the difference step equals the grid step, neighbouring grid values
  // double as the stencil; two extra points pad the ends.
  const bool reuse = spec.diff_step == spec.step && !spec.richardson &&
                     spec.param_min - spec.step >= spec.domain_min &&
                     spec.param_max + spec.step <= spec.domain_max;

  struct Slot {
    double coherence = 0.0;
    double chi = 0.0;
    std::string error;
  };
  std::vector<Slot> slots(n);
  std::vector<double> padded;
  if (reuse) {
    padded.resize(n + 2);
    std::vector<std::string> errors(n + 2);
    parallel::parallel_for(n + 2, [&](std::size_t i) {
      const double x = spec.param_min + (static_cast<double>(i) - 1.0) * spec.step;
      try {
        padded[i] = f(x);
      } catch (const std::exception& e) {
        padded[i] = std::numeric_limits<double>::quiet_NaN();
        errors[i] = e.what();
      }
    }, threads);
    for (std::size_t i = 0; i < n; ++i) {
      Slot& s = slots[i];
      s.coherence = padded[i + 1];
      s.chi = (padded[i + 2] - padded[i]) / (2.0 * spec.step);
      for (std::size_t k : {i + 1, i, i + 2}) {
        if (!errors[k].empty()) {
          s.error = errors[k];
          break;
        }
      }
    }
  } else {
    parallel::parallel_for(n, [&](std::size_t i) {
      try {
        slots[i].coherence = f(grid[i]);
        slots[i].chi = difference(f, grid[i], spec.diff_step, spec.richardson, spec.domain_min,
                                  spec.domain_max);
      } catch (const std::exception& e) {
        slots[i].error = e.what();
      }
    }, threads);
  }

  SusceptibilityCurve curve;
  curve.spec = spec;
  curve.model = std::move(model);
  curve.kBT = kBT;
  for (std::size_t i = 0; i < n; ++i) {
    if (slots[i].error.empty()) {
      curve.samples.push_back({grid[i], slots[i].coherence, slots[i].chi});
    } else {
      curve.failures.push_back({grid[i], slots[i].error});
    }
  }
  if (curve.samples.empty()) return curve;

  if (spec.refine) {
    const double centre = curve.samples[curve.extremal_index()].param;
    const double fine = spec.step / 10.0;
    std::vector<double> extra;
    for (int k = -9; k <= 9; ++k) {
      if (k == 0) continue;
      const double x = centre + k * fine;
      if (x > spec.param_min && x < spec.param_max) extra.push_back(x);
    }
    std::vector<Slot> extra_slots(extra.size());
    const double h = std::min(spec.diff_step, fine);
    parallel::parallel_for(extra.size(), [&](std::size_t i) {
      try {
        extra_slots[i].coherence = f(extra[i]);
        extra_slots[i].chi = difference(f, extra[i], h, spec.richardson, spec.domain_min, spec.domain_max);
      } catch (const std::exception& e) {
        extra_slots[i].error = e.what();
      }
    }, threads);
    for (std::size_t i = 0; i < extra.size(); ++i) {
      if (extra_slots[i].error.empty()) {
        curve.samples.push_back({extra[i], extra_slots[i].coherence, extra_slots[i].chi});
      } else {
        curve.failures.push_back({extra[i], extra_slots[i].error});
      }
    }
    std::sort(curve.samples.begin(), curve.samples.end(),
              [](const Sample& l, const Sample& r) { return l.param < r.param; });
    std::sort(curve.failures.begin(), curve.failures.end(),
              [](const Failure& l, const Failure& r) { return l.param < r.param; });
  }

  const Sample& peak = curve.samples[curve.extremal_index()];
  try {
    const double h = reuse ? spec.step : spec.diff_step;
    Singularity s;
    s.param = peak.param;
    s.chi = difference(f, peak.param, h, false, spec.domain_min, spec.domain_max);
    s.chi_half_step = difference(f, peak.param, 0.5 * h, false, spec.domain_min, spec.domain_max);
    s.growth = s.chi == 0.0 ? 0.0 : std::abs(s.chi_half_step) / std::abs(s.chi);
    s.suspected = s.growth >= kSingularGrowth;
    curve.singularity = s;
  } catch (const std::exception&) {
    // A failing stencil next to the peak leaves the singularity unreported.
  }
  return curve;
}

ChiMaximum locate_chi_maximum(const SusceptibilityCurve& curve, const CoherenceFn& f, double tol) {
  if (curve.samples.size() < 5) {
    throw Error(ErrorKind::InvalidArgument, "locating a maximum needs at least 5 samples");
  }
  std::vector<double> xs;
  std::vector<double> chis;
  xs.reserve(curve.samples.size());
  chis.reserve(curve.samples.size());
  for (const Sample& s : curve.samples) {
    xs.push_back(s.param);
    chis.push_back(s.chi);
  }
  const optimize::GridMaximum g = optimize::grid_argmax(xs, chis);
  if (g.at_boundary) {
    std::ostringstream os;
    os << "boundary maximum: chi peaks at the sweep end point " << g.x;
    throw Error(ErrorKind::BoundaryMaximum, os.str());
  }
  if (g.tie) return {g.x, g.value, true};
  const double h = curve.spec.diff_step;
  const bool richardson = curve.spec.richardson;
  auto chi = [&](double x) { return central_difference(f, x, h, richardson); };
  const double x = optimize::golden_section_max(chi, xs[g.index - 1], xs[g.index + 1], tol);
  const double v = chi(x);
  if (v < g.value) return {g.x, g.value, false};
  return {x, v, false};
}

CrossoverFit fit_crossover(std::vector<LocusPoint> locus) {
  std::sort(locus.begin(), locus.end(),
            [](const LocusPoint& l, const LocusPoint& r) { return l.kBT < r.kBT; });
  constexpr std::size_t kMinPerSegment = 3;
  if (locus.size() < 2 * kMinPerSegment) {
    throw Error(ErrorKind::FitError, "crossover fit needs at least 3 locus points per segment");
  }
  // Knee between the third point and the third-from-last, so each segment
  // keeps at least three points.
  const double lo = locus[kMinPerSegment - 1].kBT;
  const double hi = locus[locus.size() - kMinPerSegment].kBT;
  if (!(lo < hi)) throw Error(ErrorKind::FitError, "degenerate locus: segments cannot be separated");

  constexpr int kScan = 2000;
  double best_knee = lo;
  double best_sse = std::numeric_limits<double>::infinity();
  int best_i = 0;
  for (int i = 0; i <= kScan; ++i) {
    const double k = lo + (hi - lo) * i / kScan;
    const double sse = fit_hinge(locus, k).sse;
    if (sse < best_sse) {
      best_sse = sse;
      best_knee = k;
      best_i = i;
    }
  }
  const double a = lo + (hi - lo) * std::max(0, best_i - 1) / kScan;
  const double b = lo + (hi - lo) * std::min(kScan, best_i + 1) / kScan;
  if (a < b) {
    const double k = optimize::golden_section_max([&](double t) { return -fit_hinge(locus, t).sse; },
                                                  a, b, 1e-12);
    if (fit_hinge(locus, k).sse <= best_sse) best_knee = k;
  }
  const HingeFit fit = fit_hinge(locus, best_knee);
  CrossoverFit out;
  out.locus = std::move(locus);
  out.slope = fit.slope;
  out.intercept = fit.intercept;
  out.knee_kBT = best_knee;
  out.slope_above = fit.slope + fit.bend;
  out.fit_residual = std::sqrt(fit.sse / static_cast<double>(out.locus.size()));
  return out;
}

std::vector<LocusPoint> tfim_chi_locus(const std::vector<double>& kBT_list, const TfimLocusSpec& spec,
                                       unsigned threads) {
  std::vector<LocusPoint> out(kBT_list.size());
  parallel::parallel_for(kBT_list.size(), [&](std::size_t k) {
    const double kBT = kBT_list[k];
    const CoherenceFn f = family::tfim_gibbs(kBT, spec.quadrature);
    SweepSpec s;
    s.param_min = spec.lambda_min;
    s.param_max = spec.lambda_max;
    s.step = spec.step;
    s.diff_step = spec.diff_step;
    s.richardson = true;
    const SusceptibilityCurve curve = sweep(f, s, "tfim-gibbs", kBT, 1);
    if (!curve.failures.empty()) {
      std::ostringstream os;
      os << "TFIM Gibbs sweep failed at kBT = " << kBT << ", lambda = " << curve.failures.front().param
         << ": " << curve.failures.front().message;
      throw Error(ErrorKind::Numerical, os.str());
    }
    try {
      out[k] = {kBT, locate_chi_maximum(curve, f, spec.refine_tol).lambda_M};
    } catch (const Error& e) {
      std::ostringstream os;
      os << "kBT = " << kBT << ": " << e.what();
      throw Error(e.kind(), os.str());
    }
  }, threads);
  return out;
}

namespace family {

CoherenceFn tfim_symmetry_broken(const quad::QuadratureSpec& spec) {
  return [spec](double lambda) {
    return tfim::one_site_coherence(tfim::TfimPoint::symmetry_broken(lambda), spec);
  };
}

CoherenceFn tfim_thermal_ground(const quad::QuadratureSpec& spec) {
  return [spec](double lambda) {
    return tfim::one_site_coherence(tfim::TfimPoint::thermal_ground(lambda), spec);
  };
}

CoherenceFn tfim_gibbs(double kBT, const quad::QuadratureSpec& spec) {
  return [spec, kBT](double lambda) {
    return tfim::one_site_coherence(tfim::TfimPoint::gibbs(lambda, kBT), spec);
  };
}

CoherenceFn xx_chain(xx::YyTreatment yy) {
  return [yy](double lambda) { return xx::xx_coherence({lambda}, yy); };
}

CoherenceFn kitaev_path(const quad::QuadratureSpec& spec) {
  return [spec](double jx) { return kitaev::kitaev_coherence(kitaev::KitaevPoint::on_path(jx), spec); };
}

}  // namespace family

}  // namespace cohprobe::scan
