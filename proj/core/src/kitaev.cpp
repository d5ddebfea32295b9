#include "cohprobe/kitaev.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <utility>
#include <vector>

namespace cohprobe::kitaev {

using std::numbers::pi;

KitaevPoint KitaevPoint::on_path(double jx) {
  const double side = 0.5 * (1.0 - jx);
  KitaevPoint p{jx, side, side};
  p.validate();
  return p;
}

void KitaevPoint::validate() const {
  if (!(jx >= 0.0 && jy >= 0.0 && jz >= 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "Kitaev couplings must be non-negative");
  }
  if (std::abs(jx + jy + jz - 1.0) > 1e-12) {
    std::ostringstream os;
    os << "Kitaev couplings must satisfy Jx + Jy + Jz = 1 (got " << jx + jy + jz << ")";
    throw Error(ErrorKind::InvalidArgument, os.str());
  }
}

bool KitaevPoint::gapless() const noexcept {
  return jx <= jy + jz && jy <= jx + jz && jz <= jx + jy;
}

double Dispersion::magnitude() const { return std::hypot(eps, delta); }

Dispersion dispersion(const KitaevPoint& p, double wy, double wz) {
  return {p.jx + p.jy * std::cos(wy) + p.jz * std::cos(wz),
          p.jy * std::sin(wy) + p.jz * std::sin(wz)};
}

double gap(const KitaevPoint& p, int grid_n) {
  p.validate();
  if (grid_n < 64) throw Error(ErrorKind::InvalidArgument, "gap grid must be at least 64 x 64");

  auto f2 = [&p](double wy, double wz) {
    const Dispersion d = dispersion(p, wy, wz);
    return d.eps * d.eps + d.delta * d.delta;
  };

  const double h = 2.0 * pi / grid_n;
  double best = std::numeric_limits<double>::infinity();
  double by = 0.0;
  double bz = 0.0;
  for (int i = 0; i <= grid_n; ++i) {
    const double wy = -pi + i * h;
    for (int j = 0; j <= grid_n; ++j) {
      const double wz = -pi + j * h;
      const double v = f2(wy, wz);
      if (v < best) {
        best = v;
        by = wy;
        bz = wz;
      }
    }
  }

  // |f|^2 is smooth, so zooming a small stencil around the incumbent converges.
  constexpr int kStencil = 10;
  double radius = h;
  for (int iter = 0; iter < 200 && radius > 1e-15; ++iter) {
    const double step = radius / kStencil;
    double cy = by;
    double cz = bz;
    for (int i = -kStencil; i <= kStencil; ++i) {
      for (int j = -kStencil; j <= kStencil; ++j) {
        const double wy = cy + i * step;
        const double wz = cz + j * step;
        const double v = f2(wy, wz);
        if (v < best) {
          best = v;
          by = wy;
          bz = wz;
        }
      }
    }
    radius = 2.0 * step;
  }
  return 2.0 * std::sqrt(best);
}

namespace {

// Iterated rule for when rectangle bisection runs out of budget: f vanishing
// on a whole line (a coupling is zero) or a small gap. For fixed wy, f is a circle of
// radius jz around A = jx + jy e^{i wy}; splitting the inner interval where
// |f| is smallest puts any sign jump of eps / |f| on a breakpoint, and the
// outer interval is split where that circle passes through the origin.
quad::QuadratureResult iterated_correlator(const KitaevPoint& p, const quad::QuadratureSpec& spec) {
  quad::QuadratureSpec inner_spec = spec;
  inner_spec.abs_tol = 0.1 * spec.abs_tol;
  inner_spec.rel_tol = 0.1 * spec.rel_tol;
  double inner_err = 0.0;
  int subdivisions = 0;

  auto ratio = [&p](double wy, double wz) {
    const Dispersion d = dispersion(p, wy, wz);
    const double mag = d.magnitude();
    return mag == 0.0 ? 0.0 : d.eps / mag;
  };
  auto inner = [&](double wy) {
    const double ay = p.jx + p.jy * std::cos(wy);
    const double by = p.jy * std::sin(wy);
    const double split = std::atan2(-by, -ay);
    double v = 0.0;
    for (const auto& [a, b] : {std::pair{-pi, split}, std::pair{split, pi}}) {
      if (!(b > a)) continue;
      const auto r = quad::integrate_1d([&](double wz) { return ratio(wy, wz); }, a, b, inner_spec);
      v += r.value;
      inner_err = std::max(inner_err, r.err_estimate);
      subdivisions += r.subdivisions;
    }
    return v;
  };

  std::vector<double> cuts{-pi, pi};
  if (p.jx > 0.0 && p.jy > 0.0) {
    const double c = (p.jz * p.jz - p.jx * p.jx - p.jy * p.jy) / (2.0 * p.jx * p.jy);
    if (std::abs(c) < 1.0) {
      cuts.push_back(std::acos(c));
      cuts.push_back(-std::acos(c));
    }
  }
  cuts.push_back(0.0);
  std::sort(cuts.begin(), cuts.end());

  quad::QuadratureResult total;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (!(cuts[i + 1] > cuts[i])) continue;
    const auto r = quad::integrate_1d(inner, cuts[i], cuts[i + 1], spec);
    total.value += r.value;
    total.err_estimate += r.err_estimate;
    total.subdivisions += r.subdivisions;
  }
  total.err_estimate += 2.0 * pi * inner_err;
  total.subdivisions += subdivisions;
  return total;
}

}  // namespace

quad::QuadratureResult xx_link_correlator_result(const KitaevPoint& p,
                                                 const quad::QuadratureSpec& spec) {
  p.validate();
  quad::QuadratureSpec effective = spec;
  if (p.gapless()) {
    effective.abs_tol = std::max(effective.abs_tol, kGaplessTol);
    effective.rel_tol = std::max(effective.rel_tol, kGaplessTol);
  }
  auto integrand = [&p](double wy, double wz) {
    const Dispersion d = dispersion(p, wy, wz);
    const double mag = d.magnitude();
    // Zeros of f are Dirac points or, when a coupling vanishes, lines; either
    // way a null set.
    if (mag == 0.0) return 0.0;
    return d.eps / mag;
  };
  quad::QuadratureResult r;
  try {
    r = quad::integrate_2d(integrand, effective);
  } catch (const quad::ToleranceNotReached&) {
    r = iterated_correlator(p, effective);
  }
  const double norm = 1.0 / (4.0 * pi * pi);
  r.value *= norm;
  r.err_estimate *= norm;
  return r;
}

double xx_link_correlator(const KitaevPoint& p, const quad::QuadratureSpec& spec) {
  return xx_link_correlator_result(p, spec).value;
}

quantum::DensityMatrix x_link_density_matrix(double g) {
  quantum::Matrix m = quantum::Matrix::Identity(4, 4);
  m(0, 3) = m(3, 0) = m(1, 2) = m(2, 1) = g;
  m *= 0.25;
  return quantum::DensityMatrix(std::move(m));
}

double kitaev_coherence(const KitaevPoint& p, const quad::QuadratureSpec& spec) {
  quantum::TwoSiteExpectations e;
  e(1, 1) = xx_link_correlator(p, spec);
  return quantum::coherence(quantum::reconstruct_two_site(e));
}

double closed_form_coherence(double g) { return 1.0 - quantum::binary_entropy(0.5 * (1.0 + g)); }

}  // namespace cohprobe::kitaev
