#include "cohprobe/tfim.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace cohprobe::tfim {
namespace {

using std::numbers::pi;

// 1 + l^2 + 2 l cos(p) written as (1 - l)^2 + 4 l cos^2(p/2) to keep
// precision where it vanishes (l -> 1, p -> pi).
double omega(double lambda, double phi) {
  const double c = std::cos(0.5 * phi);
  const double d = 1.0 - lambda;
  return std::sqrt(d * d + 4.0 * lambda * c * c);
}

void require_temperature(double kBT) {
  if (!(kBT > 0.0) || !std::isfinite(kBT)) {
    throw Error(ErrorKind::InvalidArgument, "thermal formulas require a finite kBT > 0");
  }
}

void require_lambda(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorKind::InvalidArgument, "lambda must be finite and non-negative");
  }
}

// -(1/pi) int_0^pi g(p) tanh(-w/kBT) / w dp.
double thermal_integral(double lambda, double kBT, const quad::QuadratureSpec& spec,
                        double (*g)(double lambda, double phi)) {
  auto integrand = [=](double phi) {
    const double w = omega(lambda, phi);
    if (w == 0.0) return 0.0;
    return g(lambda, phi) * std::tanh(-w / kBT) / w;
  };
  return -quad::integrate_1d(integrand, 0.0, pi, spec).value / pi;
}

}  // namespace

const char* to_string(Convention c) noexcept {
  return c == Convention::CouplingOverField ? "coupling_over_field" : "field_over_coupling";
}

const char* to_string(StateKind k) noexcept {
  switch (k) {
    case StateKind::SymmetryBroken:
      return "symmetry_broken";
    case StateKind::ThermalGround:
      return "thermal_ground";
    case StateKind::Gibbs:
      return "gibbs";
  }
  return "unknown";
}

TfimPoint TfimPoint::symmetry_broken(double lambda) {
  return {lambda, Convention::CouplingOverField, 0.0, StateKind::SymmetryBroken};
}

TfimPoint TfimPoint::thermal_ground(double lambda) {
  return {lambda, Convention::CouplingOverField, 0.0, StateKind::ThermalGround};
}

TfimPoint TfimPoint::gibbs(double lambda, double kBT) {
  return {lambda, Convention::FieldOverCoupling, kBT, StateKind::Gibbs};
}

void TfimPoint::validate() const {
  require_lambda(lambda);
  if (state_kind == StateKind::Gibbs) {
    require_temperature(kBT);
    if (convention != Convention::FieldOverCoupling) {
      throw Error(ErrorKind::InvalidArgument, "Gibbs states use the field_over_coupling convention");
    }
  } else {
    if (kBT != 0.0) {
      throw Error(ErrorKind::InvalidArgument, "ground states require kBT = 0");
    }
    if (convention != Convention::CouplingOverField) {
      throw Error(ErrorKind::InvalidArgument, "ground states use the coupling_over_field convention");
    }
  }
}

double ground_sz(double lambda) {
  require_lambda(lambda);
  if (lambda <= kCriticalLambda) return 0.0;
  return std::pow(1.0 - 1.0 / (lambda * lambda), 0.125);
}

double ground_sx(double lambda, const quad::QuadratureSpec& spec) {
  require_lambda(lambda);
  // 1 + l cos p = (1 - l) + 2 l cos^2(p/2)
  auto integrand = [lambda](double phi) {
    const double w = omega(lambda, phi);
    if (w == 0.0) return 0.0;
    const double c = std::cos(0.5 * phi);
    return ((1.0 - lambda) + 2.0 * lambda * c * c) / w;
  };
  return quad::integrate_1d(integrand, 0.0, pi, spec).value / pi;
}

double thermal_sx(double lambda, double kBT, const quad::QuadratureSpec& spec) {
  require_lambda(lambda);
  require_temperature(kBT);
  // l + cos p = (l - 1) + 2 cos^2(p/2)
  return thermal_integral(lambda, kBT, spec, [](double l, double phi) {
    const double c = std::cos(0.5 * phi);
    return (l - 1.0) + 2.0 * c * c;
  });
}

TfimObservables thermal_observables(double lambda, double kBT, const quad::QuadratureSpec& spec) {
  require_lambda(lambda);
  require_temperature(kBT);
  TfimObservables o;
  o.sx = thermal_sx(lambda, kBT, spec);
  // G(-/+1) of the nearest-neighbour correlators: the first integrand carries
  // cos(p) (l + cos p); the sin^2 term enters with the printed +/- sign.
  const double even = thermal_integral(lambda, kBT, spec, [](double l, double phi) {
    const double c = std::cos(phi);
    return c * (l + c);
  });
  const double odd = -thermal_integral(lambda, kBT, spec, [](double, double phi) {
    const double s = std::sin(phi);
    return s * s;
  });
  o.g_plus = even + odd;
  o.g_minus = even - odd;
  o.gxx = o.sx * o.sx - o.g_plus * o.g_minus;
  o.gyy = o.g_plus;
  o.gzz = o.g_minus;
  return o;
}

quantum::TwoSiteExpectations thermal_two_site_native(double lambda, double kBT,
                                                     const quad::QuadratureSpec& spec) {
  const TfimObservables o = thermal_observables(lambda, kBT, spec);
  quantum::TwoSiteExpectations e;
  e(1, 1) = o.gxx;
  e(2, 2) = o.gyy;
  e(3, 3) = o.gzz;
  e(1, 0) = o.sx;
  e(0, 1) = o.sx;
  return e;
}

quantum::TwoSiteExpectations swap_x_z(const quantum::TwoSiteExpectations& e) {
  constexpr int relabel[4] = {0, 3, 2, 1};
  quantum::TwoSiteExpectations out;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) out(relabel[a], relabel[b]) = e(a, b);
  }
  return out;
}

quantum::TwoSiteExpectations thermal_two_site(double lambda, double kBT,
                                              const quad::QuadratureSpec& spec) {
  return swap_x_z(thermal_two_site_native(lambda, kBT, spec));
}

quantum::OneSiteExpectations one_site_expectations(const TfimPoint& p,
                                                   const quad::QuadratureSpec& spec) {
  p.validate();
  switch (p.state_kind) {
    case StateKind::SymmetryBroken:
      return {ground_sx(p.lambda, spec), 0.0, ground_sz(p.lambda)};
    case StateKind::ThermalGround:
      return {ground_sx(p.lambda, spec), 0.0, 0.0};
    case StateKind::Gibbs:
      return {thermal_sx(p.lambda, p.kBT, spec), 0.0, 0.0};
  }
  throw Error(ErrorKind::InvalidArgument, "unknown state kind");
}

quantum::DensityMatrix one_site_state(const TfimPoint& p, const quad::QuadratureSpec& spec) {
  return quantum::reconstruct_one_site(one_site_expectations(p, spec));
}

double one_site_coherence(const TfimPoint& p, const quad::QuadratureSpec& spec) {
  return quantum::coherence(one_site_state(p, spec));
}

}  // namespace cohprobe::tfim
