#include "cohprobe/xx.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cohprobe::xx {

using std::numbers::pi;

void XxPoint::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorKind::InvalidArgument, "XX field lambda must be finite and non-negative");
  }
}

quantum::TwoSiteExpectations xx_expectations(const XxPoint& p, YyTreatment yy) {
  p.validate();
  // arccos clamped at 0 in the polarized phase.
  const double theta = std::acos(std::min(p.lambda, 1.0));
  const double sz = 1.0 - 2.0 * theta / pi;
  const double l = std::min(p.lambda, 1.0);
  const double szz = sz * sz - 4.0 * (1.0 - l * l) / (pi * pi);
  const double sxx = -2.0 * std::sin(theta) / pi;

  quantum::TwoSiteExpectations e;
  e(3, 0) = sz;
  e(0, 3) = sz;
  e(3, 3) = szz;
  e(1, 1) = sxx;
  if (yy == YyTreatment::FromSymmetry) e(2, 2) = sxx;
  return e;
}

quantum::DensityMatrix two_site_state(const XxPoint& p, YyTreatment yy) {
  return quantum::reconstruct_two_site(xx_expectations(p, yy));
}

quantum::DensityMatrix one_site_state(const XxPoint& p) {
  const auto e = xx_expectations(p);
  return quantum::reconstruct_one_site({0.0, 0.0, e(3, 0)});
}

double xx_coherence(const XxPoint& p, YyTreatment yy) {
  return quantum::coherence(two_site_state(p, yy));
}

}  // namespace cohprobe::xx
