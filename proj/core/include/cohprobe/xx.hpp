#pragma once

// Spin-1/2 XX chain H = -1/2 sum (xx + yy) - lambda sum z, thermodynamic limit.

#include "cohprobe/quantum.hpp"

namespace cohprobe::xx {

inline constexpr double kCriticalLambda = 1.0;

struct XxPoint {
  double lambda = 0.0;

  void validate() const;
};

/// Whether <sigma^y sigma^y> is filled in. The U(1) symmetry of the chain
/// makes it equal to <sigma^x sigma^x>; `Omit` reproduces the table with only
/// the coefficients listed for the model, which is generally not a state.
enum class YyTreatment { FromSymmetry, Omit };

/// <sigma^z>, <sigma^z sigma^z>, <sigma^x sigma^x> (and <sigma^y sigma^y>).
/// For lambda >= 1 the chain is fully polarized.
quantum::TwoSiteExpectations xx_expectations(const XxPoint& p,
                                             YyTreatment yy = YyTreatment::FromSymmetry);

quantum::DensityMatrix two_site_state(const XxPoint& p,
                                      YyTreatment yy = YyTreatment::FromSymmetry);

/// Diagonal one-site state (I + <z> sigma^z) / 2.
quantum::DensityMatrix one_site_state(const XxPoint& p);

/// Coherence of two adjacent spins, in bits.
double xx_coherence(const XxPoint& p, YyTreatment yy = YyTreatment::FromSymmetry);

}  // namespace cohprobe::xx
