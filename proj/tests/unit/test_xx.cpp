#include "doctest.h"
#include "helpers.hpp"

#include <cmath>
#include <numbers>

#include "cohprobe/xx.hpp"

using namespace cohprobe;
using namespace cohprobe::xx;
using std::numbers::pi;

TEST_SUITE("xx") {

TEST_CASE("expectations at the special points") {
  const auto e0 = xx_expectations({0.0});
  CHECK(std::abs(e0(3, 0)) < 1e-15);
  CHECK(e0(3, 3) == doctest::Approx(-4 / (pi * pi)).epsilon(1e-14));
  CHECK(e0(1, 1) == doctest::Approx(-2 / pi).epsilon(1e-14));
  CHECK(e0(2, 2) == e0(1, 1));
  CHECK(e0(0, 3) == e0(3, 0));

  const auto e1 = xx_expectations({1.0});
  CHECK(e1(3, 0) == 1.0);
  CHECK(e1(1, 1) == 0.0);
  CHECK(e1(3, 3) == 1.0);

  CHECK(xx_expectations({0.5}, YyTreatment::Omit)(2, 2) == 0.0);
  CHECK_THROWS_AS(xx_expectations({-0.5}), Error);
}

TEST_CASE("polarized phase has no coherence") {
  for (double l = 1.0; l <= 2.0; l += 0.01) CHECK(xx_coherence({l}) <= 1e-12);
  CHECK(xx_coherence({1.5}) == 0.0);
}

TEST_CASE("coherence is positive below the transition") {
  const double c0 = xx_coherence({0.0});
  CHECK(c0 > 0.0);
  // closed form of the lambda = 0 state: eigenvalues (1 + zz +/- 0) / 4 and (1 - zz +/- 2|xx|) / 4
  const double zz = -4 / (pi * pi);
  const double xx = 2 / pi;
  const std::vector<double> ev{(1 + zz) / 4, (1 + zz) / 4, (1 - zz + 2 * xx) / 4, (1 - zz - 2 * xx) / 4};
  const std::vector<double> diag{(1 + zz) / 4, (1 - zz) / 4, (1 - zz) / 4, (1 + zz) / 4};
  CHECK(c0 == doctest::Approx(quantum::shannon_entropy(diag) - quantum::shannon_entropy(ev)).epsilon(1e-12));
  for (double l = 0.0; l <= 0.99; l += 0.01) CHECK(xx_coherence({l}) > 0.0);
}

TEST_CASE("one-site state is diagonal") {
  for (double l : {0.0, 0.3, 0.9, 1.4}) {
    const auto r = one_site_state({l});
    CHECK(r.is_diagonal());
    CHECK(quantum::coherence(r) == 0.0);
  }
}

TEST_CASE("continuity away from the transition and divergent slope at it") {
  double prev = xx_coherence({0.0});
  for (double l = 0.001; l < 0.999; l += 0.001) {
    const double c = xx_coherence({l});
    CHECK(std::abs(c - prev) < 0.02);
    prev = c;
  }
  auto slope = [](double l) { return (xx_coherence({l}) - xx_coherence({l - 1e-7})) / 1e-7; };
  CHECK(std::abs(slope(1 - 1e-4)) >= 5 * std::abs(slope(1 - 1e-2)));
  CHECK(xx_coherence({1 - 1e-9}) < 1e-3);
}

TEST_CASE("zz correlations lie below the product of magnetizations") {
  for (double l = 0.0; l < 1.0; l += 0.01) {
    const auto e = xx_expectations({l});
    CHECK(e(3, 3) - e(3, 0) * e(3, 0) <= 0.0);
  }
}

TEST_CASE("including yy is what makes the table a state") {
  for (double l = 0.0; l < 1.0; l += 0.05) {
    CHECK_THROWS_AS(two_site_state({l}, YyTreatment::Omit), Error);
    CHECK_NOTHROW(two_site_state({l}, YyTreatment::FromSymmetry));
  }
  // nothing to omit once the chain is polarized
  CHECK(xx_coherence({1.5}, YyTreatment::Omit) == xx_coherence({1.5}));
}

}  // TEST_SUITE
