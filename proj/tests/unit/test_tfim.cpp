#include "doctest.h"
#include "helpers.hpp"

#include <cmath>
#include <numbers>

#include "cohprobe/tfim.hpp"

using namespace cohprobe;
using namespace cohprobe::tfim;
using std::numbers::pi;

namespace {

double omega(double l, double p) { return std::sqrt(1 + l * l + 2 * l * std::cos(p)); }

// (1/pi) int_0^pi g(p) tanh(w / T) / w dp by Simpson.
template <class G>
double thermal_reference(double l, double T, G g) {
  return testutil::simpson([&](double p) { return g(p) * std::tanh(omega(l, p) / T) / omega(l, p); }, 0, pi, 20000) / pi;
}

}  // namespace

TEST_SUITE("tfim") {

TEST_CASE("order parameter") {
  CHECK(ground_sz(0.5) == 0.0);
  CHECK(ground_sz(1.0) == 0.0);
  CHECK(ground_sz(2.0) == doctest::Approx(std::pow(0.75, 0.125)).epsilon(1e-15));
  CHECK(ground_sz(2.0) == doctest::Approx(0.964679).epsilon(1e-6));
  CHECK(ground_sz(1e3) > 0.9999);
  CHECK_THROWS_AS(ground_sz(-0.1), Error);
}

TEST_CASE("transverse magnetization") {
  CHECK(ground_sx(0.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(ground_sx(1.0) == doctest::Approx(2.0 / pi).epsilon(1e-10));
  CHECK(std::abs(ground_sx(1e3)) < 2e-3);
  for (double l : {0.3, 0.9, 2.0, 3.5}) {
    const double ref =
        testutil::simpson([&](double p) { return (1 + l * std::cos(p)) / omega(l, p); }, 0, pi, 20000) / pi;
    CHECK(ground_sx(l) == doctest::Approx(ref).epsilon(1e-10));
  }
}

TEST_CASE("one-site states") {
  const auto sb0 = one_site_state(TfimPoint::symmetry_broken(0.0));
  CHECK(std::abs(sb0.matrix()(0, 1) - quantum::Complex(0.5, 0)) < 1e-12);
  CHECK(one_site_coherence(TfimPoint::symmetry_broken(0.0)) == doctest::Approx(1.0).epsilon(1e-9));

  const auto e = one_site_expectations(TfimPoint::thermal_ground(2.0));
  CHECK(e.z == 0.0);
  CHECK(e.x == doctest::Approx(ground_sx(2.0)).epsilon(1e-15));

  const auto hot = one_site_expectations(TfimPoint::gibbs(0.8, 1e3));
  CHECK(std::abs(hot.x) < 2e-3);
  CHECK(one_site_coherence(TfimPoint::gibbs(0.8, 1e3)) < 1e-5);
}

TEST_CASE("thermal magnetization limits") {
  // T -> 0 with field 2 is the zero-temperature chain at J/B = 1/2
  CHECK(std::abs(thermal_sx(2.0, 1e-4) - ground_sx(0.5)) < 1e-4);
  CHECK(std::abs(thermal_sx(0.5, 1e-4) - ground_sx(2.0)) < 1e-4);
  for (double l : {0.0, 0.5, 1.0, 2.0}) CHECK(std::abs(thermal_sx(l, 1e3)) < 2e-3);
  CHECK(std::abs(thermal_sx(0.0, 1.0)) < 1e-12);
  CHECK(thermal_sx(0.8, 0.5) == doctest::Approx(thermal_reference(0.8, 0.5, [](double p) {
                                  return 0.8 + std::cos(p);
                                })).epsilon(1e-10));
}

TEST_CASE("nearest-neighbour correlators") {
  for (double l : {0.4, 0.8, 1.2}) {
    for (double T : {0.2, 0.5, 1.0}) {
      const auto o = thermal_observables(l, T);
      const double a = thermal_reference(l, T, [&](double p) { return std::cos(p) * (l + std::cos(p)); });
      const double b = thermal_reference(l, T, [](double p) { return std::sin(p) * std::sin(p); });
      CHECK(o.g_plus + o.g_minus == doctest::Approx(2 * a).epsilon(1e-9));
      CHECK(o.g_minus - o.g_plus == doctest::Approx(2 * b).epsilon(1e-9));
      CHECK(o.gyy == o.g_plus);
      CHECK(o.gzz == o.g_minus);
      CHECK(o.gxx == doctest::Approx(o.sx * o.sx - o.g_plus * o.g_minus).epsilon(1e-15));
      CHECK(o.sz == 0.0);
    }
  }
  const auto hot = thermal_observables(0.8, 1e3);
  CHECK(std::abs(hot.gxx) < 2e-3);
  CHECK(std::abs(hot.gyy) < 2e-3);
  CHECK(std::abs(hot.gzz) < 2e-3);
}

TEST_CASE("two-site table in the swapped basis is an X state") {
  const auto native = thermal_two_site_native(0.9, 0.4);
  const auto swapped = thermal_two_site(0.9, 0.4);
  CHECK(swapped(3, 3) == native(1, 1));
  CHECK(swapped(1, 1) == native(3, 3));
  CHECK(swapped(2, 2) == native(2, 2));
  CHECK(swapped(3, 0) == native(1, 0));
  CHECK(swapped(1, 0) == 0.0);
  const auto twice = swap_x_z(swapped);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) CHECK(twice(a, b) == native(a, b));

  const auto rho = quantum::reconstruct_two_site(swapped);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j && i + j != 3) CHECK(std::abs(rho.matrix()(i, j)) < 1e-15);

  const auto hot = quantum::reconstruct_two_site(thermal_two_site(0.8, 1e3));
  CHECK(testutil::max_abs(hot.matrix() - quantum::Matrix::Identity(4, 4) * 0.25) < 1e-3);
}

TEST_CASE("symmetry-broken coherence has a one-sided infinite slope at the critical point") {
  auto c = [](double l) { return one_site_coherence(TfimPoint::symmetry_broken(l)); };
  auto slope = [&](double l) { return (c(l + 1e-6) - c(l)) / 1e-6; };
  CHECK(std::abs(slope(1 + 1e-4)) > 5 * std::abs(slope(1 + 1e-2)));
}

TEST_CASE("thermal ground and symmetry-broken coherence agree in the disordered phase") {
  for (double l = 0.0; l <= 1.0; l += 0.05) {
    CHECK(one_site_coherence(TfimPoint::thermal_ground(l)) == one_site_coherence(TfimPoint::symmetry_broken(l)));
  }
  CHECK(one_site_coherence(TfimPoint::thermal_ground(1.5)) != one_site_coherence(TfimPoint::symmetry_broken(1.5)));
}

TEST_CASE("coherence decreases with temperature outside the ordered phase") {
  for (double l : {1.0, 1.2, 1.8, 3.0}) {
    double prev = INFINITY;
    for (double T = 0.05; T <= 2.0; T += 0.05) {
      const double c = one_site_coherence(TfimPoint::gibbs(l, T));
      CHECK(c <= prev + 1e-12);
      prev = c;
    }
  }
}

TEST_CASE("ordered phase: transverse magnetization first grows with temperature") {
  // Thermal domain walls free the spins to follow the field, so <x> and the
  // one-site coherence rise before the high-temperature decay sets in.
  const double cold = thermal_sx(0.3, 0.1);
  const double warm = thermal_sx(0.3, 1.0);
  CHECK(warm > cold + 0.01);
  CHECK(thermal_sx(0.3, 5.0) < warm);
  CHECK(one_site_coherence(TfimPoint::gibbs(0.3, 1.0)) > one_site_coherence(TfimPoint::gibbs(0.3, 0.1)));
}

TEST_CASE("convention and state validation") {
  TfimPoint p = TfimPoint::gibbs(0.8, 0.5);
  p.convention = Convention::CouplingOverField;
  CHECK_THROWS_AS(p.validate(), Error);
  p = TfimPoint::thermal_ground(0.8);
  p.kBT = 0.1;
  CHECK_THROWS_AS(p.validate(), Error);
  CHECK_THROWS_AS(TfimPoint::gibbs(0.8, 0.0).validate(), Error);
  CHECK_THROWS_AS(thermal_sx(0.8, -1.0), Error);
  CHECK(std::string(to_string(Convention::CouplingOverField)) == "coupling_over_field");
  CHECK(std::string(to_string(StateKind::Gibbs)) == "gibbs");
}

}  // TEST_SUITE
