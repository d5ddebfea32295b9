#include "doctest.h"
#include "helpers.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "cohprobe/ed.hpp"
#include "cohprobe/tfim.hpp"
#include "cohprobe/xx.hpp"

using namespace cohprobe;
using namespace cohprobe::ed;
using quantum::DensityMatrix;
using quantum::Matrix;

namespace {

ChainSpec chain(int n, Model m, double lambda, double kBT = 0.0,
                Boundary b = Boundary::Periodic) {
  ChainSpec s;
  s.n_sites = n;
  s.model = m;
  s.lambda = lambda;
  s.kBT = kBT;
  s.boundary = b;
  return s;
}

std::vector<double> dense_energies(const Eigen::MatrixXd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  const Eigen::VectorXd v = es.eigenvalues();
  return {v.data(), v.data() + v.size()};
}

// Ground energy per site of the infinite chain -sum zz - lambda sum x.
double tfim_e0(double lambda) {
  auto f = [lambda](double k) { return std::sqrt(1 + lambda * lambda + 2 * lambda * std::cos(k)); };
  return -testutil::simpson(f, 0.0, std::numbers::pi, 4000) / std::numbers::pi;
}

// ln Z of the periodic chain -sum zz - lambda sum x from its Jordan-Wigner
// fermions, keeping both parity sectors exactly. Independent of the ED code
// and valid for any N, so it bridges N = 12 and the infinite chain.
double free_fermion_log_z(int n, double lambda, double kBT) {
  const double beta = 1.0 / kBT;
  struct Sector {
    double log_plus = 0.0;   // ln prod 2 cosh(beta e / 2)
    double log_minus = 0.0;  // ln |prod 2 sinh(beta e / 2)|
    double sign = 1.0;
  };
  auto sector = [&](bool periodic) {
    Sector s;
    for (int j = 0; j < n; ++j) {
      const double k = periodic ? 2 * std::numbers::pi * j / n : std::numbers::pi * (2 * j + 1) / n;
      double e = 2 * std::sqrt(1 + lambda * lambda - 2 * lambda * std::cos(k));
      if (periodic && j == 0) e = 2 * (lambda - 1);
      if (periodic && 2 * j == n) e = 2 * (lambda + 1);
      const double x = 0.5 * beta * e;
      s.log_plus += std::abs(x) + std::log1p(std::exp(-2 * std::abs(x)));
      s.log_minus += std::abs(x) + std::log(-std::expm1(-2 * std::abs(x)));
      if (x < 0) s.sign = -s.sign;
    }
    return s;
  };
  const Sector a = sector(false);
  const Sector p = sector(true);
  const std::array<double, 4> logs{a.log_plus, a.log_minus, p.log_plus, p.log_minus};
  const std::array<double, 4> signs{1.0, a.sign, 1.0, -p.sign};
  const double top = *std::max_element(logs.begin(), logs.end());
  double sum = 0.0;
  for (int i = 0; i < 4; ++i) sum += signs[i] * std::exp(logs[i] - top);
  return top + std::log(0.5 * sum);
}

double free_fermion_sx(int n, double lambda, double kBT) {
  const double h = 1e-5;
  return kBT * (free_fermion_log_z(n, lambda + h, kBT) - free_fermion_log_z(n, lambda - h, kBT)) /
         (2 * h * n);
}

}  // namespace

TEST_SUITE("ed") {

TEST_CASE("two-site spectra") {
  auto s = chain(2, Model::Tfim, 0.0);
  s.convention = tfim::Convention::CouplingOverField;
  auto e = diagonalize(s)->energies();
  const std::vector<double> expect{-2, 0, 0, 2};
  for (int i = 0; i < 4; ++i) CHECK(e[i] == doctest::Approx(expect[i]).epsilon(1e-12));

  // the hopping term is (xx + yy) / 2
  e = diagonalize(chain(2, Model::Xx, 0.0))->energies();
  for (int i = 0; i < 4; ++i) CHECK(2 * e[i] == doctest::Approx(expect[i]).epsilon(1e-12));

  // periodic N = 2 counts its bond once
  CHECK(chain(2, Model::Tfim, 0.3).bonds().size() == 1);
}

TEST_CASE("Hamiltonians are symmetric") {
  for (Model m : {Model::Tfim, Model::Xx}) {
    for (Boundary b : {Boundary::Periodic, Boundary::Open}) {
      const Eigen::MatrixXd h = build_hamiltonian(chain(6, m, 0.7, 0.0, b));
      CHECK((h - h.transpose()).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("momentum blocks reproduce the dense spectrum") {
  for (Model m : {Model::Tfim, Model::Xx}) {
    for (int n : {4, 6, 8}) {
      const auto s = chain(n, m, 0.8);
      const auto blocks = diagonalize(s)->energies();
      const auto dense = dense_energies(build_hamiltonian(s));
      REQUIRE(blocks.size() == dense.size());
      for (std::size_t i = 0; i < dense.size(); ++i) CHECK(std::abs(blocks[i] - dense[i]) < 1e-11);
    }
  }
}

TEST_CASE("block and dense Gibbs states coincide") {
  const auto s = chain(6, Model::Tfim, 0.9, 0.4);
  const DensityMatrix a = GibbsState(diagonalize(s), 0.4).density_matrix();
  const DensityMatrix b = gibbs_state(build_hamiltonian(s), 0.4);
  CHECK(testutil::max_abs(a.matrix() - b.matrix()) < 1e-12);
}

TEST_CASE("Gibbs limits") {
  const auto s = chain(6, Model::Tfim, 0.5);
  const auto spec = diagonalize(s);
  const Matrix hot = GibbsState(spec, 1e6).density_matrix().matrix();
  CHECK(testutil::max_abs(hot - Matrix::Identity(64, 64) / 64.0) < 1e-6);

  const Eigen::MatrixXd h = build_hamiltonian(s);
  const Matrix cold = GibbsState(spec, 1e-6).density_matrix().matrix();
  CHECK(std::abs((cold * h.cast<quantum::Complex>()).trace().real() - spec->ground_energy()) < 1e-9);
  CHECK(std::abs((cold * cold).trace().real() - 1.0) < 1e-9);

  // lambda = 0: the two polarized states share the ground energy
  const Matrix mix = GibbsState(diagonalize(chain(6, Model::Tfim, 0.0)), 0.0).density_matrix().matrix();
  CHECK(std::abs(mix(0, 0) - 0.5) < 1e-12);
  CHECK(std::abs(mix(63, 63) - 0.5) < 1e-12);
  CHECK(std::abs(mix.trace() - 1.0) < 1e-12);
}

TEST_CASE("partial traces") {
  // basis index 1: site 0 down, site 1 up
  Matrix p = Matrix::Zero(4, 4);
  p(1, 1) = 1.0;
  const DensityMatrix prod(p);
  const std::array<int, 1> a{0};
  const std::array<int, 1> b{1};
  CHECK(std::abs(reduce(prod, a)(1, 1) - 1.0) < 1e-15);
  CHECK(std::abs(reduce(prod, b)(0, 0) - 1.0) < 1e-15);

  Matrix bell = Matrix::Zero(4, 4);
  bell(0, 0) = bell(0, 3) = bell(3, 0) = bell(3, 3) = 0.5;
  CHECK(testutil::max_abs(reduce(DensityMatrix(bell), a).matrix() - Matrix::Identity(2, 2) / 2.0) < 1e-15);

  // kept sites become Kronecker factors in the order given
  const std::array<int, 2> in_order{0, 1};
  const std::array<int, 2> swapped{1, 0};
  CHECK(std::abs(reduce(prod, in_order)(2, 2) - 1.0) < 1e-15);
  CHECK(std::abs(reduce(prod, swapped)(1, 1) - 1.0) < 1e-15);

  std::mt19937_64 rng(5);
  const DensityMatrix r(testutil::random_density(16, rng));
  const std::array<int, 2> pair{1, 3};
  // the reduced pair is a Kronecker product, so site 1 lands on the high bit
  const DensityMatrix two = reduce(r, pair);
  CHECK(testutil::max_abs(reduce(two, b).matrix() - reduce(r, std::array<int, 1>{1}).matrix()) < 1e-14);
  CHECK(testutil::max_abs(reduce(two, a).matrix() - reduce(r, std::array<int, 1>{3}).matrix()) < 1e-14);

  const std::array<int, 2> bad{2, 2};
  CHECK_THROWS_AS(reduce(r, bad), Error);
}

TEST_CASE("reduction from the spectral form") {
  const auto s = chain(8, Model::Xx, 0.4, 0.3);
  const GibbsState g(diagonalize(s), 0.3);
  const std::array<int, 2> bond{2, 3};
  CHECK(testutil::max_abs(reduce(g, bond).matrix() - reduce(g.density_matrix(), bond).matrix()) < 1e-12);
}

TEST_CASE("periodic chains are translation invariant") {
  const GibbsState g(diagonalize(chain(8, Model::Tfim, 0.7, 0.5)), 0.5);
  const auto a = observables(reduce(g, std::array<int, 2>{0, 1}));
  const auto b = observables(reduce(g, std::array<int, 2>{5, 6}));
  CHECK(std::abs(a.sx - b.sx) < 1e-12);
  CHECK(std::abs(a.gxx - b.gxx) < 1e-12);
  CHECK(std::abs(a.gzz - b.gzz) < 1e-12);
}

TEST_CASE("ground energy per site converges to the infinite chain") {
  const double e0 = tfim_e0(0.5);
  double last = 1.0;
  for (int n : {6, 8, 10, 12}) {
    const double err = std::abs(diagonalize(chain(n, Model::Tfim, 0.5))->ground_energy() / n - e0);
    CHECK(err < last);
    last = err;
  }
  CHECK(last < 1e-5);
}

TEST_CASE("finite chains approach the thermal formulas") {
  const double lambda = 1.2;
  const double kBT = 0.5;
  const auto f = tfim::thermal_observables(lambda, kBT);
  double last = 1.0;
  for (int n : {6, 8, 10}) {
    const auto o = gibbs_observables(chain(n, Model::Tfim, lambda, kBT));
    const double dev = std::max({std::abs(o.sx - f.sx), std::abs(o.gxx - f.gxx),
                                 std::abs(o.gyy - f.gyy), std::abs(o.gzz - f.gzz)});
    CHECK(dev < last);
    last = dev;
  }
  CHECK(last < 2e-2);
}

TEST_CASE("free fermions bridge the oracle and the infinite chain") {
  for (double lambda : {0.8, 1.2}) {
    for (int n : {8, 12}) {
      const auto o = gibbs_observables(chain(n, Model::Tfim, lambda, 0.5));
      CHECK(std::abs(o.sx - free_fermion_sx(n, lambda, 0.5)) < 1e-8);
    }
    CHECK(std::abs(free_fermion_sx(400, lambda, 0.5) - tfim::thermal_sx(lambda, 0.5)) < 1e-8);
  }
  // In the ordered phase the approach is slow: N = 12 is still 0.025 away.
  CHECK(std::abs(free_fermion_sx(12, 0.8, 0.5) - tfim::thermal_sx(0.8, 0.5)) > 2e-2);
  CHECK(std::abs(free_fermion_sx(40, 0.8, 0.5) - tfim::thermal_sx(0.8, 0.5)) < 1e-3);
}

TEST_CASE("XX ground state against the infinite chain") {
  const auto o = gibbs_observables(chain(12, Model::Xx, 0.5));
  const auto f = xx::xx_expectations({0.5});
  CHECK(std::abs(o.sz - f(0, 3)) < 2e-2);
  CHECK(std::abs(std::abs(o.gxx) - std::abs(f(1, 1))) < 2e-2);
  CHECK(std::abs(o.gxx - o.gyy) < 1e-12);
  CHECK(std::abs(o.gzz - f(3, 3)) < 2e-2);

  // fully polarized above the saturation field
  const auto p = gibbs_observables(chain(8, Model::Xx, 1.5));
  CHECK(p.sz == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(p.gxx) < 1e-12);
}

TEST_CASE("chain validation") {
  CHECK_THROWS_AS(chain(3, Model::Tfim, 0.5).validate(), Error);
  CHECK_NOTHROW(chain(3, Model::Tfim, 0.5, 0.0, Boundary::Open).validate());
  CHECK_THROWS_AS(chain(13, Model::Tfim, 0.5).validate(), Error);
  CHECK_THROWS_AS(chain(6, Model::Tfim, 0.5, -1.0).validate(), Error);
  CHECK_THROWS_AS(diagonalize(chain(1, Model::Xx, 0.5)), Error);
}

}  // TEST_SUITE
