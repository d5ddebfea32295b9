#include "doctest.h"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "cohprobe/optimize.hpp"
#include "cohprobe/parallel.hpp"

using namespace cohprobe;

TEST_SUITE("optimize") {

TEST_CASE("golden section finds interior and end-point maxima") {
  auto f = [](double x) { return -(x - 0.3) * (x - 0.3); };
  CHECK(optimize::golden_section_max(f, 0.0, 1.0, 1e-9) == doctest::Approx(0.3).epsilon(1e-8));
  auto g = [](double x) { return x; };
  CHECK(optimize::golden_section_max(g, 0.0, 1.0, 1e-9) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("grid argmax with ties and boundaries") {
  const std::vector<double> xs{0.0, 0.1, 0.2, 0.3, 0.4};
  auto m = optimize::grid_argmax(xs, {0.0, 1.0, 3.0, 2.0, 0.0});
  CHECK(m.index == 2);
  CHECK(m.x == 0.2);
  CHECK_FALSE(m.tie);
  CHECK_FALSE(m.at_boundary);

  m = optimize::grid_argmax(xs, {0.0, 3.0, 1.0, 3.0, 0.0});
  CHECK(m.tie);
  CHECK(m.index == 1);

  m = optimize::grid_argmax(xs, {5.0, 3.0, 1.0, 3.0, 0.0});
  CHECK(m.at_boundary);
}

TEST_CASE("uniform grid") {
  const auto g = optimize::uniform_grid(0.0, 1.0, 0.1);
  REQUIRE(g.size() == 11);
  CHECK(g.back() == doctest::Approx(1.0));
  CHECK(optimize::uniform_grid(0.0, 1.05, 0.1).size() == 11);
}

TEST_CASE("parallel_for runs every index once and rethrows") {
  std::vector<std::atomic<int>> hits(100);
  parallel::parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; }, 3);
  for (auto& h : hits) CHECK(h.load() == 1);

  CHECK_THROWS_AS(parallel::parallel_for(10, [](std::size_t i) {
    if (i == 7) throw std::runtime_error("seven");
  }, 2), std::runtime_error);
}

TEST_CASE("thread count honours the environment") {
  setenv("COHPROBE_THREADS", "3", 1);
  CHECK(parallel::thread_count() == 3);
  setenv("COHPROBE_THREADS", "junk", 1);
  CHECK(parallel::thread_count() >= 1);
  unsetenv("COHPROBE_THREADS");
}

}  // TEST_SUITE
