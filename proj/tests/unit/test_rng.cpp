#include <cmath>

#include "doctest.h"
#include "jamsim/rng.hpp"

using namespace jamsim;

TEST_CASE("streams are deterministic and isolated") {
  Rng a(42, 0), b(42, 0), c(42, 1);
  for (int i = 0; i < 100; ++i) {
    const auto va = a.next_u64();
    CHECK(va == b.next_u64());
  }
  bool differs = false;
  Rng a2(42, 0);
  for (int i = 0; i < 100; ++i) {
    if (a2.next_u64() != c.next_u64()) differs = true;
  }
  CHECK(differs);
}

TEST_CASE("uniform stays in [0,1) and looks flat") {
  Rng rng(7, 3);
  double sum = 0.0;
  for (int i = 0; i < 200000; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(std::fabs(sum / 200000.0 - 0.5) < 0.005);
}

TEST_CASE("normal has the right first moments") {
  Rng rng(11, 0);
  double sum = 0.0, sq = 0.0, quad = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sq += x * x;
    quad += x * x * x * x;
  }
  CHECK(std::fabs(sum / n) < 0.01);
  CHECK(sq / n == doctest::Approx(1.0).epsilon(0.02));
  CHECK(quad / n == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("exponential has the requested rate") {
  Rng rng(13, 2);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = rng.exponential(4.0);
    REQUIRE(x >= 0.0);
    sum += x;
  }
  CHECK(sum / n == doctest::Approx(0.25).epsilon(0.02));
}

TEST_CASE("uniform_below is unbiased over small ranges") {
  Rng rng(17, 0);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 140000; ++i) {
    ++counts[static_cast<std::size_t>(rng.uniform_below(7))];
  }
  for (const int c : counts) {
    CHECK(std::fabs(c - 20000.0) < 600.0);
  }
}
