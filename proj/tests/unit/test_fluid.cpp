#include <cmath>

#include "doctest.h"
#include "jamsim/errors.hpp"
#include "jamsim/fluid.hpp"

using namespace jamsim;

namespace {

double er_value(double c, double t) {
  return (1.0 + c) / c * (1.0 - std::exp(-c * t));
}

double sup_node_error(const FluidSolution& sol, double c) {
  double sup = 0.0;
  for (std::size_t i = 0; i < sol.times().size(); ++i) {
    sup = std::max(sup,
                   std::fabs(sol.values()[i] - er_value(c, sol.times()[i])));
  }
  return sup;
}

}  // namespace

TEST_CASE("zero drift gives the identity path") {
  const FluidSolution sol = solve_fluid([](double) { return 0.0; }, 1e-3, 2.0);
  CHECK(sol.hitting_time() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sol.value(0.25) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(sol.value(0.0) == 0.0);
  CHECK(hitting_time_fluid(sol) == sol.hitting_time());
}

TEST_CASE("er numeric solution matches the closed form") {
  for (const double c : {0.5, 1.0, 2.0, 3.0}) {
    CAPTURE(c);
    const FluidSolution sol =
        solve_fluid([c](double z) { return c * (1.0 - z); }, 1e-3, 4.0);
    CHECK(sup_node_error(sol, c) < 1e-8);
    CHECK(std::fabs(sol.hitting_time() - std::log1p(c) / c) < 1e-8);
    // interpolated values, off the nodes
    for (double t = 0.05; t < sol.t_end(); t += 0.1) {
      REQUIRE(std::fabs(sol.value(t) - er_value(c, t)) < 1e-8);
    }
  }
}

TEST_CASE("er hitting times") {
  const FluidSolution c1 =
      solve_fluid([](double z) { return 1.0 - z; }, 1e-3, 4.0);
  CHECK(c1.hitting_time() ==
        doctest::Approx(0.69314718055994531).epsilon(1e-8));
  const FluidSolution c2 =
      solve_fluid([](double z) { return 2.0 * (1.0 - z); }, 1e-3, 4.0);
  CHECK(c2.hitting_time() ==
        doctest::Approx(0.54930614433405485).epsilon(1e-8));
  CHECK(std::fabs(c1.value(c1.hitting_time()) - 1.0) < 1e-10);
  CHECK(std::fabs(c2.value(c2.hitting_time()) - 1.0) < 1e-10);
}

TEST_CASE("er closed form object") {
  const FluidSolution sol = er_closed_form(1.0);
  CHECK(sol.provenance() == FluidProvenance::closed_form);
  CHECK(sol.hitting_time() ==
        doctest::Approx(0.69314718055994531).epsilon(1e-15));
  CHECK(sol.value(sol.hitting_time()) == doctest::Approx(1.0).epsilon(1e-14));
  // rho = (1+c)/c is the t -> infinity level
  CHECK(sol.value(60.0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(er_closed_form(0.0), InvalidParameter);
  CHECK_THROWS_AS(er_closed_form(1.0, -1e-3), InvalidParameter);
}

TEST_CASE("hitting time decreases in c") {
  double prev = 2.0;
  for (const double c : {1.0, 10.0, 100.0}) {
    const double t = er_closed_form(c).hitting_time();
    CHECK(t < prev);
    prev = t;
  }
}

TEST_CASE("path is strictly increasing on the grid") {
  const FluidSolution sol =
      solve_fluid([](double z) { return 2.0 * (1.0 - z); }, 1e-3, 4.0);
  for (std::size_t i = 1; i < sol.values().size(); ++i) {
    REQUIRE(sol.values()[i] > sol.values()[i - 1]);
  }
}

TEST_CASE("solver order: halving dt shrinks the error ~16x") {
  for (const double c : {0.5, 1.0, 2.0}) {
    CAPTURE(c);
    const FluidSolution coarse =
        solve_fluid([c](double z) { return c * (1.0 - z); }, 0.04, 4.0);
    const FluidSolution fine =
        solve_fluid([c](double z) { return c * (1.0 - z); }, 0.02, 4.0);
    const double ratio = sup_node_error(coarse, c) / sup_node_error(fine, c);
    CHECK(ratio >= 14.0);  // observed order >= 3.8
  }
}

TEST_CASE("no-hitting is flagged, not truncated") {
  // drift -> -1 pins the path below 1
  const FluidSolution sol = solve_fluid(
      [](double z) { return z < 0.5 ? -2.0 * z : -1.0; }, 1e-3, 2.0);
  CHECK(sol.hit() == HitKind::none);
  CHECK_THROWS_AS(sol.hitting_time(), NoHitting);
  CHECK_THROWS_AS(hitting_time_fluid(sol), NoHitting);
  CHECK(sol.t_end() >= 2.0 - 1e-9);  // grid still covers the horizon
}

TEST_CASE("stopped value caps at 1") {
  const FluidSolution sol = er_closed_form(1.0, 1e-3);
  CHECK(sol.stopped_value(0.2) == doctest::Approx(sol.value(0.2)));
  CHECK(sol.stopped_value(5.0) == 1.0);
}

TEST_CASE("solver input validation") {
  CHECK_THROWS_AS(solve_fluid([](double) { return 0.0; }, 0.0, 1.0),
                  InvalidParameter);
  CHECK_THROWS_AS(solve_fluid([](double) { return 0.0; }, 1e-3, 0.0),
                  InvalidParameter);
}
