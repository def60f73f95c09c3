#include <cmath>
#include <numeric>

#include "doctest.h"
#include "jamsim/errors.hpp"
#include "jamsim/kernel.hpp"
#include "jamsim/stats.hpp"

using namespace jamsim;

namespace {

PmfTable half_half_table(std::int64_t items) {
  // pmf(0)=pmf(1)=1/2 for x <= N-2, forced to k=0 at x = N-1.
  PmfTable t;
  t.buckets.push_back({0, {0.5, 0.5}});
  t.buckets.push_back({items - 1, {1.0}});
  return t;
}

PmfTable point_mass_table() {
  PmfTable t;
  t.buckets.push_back({0, {1.0}});
  return t;
}

}  // namespace

TEST_CASE("er kernel rejects invalid parameters") {
  CHECK_THROWS_AS(ErdosRenyiKernel(0, 1.0), InvalidParameter);
  CHECK_THROWS_AS(ErdosRenyiKernel(100, 0.0), InvalidParameter);
  CHECK_THROWS_AS(ErdosRenyiKernel(100, -1.0), InvalidParameter);
  CHECK_THROWS_AS(ErdosRenyiKernel(100, 100.0), InvalidParameter);
  CHECK_NOTHROW(ErdosRenyiKernel(100, 99.9));
}

TEST_CASE("er kernel moments and limits") {
  const ErdosRenyiKernel kernel(100, 2.0);
  CHECK(kernel.neighbor_mean(49) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(kernel.drift(0.5) == doctest::Approx(1.0).epsilon(1e-14));
  // gap between prelimit and limit drift is exactly c/N everywhere
  CHECK(std::fabs(kernel.neighbor_mean(49) - kernel.drift(0.49)) ==
        doctest::Approx(0.02).epsilon(1e-10));
  CHECK(kernel.approx_error() == doctest::Approx(0.02));
  CHECK(kernel.lipschitz() == doctest::Approx(2.0));
  CHECK(kernel.max_neighbor_var() == doctest::Approx(2.0));

  const ErdosRenyiKernel small(10, 3.0);
  CHECK(small.neighbor_mean(9) == 0.0);  // no unexplored items remain
  CHECK(small.neighbor_var(9) == 0.0);
  CHECK(small.pmf(0, 9) == 1.0);
}

TEST_CASE("er kernel pmf row: normalization and moments, exhaustive") {
  for (const std::int64_t n : {2000L, 10000L}) {
    const ErdosRenyiKernel kernel(n, 1.5);
    for (std::int64_t x = 0; x < n; ++x) {
      const auto row = kernel.pmf_row(x);
      double sum = 0.0, mean = 0.0, sq = 0.0;
      for (std::size_t k = 0; k < row.size(); ++k) {
        sum += row[k];
        mean += row[k] * static_cast<double>(k);
        sq += row[k] * static_cast<double>(k) * static_cast<double>(k);
      }
      REQUIRE(std::fabs(sum - 1.0) < 1e-12);
      REQUIRE(std::fabs(mean - kernel.neighbor_mean(x)) < 1e-10);
      REQUIRE(std::fabs(sq - mean * mean - kernel.neighbor_var(x)) < 1e-10);
    }
  }
}

TEST_CASE("er kernel approx error bound holds exhaustively at N = 10^4") {
  const std::int64_t n = 10000;
  const ErdosRenyiKernel kernel(n, 1.0);
  for (std::int64_t x = 0; x < n; ++x) {
    const double gap =
        std::fabs(kernel.neighbor_mean(x) -
                  kernel.drift(static_cast<double>(x) / static_cast<double>(n)));
    REQUIRE(gap <= kernel.approx_error() + 1e-15);
    REQUIRE(kernel.neighbor_mean(x) <= kernel.max_neighbor_mean() + 1e-15);
    REQUIRE(kernel.neighbor_var(x) <= kernel.max_neighbor_var() + 1e-15);
  }
}

TEST_CASE("er kernel pmf pointwise matches row recurrence") {
  const ErdosRenyiKernel kernel(500, 2.5);
  for (const std::int64_t x : {0L, 100L, 250L, 498L}) {
    const auto row = kernel.pmf_row(x);
    for (std::size_t k = 0; k < row.size(); k += 7) {
      CHECK(kernel.pmf(static_cast<std::int64_t>(k), x) ==
            doctest::Approx(row[k]).epsilon(1e-12));
    }
  }
  CHECK(kernel.pmf(-1, 0) == 0.0);
  CHECK(kernel.pmf(500, 0) == 0.0);  // outside support
  CHECK_THROWS_AS(kernel.pmf(0, 500), std::domain_error);
  CHECK_THROWS_AS(kernel.pmf(0, -1), std::domain_error);
}

TEST_CASE("drift is Lipschitz with the declared constant on [0, 2]") {
  const ErdosRenyiKernel kernel(100, 2.0);
  const double cl = kernel.lipschitz();
  for (int i = 0; i < 200; ++i) {
    const double a = i * 0.01;
    for (int j = i + 1; j < 201; j += 13) {
      const double b = j * 0.01;
      REQUIRE(std::fabs(kernel.drift(a) - kernel.drift(b)) <=
              cl * std::fabs(a - b) + 1e-12);
    }
  }
}

TEST_CASE("poisson limit pmf values") {
  CHECK(poisson_limit_pmf(0, 1.0, 5.0) == 1.0);
  CHECK(poisson_limit_pmf(1, 0.0, 1.0) ==
        doctest::Approx(0.36787944117144232).epsilon(1e-15));
  CHECK(poisson_limit_pmf(2, 0.5, 2.0) ==
        doctest::Approx(0.18393972058572116).epsilon(1e-15));
  CHECK_THROWS_AS(poisson_limit_pmf(0, -0.1, 1.0), std::domain_error);
  CHECK_THROWS_AS(poisson_limit_pmf(0, 1.1, 1.0), std::domain_error);
  CHECK_THROWS_AS(poisson_limit_pmf(-1, 0.5, 1.0), std::domain_error);
  CHECK_THROWS_AS(poisson_limit_pmf(0, 0.5, 0.0), std::domain_error);
}

TEST_CASE("binomial-poisson gap report") {
  const ErdosRenyiKernel kernel(1000, 1.0);
  const auto report = poisson_gap_report(kernel, 30, {0, 250, 500, 750});
  CHECK(std::isfinite(report.max_ratio));
  CHECK(report.max_ratio > 0.0);
  // Near the bulk the unit-constant inequality is honest ...
  const auto bulk = poisson_gap_report(kernel, 2, {0});
  CHECK(bulk.max_ratio < 5.0);
  // ... but in the far tail it fails by orders of magnitude; the report is
  // the deliverable, not the assertion.
  if (!report.unit_bound_holds) {
    CHECK(report.argmax_k > 10);
  }
}

TEST_CASE("tabular kernel validation errors") {
  SUBCASE("row sum off") {
    PmfTable t;
    t.buckets.push_back({0, {0.5, 0.49}});
    CHECK_THROWS_AS(TabularKernel(10, std::move(t), LimitSpec{}),
                    MalformedTable);
  }
  SUBCASE("negative mass") {
    PmfTable t;
    t.buckets.push_back({0, {1.5, -0.5}});
    CHECK_THROWS_AS(TabularKernel(10, std::move(t), LimitSpec{}),
                    MalformedTable);
  }
  SUBCASE("support wider than N-x-1") {
    PmfTable t;
    t.buckets.push_back({0, {0.5, 0.5}});  // covers x up to N-1 where only k=0 fits
    CHECK_THROWS_AS(TabularKernel(10, std::move(t), LimitSpec{}),
                    MalformedTable);
  }
  SUBCASE("bucket starts must increase from 0") {
    PmfTable t;
    t.buckets.push_back({1, {1.0}});
    CHECK_THROWS_AS(TabularKernel(10, std::move(t), LimitSpec{}),
                    MalformedTable);
  }
  SUBCASE("empty table") {
    CHECK_THROWS_AS(TabularKernel(10, PmfTable{}, LimitSpec{}),
                    MalformedTable);
  }
}

TEST_CASE("degenerate tabular kernel has zero moments") {
  const auto kernel = make_tabular_kernel(50, point_mass_table(),
                                          LimitSpec{{0.0}, {0.0}, {}});
  for (std::int64_t x = 0; x < 50; ++x) {
    REQUIRE(kernel->neighbor_mean(x) == 0.0);
    REQUIRE(kernel->neighbor_var(x) == 0.0);
  }
  CHECK(kernel->approx_error() == 0.0);
  CHECK(kernel->max_neighbor_mean() == 0.0);
}

TEST_CASE("tabular kernel reproduces er moments when fed binomial rows") {
  const std::int64_t n = 50;
  const double c = 1.0;
  const ErdosRenyiKernel er(n, c);
  PmfTable t;
  for (std::int64_t x = 0; x < n; ++x) {
    t.buckets.push_back({x, er.pmf_row(x)});
  }
  const TabularKernel tab(n, std::move(t), LimitSpec{{c, -c}, {c, -c}, {}});
  for (std::int64_t x = 0; x < n; ++x) {
    REQUIRE(std::fabs(tab.neighbor_mean(x) - er.neighbor_mean(x)) < 1e-10);
    REQUIRE(std::fabs(tab.neighbor_var(x) - er.neighbor_var(x)) < 1e-10);
  }
  // measured approx error agrees with the analytic c/N
  CHECK(tab.approx_error() ==
        doctest::Approx(er.approx_error()).epsilon(1e-9));
  CHECK(tab.lipschitz() == doctest::Approx(c).epsilon(1e-9));
}

TEST_CASE("sampling: empty support returns zero") {
  const ErdosRenyiKernel kernel(10, 0.5);
  Rng rng(7, 0);
  for (int i = 0; i < 100; ++i) CHECK(kernel.sample(9, rng) == 0);
  CHECK_THROWS_AS(kernel.sample(10, rng), std::domain_error);
}

TEST_CASE("sampling: er empirical mean matches prelimit drift") {
  const ErdosRenyiKernel kernel(10000, 1.0);
  Rng rng(123, 5);
  const std::int64_t samples = 1000000;
  double sum = 0.0;
  for (std::int64_t i = 0; i < samples; ++i) {
    sum += static_cast<double>(kernel.sample(0, rng));
  }
  const double mean = sum / static_cast<double>(samples);
  CHECK(std::fabs(mean - kernel.neighbor_mean(0)) < 3e-3);
}

TEST_CASE("sampling: tabular half-half empirical mean") {
  const auto kernel = make_tabular_kernel(100, half_half_table(100),
                                          LimitSpec{{0.5}, {0.25}, 0.0});
  Rng rng(99, 1);
  const std::int64_t samples = 1000000;
  double sum = 0.0;
  for (std::int64_t i = 0; i < samples; ++i) {
    sum += static_cast<double>(kernel->sample(10, rng));
  }
  CHECK(std::fabs(sum / static_cast<double>(samples) - 0.5) < 2e-3);
}

TEST_CASE("binomial sampler matches exact pmf in every regime") {
  struct Regime {
    std::int64_t n;
    double p;
  };
  // Spans: tiny-trials inversion, long-trials/small-mean inversion, BTRS at
  // its threshold, BTRS deep, and the symmetry flip.
  const Regime regimes[] = {{25, 0.4},   {2000, 0.004}, {1000, 0.012},
                            {1000, 0.05}, {500, 0.5},   {100, 0.95}};
  std::uint64_t stream = 0;
  for (const auto& regime : regimes) {
    CAPTURE(regime.n);
    CAPTURE(regime.p);
    Rng rng(2024, stream++);
    const std::int64_t samples = 100000;
    std::vector<std::int64_t> counts(static_cast<std::size_t>(regime.n) + 1,
                                     0);
    for (std::int64_t i = 0; i < samples; ++i) {
      ++counts[static_cast<std::size_t>(
          sample_binomial(regime.n, regime.p, rng))];
    }
    std::vector<double> probs(counts.size());
    for (std::size_t k = 0; k < probs.size(); ++k) {
      probs[k] = binomial_pmf(static_cast<std::int64_t>(k), regime.n,
                              regime.p);
    }
    const ChiSquare gof = chi_square_gof(counts, probs);
    CAPTURE(gof.statistic);
    CAPTURE(gof.dof);
    CHECK(gof.p_value > 1e-3);
  }
}

TEST_CASE("kernel sampling chi-square at several states") {
  // Exercises both the inversion path (large N, c=1) and BTRS (dense c).
  SUBCASE("sparse") {
    const ErdosRenyiKernel kernel(10000, 1.0);
    std::uint64_t stream = 10;
    for (const std::int64_t x : {0L, 5000L, 9990L}) {
      Rng rng(555, stream++);
      const auto row = kernel.pmf_row(x);
      std::vector<std::int64_t> counts(row.size(), 0);
      for (int i = 0; i < 100000; ++i) {
        ++counts[static_cast<std::size_t>(kernel.sample(x, rng))];
      }
      const ChiSquare gof = chi_square_gof(counts, row);
      CAPTURE(x);
      CHECK(gof.p_value > 1e-3);
    }
  }
  SUBCASE("dense") {
    const ErdosRenyiKernel kernel(100, 50.0);
    std::uint64_t stream = 20;
    for (const std::int64_t x : {0L, 40L, 90L}) {
      Rng rng(777, stream++);
      const auto row = kernel.pmf_row(x);
      std::vector<std::int64_t> counts(row.size(), 0);
      for (int i = 0; i < 100000; ++i) {
        ++counts[static_cast<std::size_t>(kernel.sample(x, rng))];
      }
      const ChiSquare gof = chi_square_gof(counts, row);
      CAPTURE(x);
      CHECK(gof.p_value > 1e-3);
    }
  }
}
