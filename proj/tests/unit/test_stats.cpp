#include <cmath>

#include "doctest.h"
#include "jamsim/diffusion.hpp"
#include "jamsim/errors.hpp"
#include "jamsim/fluid.hpp"
#include "jamsim/kernel.hpp"
#include "jamsim/rng.hpp"
#include "jamsim/stats.hpp"

using namespace jamsim;

TEST_CASE("ks statistic: samples at uniform quantiles give 0.5/n") {
  const std::size_t n = 40;
  std::vector<double> samples(n);
  for (std::size_t i = 0; i < n; ++i) {
    samples[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
  }
  const double d =
      ks_statistic(samples, [](double x) { return std::clamp(x, 0.0, 1.0); });
  CHECK(d == doctest::Approx(0.5 / static_cast<double>(n)).epsilon(1e-12));
}

TEST_CASE("ks statistic: single sample at the median") {
  const std::vector<double> samples{0.0};
  const double d = ks_statistic(samples, [](double x) {
    return normal_cdf(x);
  });
  CHECK(d == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("ks statistic rejects empty input") {
  const std::vector<double> samples;
  CHECK_THROWS_AS(ks_statistic(samples, [](double) { return 0.5; }),
                  InsufficientSample);
}

TEST_CASE("ks self-test: normal pseudo-samples pass at the 1% level") {
  const std::int64_t n = 10000;
  const double crit = kolmogorov_critical(0.01, n);
  CHECK(crit == doctest::Approx(0.016276).epsilon(1e-3));
  int good = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    Rng rng(880000 + s, 0);
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (auto& x : xs) x = rng.normal();
    const double d = ks_statistic(xs, [](double v) { return normal_cdf(v); });
    if (d < crit) ++good;
  }
  CHECK(good >= 99);
}

TEST_CASE("kolmogorov distribution: frozen quantiles") {
  CHECK(kolmogorov_critical(0.01, 1) ==
        doctest::Approx(1.62762361152).epsilon(1e-6));
  CHECK(kolmogorov_critical(0.001, 1) ==
        doctest::Approx(1.9494746035).epsilon(1e-6));
  CHECK(kolmogorov_critical(0.01, 2000) ==
        doctest::Approx(0.0364).epsilon(1e-2));
  CHECK(kolmogorov_sf(1.62762361152) == doctest::Approx(0.01).epsilon(1e-4));
  CHECK_THROWS_AS(kolmogorov_critical(0.0, 10), InvalidParameter);
}

TEST_CASE("two-sample ks: identical samples give zero, shifts register") {
  std::vector<double> a{1, 2, 3, 4, 5};
  std::vector<double> b{1, 2, 3, 4, 5};
  CHECK(ks_two_sample(a, b) == 0.0);
  std::vector<double> c{11, 12, 13, 14, 15};
  CHECK(ks_two_sample(a, c) == 1.0);
  std::vector<std::int64_t> ia{1, 1, 2, 3};
  std::vector<std::int64_t> ib{1, 2, 2, 3};
  CHECK(ks_two_sample_counts(ia, ib) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("two-sample critical value matches the scaled quantile") {
  const double crit = kolmogorov_two_sample_critical(1e-3, 5000, 5000);
  CHECK(crit == doctest::Approx(1.9494746035 * std::sqrt(2.0 / 5000.0))
                    .epsilon(1e-6));
}

TEST_CASE("normal cdf anchors") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-9));
  CHECK(normal_cdf(1.0, 1.0, 2.0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("chi-square gof: uniform null behaves, shifted alternative fails") {
  Rng rng(31, 0);
  std::vector<std::int64_t> counts(10, 0);
  for (int i = 0; i < 10000; ++i) {
    ++counts[static_cast<std::size_t>(rng.uniform_below(10))];
  }
  const std::vector<double> uniform(10, 0.1);
  const ChiSquare null_fit = chi_square_gof(counts, uniform);
  CHECK(null_fit.dof == 9);
  CHECK(null_fit.p_value > 1e-3);

  std::vector<double> skewed(10, 0.05);
  skewed[0] = 0.55;
  const ChiSquare bad_fit = chi_square_gof(counts, skewed);
  CHECK(bad_fit.p_value < 1e-6);
}

TEST_CASE("lln experiment: deterministic kernel leaves only discretization") {
  PmfTable t;
  t.buckets.push_back({0, {1.0}});
  const std::int64_t n = 128;
  const auto kernel =
      make_tabular_kernel(n, std::move(t), LimitSpec{{0.0}, {0.0}, 0.0});
  const McSummary s = run_lln_experiment(*kernel, 100, 7, 2);
  CHECK(s.mean_hit == 1.0);
  CHECK(s.var_hit == 0.0);
  CHECK(s.sup_dev_mean <= 1.0 / static_cast<double>(n) + 1e-9);
  CHECK(s.t_star == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(s.clt_samples.size() == 100);
}

TEST_CASE("lln experiment: er mean hitting fraction near log 2") {
  const auto kernel = make_er_kernel(1000, 1.0);
  const McSummary s = run_lln_experiment(*kernel, 300, 99, 2);
  CHECK(std::fabs(s.mean_hit - std::log(2.0)) < 0.01);
  CHECK(s.pass);  // mean sup deviation within the budget
  CHECK(s.sup_dev_mean > 0.0);
}

TEST_CASE("clt experiment: rejects degenerate predictions and tiny batches") {
  const auto kernel = make_er_kernel(100, 1.0);
  CHECK_THROWS_AS(
      run_clt_experiment(*kernel, 100, 1, CltPrediction{1.0, 0.0}),
      DegenerateNormalization);
  CHECK_THROWS_AS(
      run_clt_experiment(*kernel, 1, 1, CltPrediction{1.0, 0.1}),
      InsufficientSample);
  CHECK_THROWS_AS(run_lln_experiment(*kernel, 1, 1), InsufficientSample);
}

TEST_CASE("clt experiment: moderate-scale er batch is sane") {
  const std::int64_t n = 2000;
  const auto kernel = make_er_kernel(n, 1.0);
  const FluidSolution fluid = solve_fluid(*kernel, 1e-3, 4.0);
  const DiffusionSolution diff = solve_variance_ode(fluid, *kernel);
  const CltPrediction pred = clt_prediction(*kernel, fluid, diff);
  const McSummary s = run_clt_experiment(*kernel, 1000, 5150, pred, 2);
  CHECK(s.clt_samples.size() == 1000);
  CHECK(s.sigma_sq == doctest::Approx(0.125).epsilon(1e-8));
  CHECK(s.ks_stat < 0.1);
  double mean = 0.0;
  for (const double x : s.clt_samples) mean += x;
  mean /= 1000.0;
  CHECK(std::fabs(mean) < 0.08);
}

TEST_CASE("graph experiment summary") {
  const McSummary s = run_graph_experiment(200, 2.0, 200, 13, 2);
  CHECK(s.experiment == "graph");
  CHECK(s.mean_hit > 0.3);
  CHECK(s.mean_hit < 0.6);
  CHECK(s.runs == 200);
}
