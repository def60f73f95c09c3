#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jamsim/diffusion.hpp"
#include "jamsim/kernel.hpp"

namespace jamsim {

/// Aggregated Monte Carlo batch: hitting-fraction moments, centered/scaled
/// hitting-time samples, sup-path deviation from the stopped fluid limit,
/// and (for CLT batches) the Kolmogorov-Smirnov distance to the predicted
/// normal law.
struct McSummary {
  std::string experiment;
  std::string kernel_desc;
  std::int64_t runs = 0;
  std::int64_t items = 0;
  std::optional<double> mean_degree;
  std::uint64_t seed = 0;
  double mean_hit = 0.0;  // mean of T*_N / N
  double var_hit = 0.0;
  double sup_dev_mean = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> clt_samples;  // sqrt(N) (T*_N/N - T*)
  double t_star = std::numeric_limits<double>::quiet_NaN();
  double sigma_sq = std::numeric_limits<double>::quiet_NaN();
  double ks_stat = std::numeric_limits<double>::quiet_NaN();
  bool pass = false;
};

/// Law-of-large-numbers batch: per run, the sup deviation of the scaled path
/// from the stopped fluid solution is measured on a 1000-point grid over
/// [0, 1]; for N <= 1000 it is evaluated at every jump time instead, which
/// makes the sup exact. pass = (mean sup deviation <= omega(kernel, 1)).
McSummary run_lln_experiment(const Kernel& kernel, std::int64_t runs,
                             std::uint64_t seed, int threads = 1);

/// Central-limit batch: collects sqrt(N)(T*_N/N - T*), compares moments and
/// the empirical law against Normal(0, sigma_sq). pass requires
/// |mean| <= 3 sqrt(sigma_sq/runs), variance within +-15% of sigma_sq, and
/// KS below the asymptotic 1% critical value.
McSummary run_clt_experiment(const Kernel& kernel, std::int64_t runs,
                             std::uint64_t seed,
                             const CltPrediction& prediction,
                             int threads = 1);

/// Exploration batch through the explicit-graph oracle, same summary shape.
McSummary run_graph_experiment(std::int64_t items, double c,
                               std::int64_t runs, std::uint64_t seed,
                               int threads = 1);

/// Hitting steps of `runs` chain trajectories (parallel over runs).
std::vector<std::int64_t> chain_hitting_steps(const Kernel& kernel,
                                              std::int64_t runs,
                                              std::uint64_t seed,
                                              int threads = 1);

/// One-sample Kolmogorov-Smirnov statistic sup_x |F_emp(x) - cdf(x)|,
/// evaluated from both sides at every sample point.
double ks_statistic(std::span<const double> samples,
                    const std::function<double(double)>& cdf);

/// Two-sample KS statistic (tie-aware).
double ks_two_sample(std::span<const double> a, std::span<const double> b);
double ks_two_sample_counts(std::span<const std::int64_t> a,
                            std::span<const std::int64_t> b);

/// Asymptotic critical values: P(D_n > critical) = alpha under H0.
double kolmogorov_critical(double alpha, std::int64_t n);
double kolmogorov_two_sample_critical(double alpha, std::int64_t n,
                                      std::int64_t m);
/// Survival function of the Kolmogorov distribution.
double kolmogorov_sf(double k);

double normal_cdf(double x, double mean = 0.0, double sd = 1.0);

/// Chi-square goodness of fit with tail pooling to expected counts >= 5.
struct ChiSquare {
  double statistic = 0.0;
  std::int64_t dof = 0;
  double p_value = 0.0;
};
ChiSquare chi_square_gof(std::span<const std::int64_t> observed,
                         std::span<const double> probs);

}  // namespace jamsim
