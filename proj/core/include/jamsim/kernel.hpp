#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "jamsim/rng.hpp"

namespace jamsim {

/// Neighbor-count law of the one-dimensional exploration chain: when x of the
/// N items are already explored, the next activated item blocks k unexplored
/// neighbors with probability pmf(k, x) (support 0 <= k <= N-x-1).
///
/// A kernel also carries the scaling-limit functions used by the fluid and
/// diffusion solvers: drift(z) approximates neighbor_mean(zN), noise(z)
/// approximates neighbor_var(zN), and the constants quantify how good those
/// approximations are uniformly in x.
///
/// Kernels are immutable after construction and safe to share across
/// concurrent trajectory workers; random state always lives in the caller.
class Kernel {
 public:
  virtual ~Kernel() = default;

  /// Initial number of items N.
  std::int64_t items() const { return items_; }

  /// P(k unexplored neighbors | x explored). Exactly 0 outside the support.
  /// Requires 0 <= x < items().
  virtual double pmf(std::int64_t k, std::int64_t x) const = 0;

  /// The whole row pmf(0..N-x-1, x). Overridden where a recurrence beats
  /// pointwise evaluation.
  virtual std::vector<double> pmf_row(std::int64_t x) const;

  /// Mean of pmf(., x).
  virtual double neighbor_mean(std::int64_t x) const = 0;
  /// Variance of pmf(., x).
  virtual double neighbor_var(std::int64_t x) const = 0;

  /// Limit drift and its first two derivatives, on z >= 0.
  virtual double drift(double z) const = 0;
  virtual double drift_deriv(double z) const = 0;
  virtual double drift_deriv2(double z) const = 0;
  /// Limit variance function, on z >= 0.
  virtual double noise(double z) const = 0;

  /// Lipschitz constant of drift().
  double lipschitz() const { return lipschitz_; }
  /// Uniform bound on |neighbor_mean(x) - drift(x/N)| over x.
  double approx_error() const { return approx_error_; }
  /// Upper bounds on neighbor_mean / neighbor_var over all x.
  double max_neighbor_mean() const { return max_mean_; }
  double max_neighbor_var() const { return max_var_; }

  /// Draw a neighbor count at state x. Deterministic given the rng state.
  /// Requires 0 <= x < items().
  virtual std::int64_t sample(std::int64_t x, Rng& rng) const = 0;

  /// Mean degree c for Erdos-Renyi kernels; empty otherwise.
  virtual std::optional<double> mean_degree() const { return std::nullopt; }

  virtual std::string describe() const = 0;

 protected:
  explicit Kernel(std::int64_t items) : items_(items) {}
  void check_state(std::int64_t x) const;

  std::int64_t items_;
  double lipschitz_ = 0.0;
  double approx_error_ = 0.0;
  double max_mean_ = 0.0;
  double max_var_ = 0.0;
};

/// G(N, c/N) kernel: pmf(., x) is Binomial(N-x-1, c/N), drift and noise are
/// both c(1-z), and the approximation constants are exact (approx_error = c/N,
/// lipschitz = c, sup bounds = c).
class ErdosRenyiKernel final : public Kernel {
 public:
  ErdosRenyiKernel(std::int64_t items, double c);

  double pmf(std::int64_t k, std::int64_t x) const override;
  std::vector<double> pmf_row(std::int64_t x) const override;
  double neighbor_mean(std::int64_t x) const override;
  double neighbor_var(std::int64_t x) const override;
  double drift(double z) const override { return c_ * (1.0 - z); }
  double drift_deriv(double) const override { return -c_; }
  double drift_deriv2(double) const override { return 0.0; }
  double noise(double z) const override { return c_ * (1.0 - z); }
  std::int64_t sample(std::int64_t x, Rng& rng) const override;
  std::optional<double> mean_degree() const override { return c_; }
  std::string describe() const override;

 private:
  double c_;
  double edge_prob_;
};

/// Descriptors for the limit functions of a user-supplied kernel. Drift and
/// noise are polynomials in z (coefficients in increasing-degree order); the
/// Lipschitz constant defaults to max |drift'| scanned over [0, 2].
struct LimitSpec {
  std::vector<double> drift_poly;
  std::vector<double> noise_poly;
  std::optional<double> lipschitz;
};

/// Row-bucketed pmf table. Bucket i applies to all x in
/// [first_x_i, first_x_{i+1}); the last bucket extends to N-1. Buckets must
/// start at 0, be strictly increasing, and every row must sum to 1 with
/// support no wider than the tightest state it covers allows.
struct PmfTable {
  struct Bucket {
    std::int64_t first_x = 0;
    std::vector<double> probs;
  };
  std::vector<Bucket> buckets;
};

/// Generic kernel read from a table; per-x moments come from the bucket rows
/// and approx_error is computed by exhaustive scan against the supplied drift.
class TabularKernel final : public Kernel {
 public:
  TabularKernel(std::int64_t items, PmfTable table, LimitSpec limits);

  double pmf(std::int64_t k, std::int64_t x) const override;
  std::vector<double> pmf_row(std::int64_t x) const override;
  double neighbor_mean(std::int64_t x) const override;
  double neighbor_var(std::int64_t x) const override;
  double drift(double z) const override;
  double drift_deriv(double z) const override;
  double drift_deriv2(double z) const override;
  double noise(double z) const override;
  std::int64_t sample(std::int64_t x, Rng& rng) const override;
  std::string describe() const override;

 private:
  struct BucketData {
    std::int64_t first_x;
    std::vector<double> probs;
    std::vector<double> cdf;
    double mean;
    double var;
  };
  const BucketData& bucket_for(std::int64_t x) const;

  std::vector<BucketData> buckets_;
  std::vector<double> drift_poly_;
  std::vector<double> noise_poly_;
};

std::shared_ptr<const Kernel> make_er_kernel(std::int64_t items, double c);
std::shared_ptr<const Kernel> make_tabular_kernel(std::int64_t items,
                                                  PmfTable table,
                                                  LimitSpec limits);

/// Poisson(c(1-x)) mass at k: the N->infinity limit of the Erdos-Renyi
/// neighbor-count law at explored fraction x in [0, 1].
double poisson_limit_pmf(std::int64_t k, double x, double c);

/// Exact Binomial(trials, p) sampler: CDF inversion when the mean is small,
/// transformed rejection (BTRS) otherwise.
std::int64_t sample_binomial(std::int64_t trials, double p, Rng& rng);

/// Binomial(trials, p) mass at k, evaluated in log space.
double binomial_pmf(std::int64_t k, std::int64_t trials, double p);

/// Worst observed ratio |pmf_N - poisson_limit| / ((c/N) * poisson_limit)
/// over the probed (k, x) pairs, with its argmax. Probes the printed
/// binomial-vs-Poisson inequality; ratios above 1 mean the plain inequality
/// fails there.
struct PoissonGapReport {
  double max_ratio = 0.0;
  std::int64_t argmax_k = 0;
  std::int64_t argmax_x = 0;
  bool unit_bound_holds = false;
};
PoissonGapReport poisson_gap_report(const ErdosRenyiKernel& kernel,
                                    std::int64_t k_max,
                                    const std::vector<std::int64_t>& states);

}  // namespace jamsim
