#include "jamsim/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "jamsim/errors.hpp"

namespace jamsim {
namespace {

// Largest trial count / mean handled by CDF inversion. Above both thresholds
// the BTRS rejection sampler takes over (it needs a mean of ~10 to be valid).
constexpr std::int64_t kInversionMaxTrials = 30;
constexpr double kInversionMaxMean = 10.0;

std::int64_t binomial_inversion(std::int64_t n, double p, Rng& rng) {
  const double q = 1.0 - p;
  const double ratio = p / q;
  double f = std::exp(static_cast<double>(n) * std::log1p(-p));  // P(k = 0)
  double u = rng.uniform();
  std::int64_t k = 0;
  while (u > f && k < n) {
    u -= f;
    f *= ratio * static_cast<double>(n - k) / static_cast<double>(k + 1);
    ++k;
  }
  return k;
}

// Hormann's BTRS transformed-rejection sampler; requires p <= 0.5 and
// n*p >= 10. The final acceptance test uses the exact lgamma pmf ratio, so
// the tabulated constants only affect efficiency of the squeeze.
std::int64_t binomial_btrs(std::int64_t n, double p, Rng& rng) {
  const double q = 1.0 - p;
  const double np = static_cast<double>(n) * p;
  const double spq = std::sqrt(np * q);
  const double b = 1.15 + 2.53 * spq;
  const double a = -0.0873 + 0.0248 * b + 0.01 * p;
  const double c = np + 0.5;
  const double v_r = 0.92 - 4.2 / b;

  const double alpha = (2.83 + 5.1 / b) * spq;
  const double lpq = std::log(p / q);
  const std::int64_t m = static_cast<std::int64_t>(std::floor((n + 1) * p));
  const double h = std::lgamma(m + 1.0) + std::lgamma(n - m + 1.0);

  while (true) {
    const double u = rng.uniform() - 0.5;
    double v = rng.uniform();
    const double us = 0.5 - std::fabs(u);
    const auto k =
        static_cast<std::int64_t>(std::floor((2.0 * a / us + b) * u + c));
    if (us >= 0.07 && v <= v_r) return k;
    if (k < 0 || k > n) continue;
    v = std::log(v * alpha / (a / (us * us) + b));
    const double accept = h - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) +
                          static_cast<double>(k - m) * lpq;
    if (v <= accept) return k;
  }
}

double poly_eval(const std::vector<double>& coeffs, double z) {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    acc = acc * z + *it;
  }
  return acc;
}

std::vector<double> poly_derivative(const std::vector<double>& coeffs) {
  std::vector<double> d;
  for (std::size_t i = 1; i < coeffs.size(); ++i) {
    d.push_back(coeffs[i] * static_cast<double>(i));
  }
  return d;
}

}  // namespace

void Kernel::check_state(std::int64_t x) const {
  if (x < 0 || x >= items_) {
    throw std::domain_error("kernel state x=" + std::to_string(x) +
                            " outside [0, " + std::to_string(items_) + ")");
  }
}

std::vector<double> Kernel::pmf_row(std::int64_t x) const {
  check_state(x);
  std::vector<double> row(static_cast<std::size_t>(items_ - x), 0.0);
  for (std::int64_t k = 0; k < items_ - x; ++k) {
    row[static_cast<std::size_t>(k)] = pmf(k, x);
  }
  return row;
}

std::int64_t sample_binomial(std::int64_t trials, double p, Rng& rng) {
  if (trials < 0) throw InvalidParameter("binomial trials must be >= 0");
  if (p < 0.0 || p > 1.0) throw InvalidParameter("binomial p outside [0, 1]");
  if (trials == 0 || p == 0.0) return 0;
  if (p == 1.0) return trials;
  if (p > 0.5) return trials - sample_binomial(trials, 1.0 - p, rng);
  if (trials < kInversionMaxTrials ||
      static_cast<double>(trials) * p < kInversionMaxMean) {
    return binomial_inversion(trials, p, rng);
  }
  return binomial_btrs(trials, p, rng);
}

double binomial_pmf(std::int64_t k, std::int64_t trials, double p) {
  if (k < 0 || k > trials) return 0.0;
  if (p == 0.0) return k == 0 ? 1.0 : 0.0;
  if (p == 1.0) return k == trials ? 1.0 : 0.0;
  const double n = static_cast<double>(trials);
  const double kk = static_cast<double>(k);
  const double log_pmf = std::lgamma(n + 1.0) - std::lgamma(kk + 1.0) -
                         std::lgamma(n - kk + 1.0) + kk * std::log(p) +
                         (n - kk) * std::log1p(-p);
  return std::exp(log_pmf);
}

double poisson_limit_pmf(std::int64_t k, double x, double c) {
  if (k < 0) throw std::domain_error("poisson_limit_pmf: k must be >= 0");
  if (x < 0.0 || x > 1.0) {
    throw std::domain_error("poisson_limit_pmf: x must lie in [0, 1]");
  }
  if (c <= 0.0) throw std::domain_error("poisson_limit_pmf: c must be > 0");
  const double mean = c * (1.0 - x);
  if (mean == 0.0) return k == 0 ? 1.0 : 0.0;
  const double kk = static_cast<double>(k);
  return std::exp(kk * std::log(mean) - mean - std::lgamma(kk + 1.0));
}

ErdosRenyiKernel::ErdosRenyiKernel(std::int64_t items, double c)
    : Kernel(items), c_(c), edge_prob_(c / static_cast<double>(items)) {
  if (items < 1) throw InvalidParameter("er_kernel: N must be >= 1");
  if (c <= 0.0) throw InvalidParameter("er_kernel: c must be > 0");
  if (c >= static_cast<double>(items)) {
    throw InvalidParameter("er_kernel: need c < N so that c/N lies in (0, 1)");
  }
  lipschitz_ = c_;
  approx_error_ = c_ / static_cast<double>(items_);
  // sup_x of the exact moments is below c; the budget formulas use c itself.
  max_mean_ = c_;
  max_var_ = c_;
}

double ErdosRenyiKernel::pmf(std::int64_t k, std::int64_t x) const {
  check_state(x);
  return binomial_pmf(k, items_ - x - 1, edge_prob_);
}

std::vector<double> ErdosRenyiKernel::pmf_row(std::int64_t x) const {
  check_state(x);
  const std::int64_t n = items_ - x - 1;
  std::vector<double> row(static_cast<std::size_t>(n + 1), 0.0);
  // Stable forward recurrence from P(0) = (1-p)^n.
  double f = std::exp(static_cast<double>(n) * std::log1p(-edge_prob_));
  const double ratio = edge_prob_ / (1.0 - edge_prob_);
  for (std::int64_t k = 0; k <= n; ++k) {
    row[static_cast<std::size_t>(k)] = f;
    f *= ratio * static_cast<double>(n - k) / static_cast<double>(k + 1);
  }
  return row;
}

double ErdosRenyiKernel::neighbor_mean(std::int64_t x) const {
  check_state(x);
  return static_cast<double>(items_ - x - 1) * edge_prob_;
}

double ErdosRenyiKernel::neighbor_var(std::int64_t x) const {
  check_state(x);
  return static_cast<double>(items_ - x - 1) * edge_prob_ *
         (1.0 - edge_prob_);
}

std::int64_t ErdosRenyiKernel::sample(std::int64_t x, Rng& rng) const {
  check_state(x);
  return sample_binomial(items_ - x - 1, edge_prob_, rng);
}

std::string ErdosRenyiKernel::describe() const {
  std::ostringstream os;
  os << "er(N=" << items_ << ", c=" << c_ << ")";
  return os.str();
}

TabularKernel::TabularKernel(std::int64_t items, PmfTable table,
                             LimitSpec limits)
    : Kernel(items),
      drift_poly_(std::move(limits.drift_poly)),
      noise_poly_(std::move(limits.noise_poly)) {
  if (items < 1) throw InvalidParameter("tabular_kernel: N must be >= 1");
  if (table.buckets.empty()) {
    throw MalformedTable("tabular_kernel: table has no buckets");
  }
  if (table.buckets.front().first_x != 0) {
    throw MalformedTable("tabular_kernel: first bucket must start at x=0");
  }
  if (drift_poly_.empty()) drift_poly_ = {0.0};
  if (noise_poly_.empty()) noise_poly_ = {0.0};

  constexpr double kRowSumTol = 1e-9;
  for (std::size_t i = 0; i < table.buckets.size(); ++i) {
    auto& b = table.buckets[i];
    if (i > 0 && b.first_x <= table.buckets[i - 1].first_x) {
      throw MalformedTable("tabular_kernel: bucket starts must increase");
    }
    if (b.first_x >= items) {
      throw MalformedTable("tabular_kernel: bucket start beyond N-1");
    }
    const std::int64_t last_x = (i + 1 < table.buckets.size())
                                    ? table.buckets[i + 1].first_x - 1
                                    : items - 1;
    double sum = 0.0;
    double mean = 0.0;
    std::int64_t top = -1;
    for (std::size_t k = 0; k < b.probs.size(); ++k) {
      const double pk = b.probs[k];
      if (pk < 0.0) throw MalformedTable("tabular_kernel: negative mass");
      if (pk > 0.0) top = static_cast<std::int64_t>(k);
      sum += pk;
      mean += pk * static_cast<double>(k);
    }
    if (std::fabs(sum - 1.0) > kRowSumTol) {
      throw MalformedTable("tabular_kernel: bucket row sums to " +
                           std::to_string(sum) + ", expected 1");
    }
    // Support must fit the tightest state the bucket covers.
    if (top > items - last_x - 1) {
      throw MalformedTable(
          "tabular_kernel: bucket support exceeds N-x-1 for x=" +
          std::to_string(last_x));
    }
    double var = 0.0;
    std::vector<double> cdf(b.probs.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < b.probs.size(); ++k) {
      const double d = static_cast<double>(k) - mean;
      var += b.probs[k] * d * d;
      acc += b.probs[k];
      cdf[k] = acc;
    }
    if (!cdf.empty()) cdf.back() = 1.0;
    buckets_.push_back(BucketData{b.first_x, std::move(b.probs),
                                  std::move(cdf), mean, var});
  }

  if (limits.lipschitz) {
    lipschitz_ = *limits.lipschitz;
  } else {
    const auto deriv = poly_derivative(drift_poly_);
    double worst = 0.0;
    for (int i = 0; i <= 2000; ++i) {
      worst = std::max(worst, std::fabs(poly_eval(deriv, i * 1e-3)));
    }
    lipschitz_ = worst;
  }

  // approx_error is measured, not declared: exhaustive scan over x.
  double delta = 0.0;
  for (std::int64_t x = 0; x < items_; ++x) {
    const auto& b = bucket_for(x);
    delta = std::max(
        delta, std::fabs(b.mean - drift(static_cast<double>(x) /
                                        static_cast<double>(items_))));
    max_mean_ = std::max(max_mean_, b.mean);
    max_var_ = std::max(max_var_, b.var);
  }
  approx_error_ = delta;
}

const TabularKernel::BucketData& TabularKernel::bucket_for(
    std::int64_t x) const {
  check_state(x);
  auto it = std::upper_bound(
      buckets_.begin(), buckets_.end(), x,
      [](std::int64_t v, const BucketData& b) { return v < b.first_x; });
  return *std::prev(it);
}

double TabularKernel::pmf(std::int64_t k, std::int64_t x) const {
  const auto& b = bucket_for(x);
  if (k < 0 || k > items_ - x - 1 ||
      k >= static_cast<std::int64_t>(b.probs.size())) {
    return 0.0;
  }
  return b.probs[static_cast<std::size_t>(k)];
}

std::vector<double> TabularKernel::pmf_row(std::int64_t x) const {
  const auto& b = bucket_for(x);
  std::vector<double> row(static_cast<std::size_t>(items_ - x), 0.0);
  const std::size_t copy = std::min(row.size(), b.probs.size());
  std::copy_n(b.probs.begin(), copy, row.begin());
  return row;
}

double TabularKernel::neighbor_mean(std::int64_t x) const {
  return bucket_for(x).mean;
}

double TabularKernel::neighbor_var(std::int64_t x) const {
  return bucket_for(x).var;
}

double TabularKernel::drift(double z) const { return poly_eval(drift_poly_, z); }

double TabularKernel::drift_deriv(double z) const {
  return poly_eval(poly_derivative(drift_poly_), z);
}

double TabularKernel::drift_deriv2(double z) const {
  return poly_eval(poly_derivative(poly_derivative(drift_poly_)), z);
}

double TabularKernel::noise(double z) const { return poly_eval(noise_poly_, z); }

std::int64_t TabularKernel::sample(std::int64_t x, Rng& rng) const {
  const auto& b = bucket_for(x);
  const double u = rng.uniform();
  const auto it = std::upper_bound(b.cdf.begin(), b.cdf.end(), u);
  return static_cast<std::int64_t>(std::distance(b.cdf.begin(), it));
}

std::string TabularKernel::describe() const {
  std::ostringstream os;
  os << "table(N=" << items_ << ", buckets=" << buckets_.size() << ")";
  return os.str();
}

std::shared_ptr<const Kernel> make_er_kernel(std::int64_t items, double c) {
  return std::make_shared<ErdosRenyiKernel>(items, c);
}

std::shared_ptr<const Kernel> make_tabular_kernel(std::int64_t items,
                                                  PmfTable table,
                                                  LimitSpec limits) {
  return std::make_shared<TabularKernel>(items, std::move(table),
                                         std::move(limits));
}

PoissonGapReport poisson_gap_report(const ErdosRenyiKernel& kernel,
                                    std::int64_t k_max,
                                    const std::vector<std::int64_t>& states) {
  const double c = *kernel.mean_degree();
  const double scale = c / static_cast<double>(kernel.items());
  PoissonGapReport report;
  for (const std::int64_t x : states) {
    const double frac =
        static_cast<double>(x) / static_cast<double>(kernel.items());
    for (std::int64_t k = 0; k <= k_max; ++k) {
      const double limit = poisson_limit_pmf(k, frac, c);
      if (limit <= 0.0) continue;
      const double gap = std::fabs(kernel.pmf(k, x) - limit);
      const double ratio = gap / (scale * limit);
      if (ratio > report.max_ratio) {
        report.max_ratio = ratio;
        report.argmax_k = k;
        report.argmax_x = x;
      }
    }
  }
  report.unit_bound_holds = report.max_ratio <= 1.0;
  return report;
}

}  // namespace jamsim
