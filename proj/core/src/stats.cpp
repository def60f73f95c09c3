#include "jamsim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>

#include "jamsim/bounds.hpp"
#include "jamsim/chain.hpp"
#include "jamsim/errors.hpp"
#include "jamsim/graph_explore.hpp"
#include "jamsim/parallel.hpp"

namespace jamsim {
namespace {

constexpr std::int64_t kSupGridPoints = 1000;
constexpr std::int64_t kExactSupLimit = 1000;

struct RunRecord {
  double hit_frac = 0.0;
  double sup_dev = 0.0;
};

// Sup deviation of the (absorbed) scaled path from the stopped fluid path.
double sup_deviation(const Trajectory& traj, const FluidSolution& fluid) {
  const std::int64_t n = traj.items;
  double sup = 0.0;
  if (n <= kExactSupLimit) {
    // The path is constant on [l/N, (l+1)/N) and the fluid is monotone, so
    // the sup over [0, 1] is attained at interval endpoints.
    for (std::int64_t l = 0; l < n; ++l) {
      const double v =
          static_cast<double>(traj.explored_at(l)) / static_cast<double>(n);
      const double t0 = static_cast<double>(l) / static_cast<double>(n);
      const double t1 = static_cast<double>(l + 1) / static_cast<double>(n);
      sup = std::max(sup, std::fabs(v - fluid.stopped_value(t0)));
      sup = std::max(sup, std::fabs(v - fluid.stopped_value(t1)));
    }
    sup = std::max(sup, std::fabs(1.0 - fluid.stopped_value(1.0)));
    return sup;
  }
  const ScaledPath path(traj);
  for (std::int64_t j = 0; j <= kSupGridPoints; ++j) {
    const double t =
        static_cast<double>(j) / static_cast<double>(kSupGridPoints);
    sup = std::max(sup, std::fabs(path.value(t) - fluid.stopped_value(t)));
  }
  return sup;
}

double sample_mean(std::span<const double> xs) {
  double s = 0.0;
  for (const double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs, double mean) {
  double s = 0.0;
  for (const double x : xs) s += (x - mean) * (x - mean);
  return s / static_cast<double>(xs.size() - 1);
}

}  // namespace

McSummary run_lln_experiment(const Kernel& kernel, std::int64_t runs,
                             std::uint64_t seed, int threads) {
  if (runs < 2) throw InsufficientSample("lln experiment: need >= 2 runs");
  const FluidSolution fluid = solve_fluid(kernel, 1e-3, 4.0);
  const double t_star = fluid.hitting_time();

  std::vector<RunRecord> records(static_cast<std::size_t>(runs));
  parallel_for(runs, threads, [&](std::int64_t i) {
    thread_local Trajectory scratch;
    simulate_into(kernel, seed, static_cast<std::uint64_t>(i), scratch);
    auto& rec = records[static_cast<std::size_t>(i)];
    rec.hit_frac = static_cast<double>(scratch.hitting_step) /
                   static_cast<double>(scratch.items);
    rec.sup_dev = sup_deviation(scratch, fluid);
  });

  McSummary s;
  s.experiment = "lln";
  s.kernel_desc = kernel.describe();
  s.runs = runs;
  s.items = kernel.items();
  s.mean_degree = kernel.mean_degree();
  s.seed = seed;
  s.t_star = t_star;
  std::vector<double> hits(records.size());
  double dev_sum = 0.0;
  const double root_n = std::sqrt(static_cast<double>(kernel.items()));
  s.clt_samples.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    hits[i] = records[i].hit_frac;
    dev_sum += records[i].sup_dev;
    s.clt_samples.push_back(root_n * (records[i].hit_frac - t_star));
  }
  s.mean_hit = sample_mean(hits);
  s.var_hit = sample_variance(hits, s.mean_hit);
  s.sup_dev_mean = dev_sum / static_cast<double>(runs);
  s.pass = s.sup_dev_mean <= omega(kernel, 1.0);
  return s;
}

McSummary run_clt_experiment(const Kernel& kernel, std::int64_t runs,
                             std::uint64_t seed,
                             const CltPrediction& prediction, int threads) {
  if (runs < 2) throw InsufficientSample("clt experiment: need >= 2 runs");
  if (prediction.sigma_sq <= 0.0) {
    throw DegenerateNormalization(
        "clt experiment: predicted variance is zero (deterministic kernel)");
  }
  const auto steps = chain_hitting_steps(kernel, runs, seed, threads);

  McSummary s;
  s.experiment = "clt";
  s.kernel_desc = kernel.describe();
  s.runs = runs;
  s.items = kernel.items();
  s.mean_degree = kernel.mean_degree();
  s.seed = seed;
  s.t_star = prediction.t_star;
  s.sigma_sq = prediction.sigma_sq;

  const double n_items = static_cast<double>(kernel.items());
  const double root_n = std::sqrt(n_items);
  std::vector<double> hits(steps.size());
  s.clt_samples.resize(steps.size());
  for (std::size_t i = 0; i < steps.size(); ++i) {
    hits[i] = static_cast<double>(steps[i]) / n_items;
    s.clt_samples[i] = root_n * (hits[i] - prediction.t_star);
  }
  s.mean_hit = sample_mean(hits);
  s.var_hit = sample_variance(hits, s.mean_hit);

  const double sd = std::sqrt(prediction.sigma_sq);
  s.ks_stat = ks_statistic(s.clt_samples, [sd](double x) {
    return normal_cdf(x, 0.0, sd);
  });

  const double clt_mean = sample_mean(s.clt_samples);
  const double clt_var = sample_variance(s.clt_samples, clt_mean);
  const double mean_tol =
      3.0 * std::sqrt(prediction.sigma_sq / static_cast<double>(runs));
  const bool mean_ok = std::fabs(clt_mean) <= mean_tol;
  const bool var_ok = clt_var >= 0.85 * prediction.sigma_sq &&
                      clt_var <= 1.15 * prediction.sigma_sq;
  const bool ks_ok = s.ks_stat < kolmogorov_critical(0.01, runs);
  s.pass = mean_ok && var_ok && ks_ok;
  return s;
}

McSummary run_graph_experiment(std::int64_t items, double c,
                               std::int64_t runs, std::uint64_t seed,
                               int threads) {
  if (runs < 2) throw InsufficientSample("graph experiment: need >= 2 runs");
  const auto counts = graph_active_counts(items, c, runs, seed, threads);
  McSummary s;
  s.experiment = "graph";
  {
    std::ostringstream desc;
    desc << "graph(N=" << items << ", c=" << c << ")";
    s.kernel_desc = desc.str();
  }
  s.runs = runs;
  s.items = items;
  s.mean_degree = c;
  s.seed = seed;
  std::vector<double> hits(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    hits[i] = static_cast<double>(counts[i]) / static_cast<double>(items);
  }
  s.mean_hit = sample_mean(hits);
  s.var_hit = sample_variance(hits, s.mean_hit);
  s.pass = true;
  return s;
}

std::vector<std::int64_t> chain_hitting_steps(const Kernel& kernel,
                                              std::int64_t runs,
                                              std::uint64_t seed,
                                              int threads) {
  std::vector<std::int64_t> steps(static_cast<std::size_t>(runs), 0);
  parallel_for(runs, threads, [&](std::int64_t i) {
    thread_local Trajectory scratch;
    simulate_into(kernel, seed, static_cast<std::uint64_t>(i), scratch);
    steps[static_cast<std::size_t>(i)] = scratch.hitting_step;
  });
  return steps;
}

double ks_statistic(std::span<const double> samples,
                    const std::function<double(double)>& cdf) {
  if (samples.empty()) throw InsufficientSample("ks_statistic: empty sample");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max(d, f - static_cast<double>(i) / n);
    d = std::max(d, static_cast<double>(i + 1) / n - f);
  }
  return d;
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) {
    throw InsufficientSample("ks_two_sample: empty sample");
  }
  std::vector<double> xs(a.begin(), a.end());
  std::vector<double> ys(b.begin(), b.end());
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  const double na = static_cast<double>(xs.size());
  const double nb = static_cast<double>(ys.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < xs.size() && j < ys.size()) {
    const double v = std::min(xs[i], ys[j]);
    while (i < xs.size() && xs[i] == v) ++i;
    while (j < ys.size() && ys[j] == v) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na -
                              static_cast<double>(j) / nb));
  }
  return d;
}

double ks_two_sample_counts(std::span<const std::int64_t> a,
                            std::span<const std::int64_t> b) {
  std::vector<double> xs(a.begin(), a.end());
  std::vector<double> ys(b.begin(), b.end());
  return ks_two_sample(xs, ys);
}

double kolmogorov_sf(double k) {
  if (k <= 0.0) return 1.0;
  double sum = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * k * k);
    sum += (j % 2 == 1 ? term : -term);
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

namespace {

double kolmogorov_quantile(double alpha) {
  double lo = 0.05, hi = 4.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (kolmogorov_sf(mid) > alpha ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double kolmogorov_critical(double alpha, std::int64_t n) {
  if (alpha <= 0.0 || alpha >= 1.0 || n < 1) {
    throw InvalidParameter("kolmogorov_critical: need 0 < alpha < 1, n >= 1");
  }
  return kolmogorov_quantile(alpha) / std::sqrt(static_cast<double>(n));
}

double kolmogorov_two_sample_critical(double alpha, std::int64_t n,
                                      std::int64_t m) {
  if (alpha <= 0.0 || alpha >= 1.0 || n < 1 || m < 1) {
    throw InvalidParameter("kolmogorov_two_sample_critical: bad arguments");
  }
  const double en = static_cast<double>(n) * static_cast<double>(m) /
                    static_cast<double>(n + m);
  return kolmogorov_quantile(alpha) / std::sqrt(en);
}

double normal_cdf(double x, double mean, double sd) {
  return 0.5 * std::erfc(-(x - mean) / (sd * std::sqrt(2.0)));
}

ChiSquare chi_square_gof(std::span<const std::int64_t> observed,
                         std::span<const double> probs) {
  if (observed.size() != probs.size() || observed.empty()) {
    throw InvalidParameter("chi_square_gof: size mismatch or empty input");
  }
  std::int64_t total = 0;
  for (const std::int64_t o : observed) total += o;
  const double n = static_cast<double>(total);

  // Pool consecutive cells until each pooled expectation reaches 5.
  constexpr double kMinExpected = 5.0;
  std::vector<double> exp_pooled;
  std::vector<double> obs_pooled;
  double e_acc = 0.0, o_acc = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    e_acc += probs[i] * n;
    o_acc += static_cast<double>(observed[i]);
    if (e_acc >= kMinExpected) {
      exp_pooled.push_back(e_acc);
      obs_pooled.push_back(o_acc);
      e_acc = o_acc = 0.0;
    }
  }
  if (e_acc > 0.0 || o_acc > 0.0) {
    if (!exp_pooled.empty()) {
      exp_pooled.back() += e_acc;
      obs_pooled.back() += o_acc;
    } else {
      exp_pooled.push_back(e_acc);
      obs_pooled.push_back(o_acc);
    }
  }
  ChiSquare result;
  result.dof = static_cast<std::int64_t>(exp_pooled.size()) - 1;
  if (result.dof < 1) {
    result.p_value = 1.0;
    return result;
  }
  for (std::size_t i = 0; i < exp_pooled.size(); ++i) {
    const double diff = obs_pooled[i] - exp_pooled[i];
    result.statistic += diff * diff / exp_pooled[i];
  }
  result.p_value = boost::math::gamma_q(static_cast<double>(result.dof) / 2.0,
                                        result.statistic / 2.0);
  return result;
}

}  // namespace jamsim
