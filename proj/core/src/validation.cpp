#include "jamsim/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "jamsim/bounds.hpp"
#include "jamsim/chain.hpp"
#include "jamsim/ctime.hpp"
#include "jamsim/diffusion.hpp"
#include "jamsim/errors.hpp"
#include "jamsim/fluid.hpp"
#include "jamsim/graph_explore.hpp"
#include "jamsim/kernel.hpp"
#include "jamsim/parallel.hpp"
#include "jamsim/stats.hpp"

namespace jamsim {
namespace {

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

double er_fluid_value(double c, double t) {
  return (1.0 + c) / c * (1.0 - std::exp(-c * t));
}

// Printed closed form for the second moment of the ER fluctuation SDE.
double er_var_value(double c, double t) {
  const double e = std::exp(c * t);
  return std::exp(-2.0 * c * t) * (1.0 - e) * (e - 2.0 * c - 1.0) / (2.0 * c);
}

// Two-sided z-quantile for the Bonferroni-corrected level 1e-3 / points.
double z_critical(int points) {
  const double alpha = 1e-3 / points / 2.0;
  double lo = 0.0, hi = 10.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (1.0 - normal_cdf(mid) > alpha ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

CriterionResult check_fluid_oracle(const std::vector<double>& cs) {
  Stopwatch timer;
  CriterionResult r;
  r.id = "fluid-oracle";
  r.pass = true;
  std::ostringstream detail;
  for (const double c : cs) {
    const FluidSolution sol =
        solve_fluid([c](double z) { return c * (1.0 - z); }, 1e-3, 4.0);
    double sup = 0.0;
    for (std::size_t i = 0; i < sol.times().size(); ++i) {
      sup = std::max(sup, std::fabs(sol.values()[i] -
                                    er_fluid_value(c, sol.times()[i])));
    }
    const double t_err =
        std::fabs(sol.hitting_time() - std::log1p(c) / c);
    const bool ok = sup < 1e-8 && t_err < 1e-8;
    r.pass = r.pass && ok;
    detail << "c=" << c << ": sup_err=" << fmt(sup)
           << " T_err=" << fmt(t_err) << (ok ? "" : " FAIL") << "; ";
  }
  r.detail = detail.str();
  r.seconds = timer.seconds();
  return r;
}

CriterionResult check_variance_oracle(const std::vector<double>& cs) {
  Stopwatch timer;
  CriterionResult r;
  r.id = "variance-oracle";
  r.pass = true;
  std::ostringstream detail;
  for (const double c : cs) {
    const auto kernel = make_er_kernel(1000, c);
    const FluidSolution fluid = solve_fluid(*kernel, 1e-3, 4.0);
    const DiffusionSolution diff = solve_variance_ode(fluid, *kernel);
    double sup = 0.0;
    for (std::size_t i = 0; i < diff.times.size(); ++i) {
      sup = std::max(sup,
                     std::fabs(diff.var[i] - er_var_value(c, diff.times[i])));
    }
    const double sigma_err =
        std::fabs(diff.sigma_sq - c / (2.0 * (c + 1.0) * (c + 1.0)));
    const bool ok = sup < 1e-6 && sigma_err < 1e-8;
    r.pass = r.pass && ok;
    detail << "c=" << c << ": sup_err=" << fmt(sup)
           << " sigma_sq_err=" << fmt(sigma_err) << (ok ? "" : " FAIL")
           << "; ";
  }
  r.detail = detail.str();
  r.seconds = timer.seconds();
  return r;
}

CriterionResult check_lln_paths(std::uint64_t seed, int threads) {
  Stopwatch timer;
  CriterionResult r;
  r.id = "lln-paths";
  const double c = 1.0;
  const std::int64_t runs = 500;
  const std::vector<std::int64_t> sizes{100, 1000, 10000};

  std::vector<double> means;
  std::vector<double> budgets;
  bool bounded = true;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const auto kernel = make_er_kernel(sizes[i], c);
    const McSummary s =
        run_lln_experiment(*kernel, runs, seed + i + 1, threads);
    means.push_back(s.sup_dev_mean);
    budgets.push_back(omega(*kernel, 1.0));
    bounded = bounded && s.sup_dev_mean <= budgets.back();
  }
  const double shrink1 = means[0] / means[1];
  const double shrink2 = means[1] / means[2];
  const bool decreasing = means[0] > means[1] && means[1] > means[2];
  const bool rate_ok = shrink1 >= 2.5 && shrink1 <= 4.5 && shrink2 >= 2.5 &&
                       shrink2 <= 4.5;
  const bool final_ok = means[2] < 0.02;
  r.pass = decreasing && rate_ok && final_ok && bounded;
  std::ostringstream detail;
  detail << "mean_sup_dev=[" << fmt(means[0]) << ", " << fmt(means[1]) << ", "
         << fmt(means[2]) << "] shrink=[" << fmt(shrink1) << ", "
         << fmt(shrink2) << "] budgets=[" << fmt(budgets[0]) << ", "
         << fmt(budgets[1]) << ", " << fmt(budgets[2]) << "]"
         << (bounded ? "" : " BUDGET-EXCEEDED");
  r.detail = detail.str();
  r.seconds = timer.seconds();
  return r;
}

CriterionResult check_hitting_lln(std::uint64_t seed, int threads,
                                  std::int64_t runs, std::int64_t items,
                                  double tolerance) {
  Stopwatch timer;
  CriterionResult r;
  r.id = "hitting-lln";
  const auto kernel = make_er_kernel(items, 1.0);
  const auto steps = chain_hitting_steps(*kernel, runs, seed + 40, threads);
  double mean = 0.0;
  for (const auto s : steps) mean += static_cast<double>(s);
  mean /= static_cast<double>(runs) * static_cast<double>(items);
  const double err = std::fabs(mean - std::log(2.0));
  r.pass = err <= tolerance;
  r.detail = "mean_hit=" + fmt(mean) + " |err|=" + fmt(err) +
             " tol=" + fmt(tolerance);
  r.seconds = timer.seconds();
  return r;
}

CriterionResult check_clt(const std::vector<double>& cs, std::uint64_t seed,
                          int threads) {
  Stopwatch timer;
  CriterionResult r;
  r.id = "clt";
  r.pass = true;
  const std::int64_t items = 10000;
  const std::int64_t runs = 2000;
  std::ostringstream detail;
  std::uint64_t salt = 50;
  for (const double c : cs) {
    const auto kernel = make_er_kernel(items, c);
    const FluidSolution fluid = solve_fluid(*kernel, 1e-3, 4.0);
    const DiffusionSolution diff = solve_variance_ode(fluid, *kernel);
    const CltPrediction pred = clt_prediction(*kernel, fluid, diff);
    const McSummary s =
        run_clt_experiment(*kernel, runs, seed + salt, pred, threads);
    salt += 10;
    double mean = 0.0;
    for (const double x : s.clt_samples) mean += x;
    mean /= static_cast<double>(runs);
    double var = 0.0;
    for (const double x : s.clt_samples) var += (x - mean) * (x - mean);
    var /= static_cast<double>(runs - 1);
    r.pass = r.pass && s.pass;
    detail << "c=" << c << ": sigma_sq=" << fmt(pred.sigma_sq)
           << " sample_var=" << fmt(var) << " sample_mean=" << fmt(mean)
           << " ks=" << fmt(s.ks_stat)
           << " ks_crit=" << fmt(kolmogorov_critical(0.01, runs))
           << (s.pass ? "" : " FAIL") << "; ";
  }
  r.detail = detail.str();
  r.seconds = timer.seconds();
  return r;
}

CriterionResult check_chain_graph_equivalence(std::uint64_t seed, int threads,
                                              std::int64_t runs) {
  Stopwatch timer;
  CriterionResult r;
  r.id = "chain-graph-equivalence";
  const std::int64_t items = 200;
  const double c = 2.0;
  const auto kernel = make_er_kernel(items, c);
  const auto chain_steps =
      chain_hitting_steps(*kernel, runs, seed + 70, threads);
  const auto graph_counts =
      graph_active_counts(items, c, runs, seed + 71, threads);
  const double d = ks_two_sample_counts(chain_steps, graph_counts);
  const double crit = kolmogorov_two_sample_critical(1e-3, runs, runs);
  r.pass = d < crit;
  r.detail = "ks_two_sample=" + fmt(d) + " crit(1e-3)=" + fmt(crit);
  r.seconds = timer.seconds();
  return r;
}

CriterionResult check_martingale_identity(std::uint64_t seed, int threads) {
  Stopwatch timer;
  CriterionResult r;
  r.id = "martingale-identity";
  const std::int64_t items = 1000;
  const std::int64_t runs = 10000;
  const auto kernel = make_er_kernel(items, 1.0);
  const std::vector<std::int64_t> steps{items / 4, items / 2, 3 * items / 4};
  const MartingaleDiagnostics diag =
      run_martingale_experiment(*kernel, runs, seed + 90, steps, threads);
  const double z_crit = z_critical(static_cast<int>(steps.size()));
  r.pass = true;
  std::ostringstream detail;
  for (std::size_t j = 0; j < steps.size(); ++j) {
    const double se = diag.sd_m[j] / std::sqrt(static_cast<double>(runs));
    const double z = se > 0.0 ? std::fabs(diag.mean_m[j]) / se : 0.0;
    const bool mean_ok = z <= z_crit;
    const bool ratio_ok = diag.ratio[j] >= 0.95 && diag.ratio[j] <= 1.05;
    r.pass = r.pass && mean_ok && ratio_ok;
    detail << "l=" << steps[j] << ": z=" << fmt(z) << " ratio="
           << fmt(diag.ratio[j])
           << ((mean_ok && ratio_ok) ? "" : " FAIL") << "; ";
  }
  detail << "z_crit=" << fmt(z_crit);
  r.detail = detail.str();
  r.seconds = timer.seconds();
  return r;
}

CriterionResult check_ctime(std::uint64_t seed, int threads) {
  Stopwatch timer;
  CriterionResult r;
  r.id = "ctime";
  const std::int64_t items = 10000;
  const double horizon = 3.0;
  const CtimeModel model{make_er_kernel(items, 1.0), 1.0};
  const FluidSolution fluid = solve_ctime_fluid(model, 1e-3, horizon + 0.1);

  const std::int64_t runs = 100;
  std::vector<double> sups(static_cast<std::size_t>(runs), 0.0);
  parallel_for(runs, threads, [&](std::int64_t i) {
    const CtimeTrajectory traj =
        simulate_ctime(model, seed + 110, static_cast<std::uint64_t>(i));
    sups[static_cast<std::size_t>(i)] =
        ctime_sup_deviation(traj, fluid, horizon);
  });
  std::int64_t good = 0;
  double worst = 0.0;
  for (const double s : sups) {
    if (s < 0.05) ++good;
    worst = std::max(worst, s);
  }
  const bool path_ok = good >= 99;

  // Analytic cross-check: zero-drift kernel, unit rate, m = e^-t - e^-2t.
  PmfTable table;
  table.buckets.push_back(PmfTable::Bucket{0, {1.0}});
  const CtimeModel plain{
      make_tabular_kernel(100, std::move(table), LimitSpec{{0.0}, {0.0}, 0.0}),
      1.0};
  const FluidSolution plain_fluid = solve_ctime_fluid(plain, 1e-3, horizon);
  const DiffusionSolution plain_var = solve_ctime_variance(plain, plain_fluid);
  double var_err = 0.0;
  for (std::size_t i = 0; i < plain_var.times.size(); ++i) {
    const double t = plain_var.times[i];
    const double expected = std::exp(-t) - std::exp(-2.0 * t);
    var_err = std::max(var_err, std::fabs(plain_var.var[i] - expected));
  }
  const bool var_ok = var_err < 1e-6;

  r.pass = path_ok && var_ok;
  r.detail = "paths_within_0.05=" + std::to_string(good) + "/100 worst=" +
             fmt(worst) + " analytic_var_err=" + fmt(var_err);
  r.seconds = timer.seconds();
  return r;
}

CriterionResult check_binomial_poisson_gap() {
  Stopwatch timer;
  CriterionResult r;
  r.id = "binomial-poisson-gap";
  const std::int64_t items = 1000;
  const double c = 1.0;
  const ErdosRenyiKernel kernel(items, c);
  const std::vector<std::int64_t> states{0, items / 4, items / 2,
                                         3 * items / 4};
  const PoissonGapReport report = poisson_gap_report(kernel, 30, states);
  r.pass = std::isfinite(report.max_ratio) && report.max_ratio > 0.0;
  std::ostringstream detail;
  detail << "max|p_N-p|*N/(c*p)=" << fmt(report.max_ratio) << " at k="
         << report.argmax_k << " x=" << report.argmax_x
         << "; unit-constant inequality "
         << (report.unit_bound_holds ? "HOLDS" : "VIOLATED in the tail");
  r.detail = detail.str();
  r.seconds = timer.seconds();
  return r;
}

std::vector<CriterionResult> run_acceptance(const std::string& preset,
                                            std::uint64_t seed, int threads) {
  std::vector<CriterionResult> results;
  if (preset == "full") {
    results.push_back(check_fluid_oracle({0.5, 1.0, 2.0}));
    results.push_back(check_variance_oracle({0.5, 1.0, 2.0}));
    results.push_back(check_lln_paths(seed, threads));
    results.push_back(check_hitting_lln(seed, threads));
    results.push_back(check_clt({1.0, 2.0}, seed, threads));
    results.push_back(check_chain_graph_equivalence(seed, threads));
    results.push_back(check_martingale_identity(seed, threads));
    results.push_back(check_ctime(seed, threads));
    results.push_back(check_binomial_poisson_gap());
  } else if (preset == "er-c1") {
    results.push_back(check_fluid_oracle({1.0}));
    results.push_back(check_variance_oracle({1.0}));
    results.push_back(check_lln_paths(seed, threads));
    results.push_back(check_hitting_lln(seed, threads));
    results.push_back(check_clt({1.0}, seed, threads));
    results.push_back(check_martingale_identity(seed, threads));
    results.push_back(check_ctime(seed, threads));
    results.push_back(check_binomial_poisson_gap());
  } else if (preset == "er-c2") {
    results.push_back(check_fluid_oracle({2.0}));
    results.push_back(check_variance_oracle({2.0}));
    results.push_back(check_clt({2.0}, seed, threads));
    results.push_back(check_chain_graph_equivalence(seed, threads));
  } else if (preset == "smoke") {
    results.push_back(check_fluid_oracle({1.0}));
    results.push_back(check_variance_oracle({1.0}));
    results.push_back(check_hitting_lln(seed, threads, 200, 1000, 0.02));
    results.push_back(check_chain_graph_equivalence(seed, threads, 500));
    results.push_back(check_binomial_poisson_gap());
  } else {
    throw InvalidParameter("unknown validation preset: " + preset);
  }
  return results;
}

}  // namespace jamsim
