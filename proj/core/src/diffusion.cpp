#include "jamsim/diffusion.hpp"

#include <algorithm>
#include <cmath>

#include "jamsim/errors.hpp"
#include "jamsim/parallel.hpp"
#include "jamsim/rng.hpp"

namespace jamsim {
namespace {

constexpr double kRateClamp = 1e-9;

double interp_linear(const std::vector<double>& times,
                     const std::vector<double>& values, double dt, double t) {
  if (t <= times.front()) return values.front();
  if (t >= times.back()) return values.back();
  const auto i = std::min(static_cast<std::size_t>(std::ceil(t / dt)),
                          values.size() - 1);
  if (i == 0) return values.front();
  const double s = (t - times[i - 1]) / (times[i] - times[i - 1]);
  return (1.0 - s) * values[i - 1] + s * values[i];
}

}  // namespace

double DiffusionSolution::beta_at(double t) const {
  return interp_linear(times, beta, times.size() > 1 ? times[1] - times[0] : 1,
                       t);
}

double DiffusionSolution::var_at(double t) const {
  // Cubic Hermite: var_rate is known exactly at the nodes.
  if (t <= times.front()) return var.front();
  if (t >= times.back()) return var.back();
  const double dt = times[1] - times[0];
  const auto i =
      std::min(static_cast<std::size_t>(std::ceil(t / dt)), var.size() - 1);
  if (i == 0) return var.front();
  const double h = times[i] - times[i - 1];
  const double s = (t - times[i - 1]) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * var[i - 1] +
         (s3 - 2 * s2 + s) * h * var_rate[i - 1] +
         (-2 * s3 + 3 * s2) * var[i] + (s3 - s2) * h * var_rate[i];
}

DiffusionSolution solve_moment_ode(const SdeCoefficients& sde, double t_end,
                                   double dt) {
  if (dt <= 0.0) throw InvalidParameter("moment ode: dt must be > 0");
  if (t_end <= 0.0) throw InvalidParameter("moment ode: t_end must be > 0");

  DiffusionSolution sol;
  const auto steps = static_cast<std::int64_t>(std::ceil(t_end / dt - 1e-12));
  auto rhs = [&sde](double t, double m) {
    return 2.0 * sde.drift_coef(t) * m + sde.beta_rate(t);
  };

  double m = 0.0;
  double beta = 0.0;
  sol.times.push_back(0.0);
  sol.var.push_back(0.0);
  sol.beta.push_back(0.0);
  sol.beta_rate.push_back(sde.beta_rate(0.0));
  sol.var_rate.push_back(rhs(0.0, 0.0));
  for (std::int64_t i = 0; i < steps; ++i) {
    const double t0 = static_cast<double>(i) * dt;
    const double h = std::min(dt, t_end - t0);
    const double t1 = t0 + h;
    {
      const double k1 = rhs(t0, m);
      const double k2 = rhs(t0 + 0.5 * h, m + 0.5 * h * k1);
      const double k3 = rhs(t0 + 0.5 * h, m + 0.5 * h * k2);
      const double k4 = rhs(t1, m + h * k3);
      m += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    // beta has no feedback; Simpson on the same stencil.
    beta += h / 6.0 *
            (sde.beta_rate(t0) + 4.0 * sde.beta_rate(t0 + 0.5 * h) +
             sde.beta_rate(t1));
    sol.times.push_back(t1);
    sol.var.push_back(m);
    sol.beta.push_back(beta);
    sol.beta_rate.push_back(sde.beta_rate(t1));
    sol.var_rate.push_back(rhs(t1, m));
  }
  return sol;
}

DiffusionSolution solve_variance_ode(const FluidSolution& fluid,
                                     const Kernel& kernel) {
  const double t_star = fluid.hitting_time();
  const double denom = 1.0 - kernel.drift(1.0);
  if (std::fabs(denom) < 1e-9) {
    throw DegenerateNormalization(
        "hitting-time CLT undefined: drift(1) is numerically 1");
  }
  SdeCoefficients sde{
      [&fluid, &kernel](double t) {
        return kernel.drift_deriv(fluid.value(t));
      },
      [&fluid, &kernel](double t) { return kernel.noise(fluid.value(t)); }};
  DiffusionSolution sol = solve_moment_ode(sde, t_star, fluid.dt());
  sol.t_star = t_star;
  sol.sigma_sq = sol.var_at(t_star) / (denom * denom);
  return sol;
}

PathMoments simulate_sde_paths(const SdeCoefficients& sde, double t_end,
                               double dt, std::int64_t n_paths,
                               std::uint64_t seed, int threads) {
  if (dt <= 0.0) throw InvalidParameter("sde paths: dt must be > 0");
  if (n_paths < 1) throw InvalidParameter("sde paths: need >= 1 path");

  // Precompute the grid and per-step diffusion scales once.
  std::vector<double> times{0.0};
  while (times.back() < t_end - 1e-12) {
    times.push_back(std::min(times.back() + dt, t_end));
  }
  const std::size_t nodes = times.size();
  std::vector<double> drift_c(nodes), noise_sd(nodes);
  for (std::size_t i = 0; i + 1 < nodes; ++i) {
    const double h = times[i + 1] - times[i];
    drift_c[i] = sde.drift_coef(times[i]) * h;
    double rate = sde.beta_rate(times[i]);
    if (rate < 0.0) {
      if (rate < -kRateClamp) {
        throw NegativeDiffusion("diffusion rate negative at t=" +
                                std::to_string(times[i]));
      }
      rate = 0.0;
    }
    noise_sd[i] = std::sqrt(rate * h);
  }

  // Fixed-size path blocks keep the reduction order independent of threading.
  constexpr std::int64_t kBlock = 256;
  const std::int64_t blocks = (n_paths + kBlock - 1) / kBlock;
  std::vector<std::vector<double>> block_sum(
      static_cast<std::size_t>(blocks));
  std::vector<std::vector<double>> block_sum_sq(
      static_cast<std::size_t>(blocks));

  parallel_for(blocks, threads, [&](std::int64_t b) {
    auto& sum = block_sum[static_cast<std::size_t>(b)];
    auto& sum_sq = block_sum_sq[static_cast<std::size_t>(b)];
    sum.assign(nodes, 0.0);
    sum_sq.assign(nodes, 0.0);
    const std::int64_t lo = b * kBlock;
    const std::int64_t hi = std::min(n_paths, lo + kBlock);
    for (std::int64_t p = lo; p < hi; ++p) {
      Rng rng(seed, static_cast<std::uint64_t>(p));
      double w = 0.0;
      sum[0] += w;
      for (std::size_t i = 0; i + 1 < nodes; ++i) {
        w += drift_c[i] * w + noise_sd[i] * rng.normal();
        sum[i + 1] += w;
        sum_sq[i + 1] += w * w;
      }
    }
  });

  PathMoments out;
  out.times = times;
  out.mean.assign(nodes, 0.0);
  out.var.assign(nodes, 0.0);
  for (std::int64_t b = 0; b < blocks; ++b) {
    for (std::size_t i = 0; i < nodes; ++i) {
      out.mean[i] += block_sum[static_cast<std::size_t>(b)][i];
      out.var[i] += block_sum_sq[static_cast<std::size_t>(b)][i];
    }
  }
  const double n = static_cast<double>(n_paths);
  for (std::size_t i = 0; i < nodes; ++i) {
    const double mean = out.mean[i] / n;
    out.mean[i] = mean;
    out.var[i] = std::max(0.0, out.var[i] / n - mean * mean);
  }
  return out;
}

PathMoments simulate_w_paths(const FluidSolution& fluid, const Kernel& kernel,
                             double dt, std::int64_t n_paths,
                             std::uint64_t seed, int threads) {
  const double t_star = fluid.hitting_time();
  SdeCoefficients sde{
      [&fluid, &kernel](double t) {
        return kernel.drift_deriv(fluid.value(t));
      },
      [&fluid, &kernel](double t) { return kernel.noise(fluid.value(t)); }};
  return simulate_sde_paths(sde, t_star, dt, n_paths, seed, threads);
}

CltPrediction clt_prediction(const Kernel& kernel, const FluidSolution& fluid,
                             const DiffusionSolution& diffusion) {
  if (std::fabs(1.0 - kernel.drift(1.0)) < 1e-9) {
    throw DegenerateNormalization(
        "hitting-time CLT undefined: drift(1) is numerically 1");
  }
  return CltPrediction{fluid.hitting_time(), diffusion.sigma_sq};
}

}  // namespace jamsim
