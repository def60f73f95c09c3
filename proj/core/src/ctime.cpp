#include "jamsim/ctime.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "jamsim/errors.hpp"
#include "jamsim/rng.hpp"

namespace jamsim {
namespace {

constexpr double kSoftLevel = 1.0 - 1e-6;

void check_model(const CtimeModel& model) {
  if (!model.kernel) throw InvalidParameter("ctime model: missing kernel");
  if (model.rate <= 0.0) throw InvalidParameter("ctime model: rate must be > 0");
}

}  // namespace

std::int64_t CtimeTrajectory::explored_at_time(double t) const {
  // First event index with times[i] > t; everything before has happened.
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  const auto idx = static_cast<std::size_t>(it - times.begin());
  return idx == 0 ? 0 : explored[idx - 1];
}

CtimeTrajectory simulate_ctime(const CtimeModel& model, std::uint64_t seed,
                               std::uint64_t run_index) {
  check_model(model);
  const Kernel& kernel = *model.kernel;
  const std::int64_t n = kernel.items();

  CtimeTrajectory traj;
  traj.items = n;
  traj.seed = seed;
  traj.run_index = run_index;
  traj.times.reserve(static_cast<std::size_t>(n));
  traj.explored.reserve(static_cast<std::size_t>(n));

  Rng rng(seed, run_index);
  std::int64_t z = 0;
  double t = 0.0;
  while (z < n) {
    t += rng.exponential(model.rate * static_cast<double>(n - z));
    z += 1 + kernel.sample(z, rng);
    traj.times.push_back(t);
    traj.explored.push_back(z);
  }
  return traj;
}

FluidSolution solve_ctime_fluid(const CtimeModel& model, double dt,
                                double t_max) {
  check_model(model);
  const Kernel& kernel = *model.kernel;
  const double rate = model.rate;
  return solve_ode_grid(
      [&kernel, rate](double z) {
        return rate * (1.0 - z) * (1.0 + kernel.drift(z));
      },
      dt, t_max, std::nullopt, kSoftLevel);
}

namespace {

SdeCoefficients ctime_sde(const CtimeModel& model, const FluidSolution& fluid) {
  const Kernel& kernel = *model.kernel;
  const double rate = model.rate;
  return SdeCoefficients{
      [&kernel, &fluid, rate](double t) {
        const double z = fluid.value(t);
        return rate *
               (-(1.0 + kernel.drift(z)) + kernel.drift_deriv(z) * (1.0 - z));
      },
      [&kernel, &fluid, rate](double t) {
        const double z = fluid.value(t);
        const double one_plus = 1.0 + kernel.drift(z);
        return rate * (1.0 - z) * (kernel.noise(z) + one_plus * one_plus);
      }};
}

}  // namespace

DiffusionSolution solve_ctime_variance(const CtimeModel& model,
                                       const FluidSolution& fluid) {
  check_model(model);
  DiffusionSolution sol =
      solve_moment_ode(ctime_sde(model, fluid), fluid.t_end(),
                       fluid.dt());
  sol.t_star = std::numeric_limits<double>::quiet_NaN();
  sol.sigma_sq = std::numeric_limits<double>::quiet_NaN();
  return sol;
}

PathMoments simulate_ctime_w_paths(const CtimeModel& model,
                                   const FluidSolution& fluid, double t_end,
                                   double dt, std::int64_t n_paths,
                                   std::uint64_t seed, int threads) {
  check_model(model);
  return simulate_sde_paths(ctime_sde(model, fluid), t_end, dt, n_paths, seed,
                            threads);
}

double ctime_g(const CtimeModel& model, double z) {
  check_model(model);
  return (1.0 - z) * model.kernel->drift(z);
}

double ctime_g_approx_error(const CtimeModel& model) {
  check_model(model);
  const Kernel& kernel = *model.kernel;
  const auto n = kernel.items();
  double worst = 0.0;
  for (std::int64_t x = 0; x < n; ++x) {
    const double frac = static_cast<double>(x) / static_cast<double>(n);
    const double g_n = (1.0 - frac) * kernel.neighbor_mean(x);
    worst = std::max(worst, std::fabs(g_n - ctime_g(model, frac)));
  }
  return worst;
}

double ctime_noise_bound(const CtimeModel& model) {
  check_model(model);
  const Kernel& kernel = *model.kernel;
  const double n = static_cast<double>(kernel.items());
  const double one_plus = 1.0 + kernel.max_neighbor_mean();
  return kernel.max_neighbor_var() / n + one_plus * one_plus / n;
}

double ctime_sup_deviation(const CtimeTrajectory& traj,
                           const FluidSolution& fluid, double horizon) {
  const double n = static_cast<double>(traj.items);
  double sup = std::fabs(fluid.value(0.0));  // path starts at 0
  double prev_t = 0.0;
  double prev_v = 0.0;
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const double t = std::min(traj.times[i], horizon);
    // Path value prev_v holds on [prev_t, t); fluid is monotone.
    sup = std::max(sup, std::fabs(prev_v - fluid.value(prev_t)));
    sup = std::max(sup, std::fabs(prev_v - fluid.value(t)));
    if (traj.times[i] >= horizon) break;
    prev_t = traj.times[i];
    prev_v = static_cast<double>(traj.explored[i]) / n;
  }
  // Constant tail after the last event inside the horizon.
  sup = std::max(sup, std::fabs(prev_v - fluid.value(prev_t)));
  sup = std::max(sup, std::fabs(prev_v - fluid.value(horizon)));
  return sup;
}

}  // namespace jamsim
