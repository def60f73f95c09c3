#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "jamsim/diffusion.hpp"
#include "jamsim/fluid.hpp"
#include "jamsim/kernel.hpp"

namespace jamsim {

/// Continuous-time exploration: every unexplored item carries an independent
/// exponential(rate) activation clock, so jumps occur at rate
/// rate * (N - explored), and each jump explores 1 + (blocked neighbors)
/// items. The scaled fluid limit is dz/dt = rate (1-z)(1 + drift(z)) with
/// absorbing fixed point 1.
struct CtimeModel {
  std::shared_ptr<const Kernel> kernel;
  double rate = 1.0;  // lambda
};

/// Event-time trajectory: explored[i] items after the event at times[i].
struct CtimeTrajectory {
  std::int64_t items = 0;
  std::vector<double> times;
  std::vector<std::int64_t> explored;
  std::uint64_t seed = 0;
  std::uint64_t run_index = 0;

  double absorb_time() const { return times.back(); }
  std::int64_t jump_count() const {
    return static_cast<std::int64_t>(times.size());
  }
  /// Step-function value at time t.
  std::int64_t explored_at_time(double t) const;
};

CtimeTrajectory simulate_ctime(const CtimeModel& model, std::uint64_t seed,
                               std::uint64_t run_index = 0);

/// RK4 solution of dz/dt = rate (1-z)(1 + drift(z)) over [0, t_max]. The
/// level 1 is only reached asymptotically; the solution records a soft
/// hitting time at level 1 - 1e-6 (HitKind::soft).
FluidSolution solve_ctime_fluid(const CtimeModel& model, double dt,
                                double t_max);

/// Second-moment machinery of the continuous-time fluctuation SDE:
///   a(t)    = rate [ -(1 + drift(z)) + drift'(z)(1 - z) ]
///   beta'(t)= rate (1 - z)(noise(z) + (1 + drift(z))^2 )
/// solved over the fluid grid. No hitting-time variance is defined here
/// (sigma_sq is left NaN).
DiffusionSolution solve_ctime_variance(const CtimeModel& model,
                                       const FluidSolution& fluid);

/// Euler-Maruyama paths of the continuous-time fluctuation SDE over
/// [0, t_end].
PathMoments simulate_ctime_w_paths(const CtimeModel& model,
                                   const FluidSolution& fluid, double t_end,
                                   double dt, std::int64_t n_paths,
                                   std::uint64_t seed, int threads = 1);

/// Mean-neighbor diagnostic g(z) = (1 - z) drift(z) and its uniform
/// approximation error sup_x |(1 - x/N) neighbor_mean(x) - g(x/N)|.
double ctime_g(const CtimeModel& model, double z);
double ctime_g_approx_error(const CtimeModel& model);

/// Continuous-time martingale budget rate
/// C_N = max_var/N + (1 + max_mean)^2 / N.
double ctime_noise_bound(const CtimeModel& model);

/// Exact sup over [0, horizon] of |explored(t)/N - z(t)| (step function vs
/// monotone fluid: attained at event times and the horizon).
double ctime_sup_deviation(const CtimeTrajectory& traj,
                           const FluidSolution& fluid, double horizon);

}  // namespace jamsim
