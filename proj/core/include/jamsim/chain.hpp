#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "jamsim/kernel.hpp"

namespace jamsim {

/// One realization of the exploration chain: explored counts start at 0,
/// rise by 1 + (blocked neighbors) each step, and absorb at N after
/// hitting_step steps. The martingale component is the path minus its
/// compensator, tracked with compensated summation.
struct Trajectory {
  std::int64_t items = 0;
  std::vector<std::int64_t> explored;  // index l = after l steps; front() = 0
  std::vector<double> martingale;      // same indexing; front() = 0
  std::int64_t hitting_step = 0;
  std::uint64_t seed = 0;
  std::uint64_t run_index = 0;

  /// Stopped values: reads at l > hitting_step return the absorbed state.
  std::int64_t explored_at(std::int64_t l) const {
    return l >= hitting_step ? items : explored[static_cast<std::size_t>(l)];
  }
  double martingale_at(std::int64_t l) const {
    return martingale[static_cast<std::size_t>(
        l >= hitting_step ? hitting_step : l)];
  }
};

/// Runs the chain to absorption. Deterministic given (seed, run_index).
Trajectory simulate(const Kernel& kernel, std::uint64_t seed,
                    std::uint64_t run_index);

/// Buffer-reusing variant for batch drivers.
void simulate_into(const Kernel& kernel, std::uint64_t seed,
                   std::uint64_t run_index, Trajectory& out);

/// Right-continuous step path t -> explored([tN]) / N on [0, 1]; constant 1
/// from the scaled hitting time onward.
class ScaledPath {
 public:
  explicit ScaledPath(const Trajectory& traj) : traj_(&traj) {}

  double value(double t) const;

  /// Values at t_j = j / points, j = 0..points.
  std::vector<double> on_grid(std::int64_t points) const;

 private:
  const Trajectory* traj_;
};

/// Batch check of the martingale decomposition: per requested step l, the
/// empirical mean of M_l (should be ~0), its spread, and the ratio of
/// mean(M_l^2) to the mean accumulated conditional variance (should be ~1).
struct MartingaleDiagnostics {
  std::vector<std::int64_t> steps;
  std::vector<double> mean_m;
  std::vector<double> sd_m;
  std::vector<double> mean_m_sq;
  std::vector<double> mean_bracket;  // mean of sum_{i < l ^ T} neighbor_var(Z_i)
  std::vector<double> ratio;         // mean_m_sq / mean_bracket
  std::int64_t runs = 0;
};

MartingaleDiagnostics martingale_diagnostics(std::span<const Trajectory> batch,
                                             const Kernel& kernel,
                                             std::span<const std::int64_t> steps);

/// Streaming variant: simulates `runs` trajectories without retaining them.
MartingaleDiagnostics run_martingale_experiment(
    const Kernel& kernel, std::int64_t runs, std::uint64_t seed,
    std::span<const std::int64_t> steps, int threads = 1);

}  // namespace jamsim
