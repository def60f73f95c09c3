#include "jamsim/chain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "jamsim/errors.hpp"
#include "jamsim/parallel.hpp"

namespace jamsim {
namespace {

// Neumaier compensated accumulator; the martingale identity is tested to
// 1e-9 even for long paths.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double v) {
    const double t = sum + v;
    if (std::fabs(sum) >= std::fabs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + comp; }
};

}  // namespace

void simulate_into(const Kernel& kernel, std::uint64_t seed,
                   std::uint64_t run_index, Trajectory& out) {
  const std::int64_t n = kernel.items();
  out.items = n;
  out.seed = seed;
  out.run_index = run_index;
  out.explored.clear();
  out.martingale.clear();
  out.explored.reserve(static_cast<std::size_t>(n) + 1);
  out.martingale.reserve(static_cast<std::size_t>(n) + 1);

  Rng rng(seed, run_index);
  std::int64_t z = 0;
  CompensatedSum compensator;  // sum of (1 + neighbor_mean(Z_i)) over steps
  out.explored.push_back(0);
  out.martingale.push_back(0.0);
  while (z < n) {
    compensator.add(1.0 + kernel.neighbor_mean(z));
    z += 1 + kernel.sample(z, rng);
    out.explored.push_back(z);
    out.martingale.push_back(static_cast<double>(z) - compensator.value());
  }
  out.hitting_step = static_cast<std::int64_t>(out.explored.size()) - 1;
}

Trajectory simulate(const Kernel& kernel, std::uint64_t seed,
                    std::uint64_t run_index) {
  Trajectory traj;
  simulate_into(kernel, seed, run_index, traj);
  return traj;
}

double ScaledPath::value(double t) const {
  if (t <= 0.0) return 0.0;
  const double n = static_cast<double>(traj_->items);
  auto idx = static_cast<std::int64_t>(std::floor(t * n));
  if (idx >= traj_->hitting_step) return 1.0;
  return static_cast<double>(traj_->explored[static_cast<std::size_t>(idx)]) /
         n;
}

std::vector<double> ScaledPath::on_grid(std::int64_t points) const {
  std::vector<double> grid(static_cast<std::size_t>(points) + 1);
  for (std::int64_t j = 0; j <= points; ++j) {
    grid[static_cast<std::size_t>(j)] =
        value(static_cast<double>(j) / static_cast<double>(points));
  }
  return grid;
}

namespace {

// Per-trajectory contribution to the diagnostics at each requested step.
struct MartingaleSample {
  std::vector<double> m;
  std::vector<double> bracket;
};

MartingaleSample extract_martingale_sample(
    const Trajectory& traj, const Kernel& kernel,
    std::span<const std::int64_t> steps) {
  MartingaleSample s;
  s.m.reserve(steps.size());
  s.bracket.reserve(steps.size());
  for (const std::int64_t l : steps) {
    const std::int64_t stop = std::min(l, traj.hitting_step);
    s.m.push_back(traj.martingale_at(l));
    CompensatedSum acc;
    for (std::int64_t i = 0; i < stop; ++i) {
      acc.add(kernel.neighbor_var(
          traj.explored[static_cast<std::size_t>(i)]));
    }
    s.bracket.push_back(acc.value());
  }
  return s;
}

MartingaleDiagnostics reduce_martingale_samples(
    const std::vector<MartingaleSample>& samples,
    std::span<const std::int64_t> steps) {
  const auto runs = static_cast<std::int64_t>(samples.size());
  MartingaleDiagnostics diag;
  diag.runs = runs;
  diag.steps.assign(steps.begin(), steps.end());
  const std::size_t g = steps.size();
  diag.mean_m.assign(g, 0.0);
  diag.sd_m.assign(g, 0.0);
  diag.mean_m_sq.assign(g, 0.0);
  diag.mean_bracket.assign(g, 0.0);
  diag.ratio.assign(g, 0.0);
  for (std::size_t j = 0; j < g; ++j) {
    CompensatedSum sm, sm2, sb;
    for (const auto& s : samples) {
      sm.add(s.m[j]);
      sm2.add(s.m[j] * s.m[j]);
      sb.add(s.bracket[j]);
    }
    const double r = static_cast<double>(runs);
    diag.mean_m[j] = sm.value() / r;
    diag.mean_m_sq[j] = sm2.value() / r;
    diag.mean_bracket[j] = sb.value() / r;
    const double var =
        std::max(0.0, diag.mean_m_sq[j] - diag.mean_m[j] * diag.mean_m[j]);
    diag.sd_m[j] = std::sqrt(var);
    diag.ratio[j] = diag.mean_bracket[j] > 0.0
                        ? diag.mean_m_sq[j] / diag.mean_bracket[j]
                        : std::numeric_limits<double>::quiet_NaN();
  }
  return diag;
}

}  // namespace

MartingaleDiagnostics martingale_diagnostics(
    std::span<const Trajectory> batch, const Kernel& kernel,
    std::span<const std::int64_t> steps) {
  if (batch.size() < 2) {
    throw InsufficientSample("martingale_diagnostics: need at least 2 runs");
  }
  std::vector<MartingaleSample> samples;
  samples.reserve(batch.size());
  for (const auto& traj : batch) {
    samples.push_back(extract_martingale_sample(traj, kernel, steps));
  }
  return reduce_martingale_samples(samples, steps);
}

MartingaleDiagnostics run_martingale_experiment(
    const Kernel& kernel, std::int64_t runs, std::uint64_t seed,
    std::span<const std::int64_t> steps, int threads) {
  if (runs < 2) {
    throw InsufficientSample("run_martingale_experiment: need >= 2 runs");
  }
  std::vector<MartingaleSample> samples(static_cast<std::size_t>(runs));
  parallel_for(runs, threads, [&](std::int64_t i) {
    thread_local Trajectory scratch;
    simulate_into(kernel, seed, static_cast<std::uint64_t>(i), scratch);
    samples[static_cast<std::size_t>(i)] =
        extract_martingale_sample(scratch, kernel, steps);
  });
  return reduce_martingale_samples(samples, steps);
}

}  // namespace jamsim
