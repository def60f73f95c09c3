#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "jamsim/fluid.hpp"
#include "jamsim/kernel.hpp"

namespace jamsim {

/// Coefficients of a linear scalar SDE dW = a(t) W dt + sqrt(beta_rate(t)) dB
/// with W(0) = 0; both callables are functions of time.
struct SdeCoefficients {
  std::function<double(double)> drift_coef;
  std::function<double(double)> beta_rate;
};

/// Accumulated diffusion quantities on a uniform grid: beta(t) (time-integrated
/// noise), the second moment m(t) = E[W_t^2], and for the discrete chain the
/// hitting-time limit variance sigma_sq = m(T*) / (1 - drift(1))^2.
struct DiffusionSolution {
  std::vector<double> times;
  std::vector<double> beta;
  std::vector<double> var;        // m(t)
  std::vector<double> beta_rate;  // d beta / dt at nodes
  std::vector<double> var_rate;   // d m / dt at nodes
  double t_star = 0.0;
  double sigma_sq = 0.0;

  double beta_at(double t) const;
  double var_at(double t) const;
};

/// Second-moment ODE dm/dt = 2 a(t) m + beta_rate(t), m(0) = 0, via RK4 on a
/// uniform grid over [0, t_end].
DiffusionSolution solve_moment_ode(const SdeCoefficients& sde, double t_end,
                                   double dt);

/// Diffusion quantities of the discrete chain around its fluid limit:
/// a(t) = drift'(z(t)), beta_rate(t) = noise(z(t)), solved over [0, T*] on
/// the fluid grid spacing, including the CLT variance sigma_sq.
/// Throws DegenerateNormalization when drift(1) is numerically 1.
DiffusionSolution solve_variance_ode(const FluidSolution& fluid,
                                     const Kernel& kernel);

/// Empirical mean/variance of Euler-Maruyama sample paths on a uniform grid
/// (final partial step lands exactly on t_end). Paths are independent streams
/// of (seed, path index); per-node moments are reduced in fixed blocks so the
/// result does not depend on thread count.
struct PathMoments {
  std::vector<double> times;
  std::vector<double> mean;
  std::vector<double> var;
};
PathMoments simulate_sde_paths(const SdeCoefficients& sde, double t_end,
                               double dt, std::int64_t n_paths,
                               std::uint64_t seed, int threads = 1);

/// Chain-specific wrapper: simulates the limit fluctuation SDE over [0, T*].
/// Tiny negative diffusion rates (|rate| <= 1e-9, solver noise near T*) are
/// clamped to zero; genuinely negative rates throw NegativeDiffusion.
PathMoments simulate_w_paths(const FluidSolution& fluid, const Kernel& kernel,
                             double dt, std::int64_t n_paths,
                             std::uint64_t seed, int threads = 1);

/// Predicted limit law of sqrt(N) (T*_N/N - T*): centered normal with the
/// given variance.
struct CltPrediction {
  double t_star = 0.0;
  double sigma_sq = 0.0;
};
CltPrediction clt_prediction(const Kernel& kernel, const FluidSolution& fluid,
                             const DiffusionSolution& diffusion);

}  // namespace jamsim
