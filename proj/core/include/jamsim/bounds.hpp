#pragma once

#include <cstdint>
#include <optional>

#include "jamsim/kernel.hpp"

namespace jamsim {

/// Explicit non-asymptotic budget for the sup-path deviation of the scaled
/// chain from its fluid limit over [0, T]:
///   omega = (approx_error * T + 2 sqrt(2 * C_N * T)) * exp(lipschitz * T),
/// with C_N = max_neighbor_var / N.
struct ErrorBudget {
  std::int64_t items = 0;
  double horizon = 0.0;          // T
  double approx_error = 0.0;     // kernel approx_error
  double lipschitz = 0.0;
  double max_var = 0.0;
  double max_mean = 0.0;
  double martingale_var_rate = 0.0;  // C_N
  double omega = 0.0;
};

ErrorBudget make_error_budget(const Kernel& kernel, double horizon);
double omega(const Kernel& kernel, double horizon);

/// L^p envelope exp(lipschitz*T) * (approx_error*T + p/(p-1) * |M_T|_p).
/// For p = 2 the martingale norm defaults to sqrt(C_N * T); for other p the
/// caller must supply an estimate. Requires p > 1.
double lp_sup_bound(const Kernel& kernel, double horizon, double p,
                    std::optional<double> martingale_norm = std::nullopt);

/// sqrt((1 - e^{-h}) / h): the N-averaging factor when the number of items
/// is Poisson with parameter h (reported without the unknown prefactor).
double poisson_n_factor(double h);

}  // namespace jamsim
