#include "jamsim/bounds.hpp"

#include <cmath>

#include "jamsim/errors.hpp"

namespace jamsim {

ErrorBudget make_error_budget(const Kernel& kernel, double horizon) {
  if (horizon <= 0.0) throw InvalidParameter("error budget: T must be > 0");
  ErrorBudget b;
  b.items = kernel.items();
  b.horizon = horizon;
  b.approx_error = kernel.approx_error();
  b.lipschitz = kernel.lipschitz();
  b.max_var = kernel.max_neighbor_var();
  b.max_mean = kernel.max_neighbor_mean();
  b.martingale_var_rate = b.max_var / static_cast<double>(b.items);
  b.omega = (b.approx_error * horizon +
             2.0 * std::sqrt(2.0 * b.martingale_var_rate * horizon)) *
            std::exp(b.lipschitz * horizon);
  return b;
}

double omega(const Kernel& kernel, double horizon) {
  return make_error_budget(kernel, horizon).omega;
}

double lp_sup_bound(const Kernel& kernel, double horizon, double p,
                    std::optional<double> martingale_norm) {
  if (horizon <= 0.0) throw InvalidParameter("lp_sup_bound: T must be > 0");
  if (p <= 1.0) throw InvalidParameter("lp_sup_bound: requires p > 1");
  double norm;
  if (martingale_norm) {
    norm = *martingale_norm;
  } else if (p == 2.0) {
    norm = std::sqrt(kernel.max_neighbor_var() /
                     static_cast<double>(kernel.items()) * horizon);
  } else {
    throw InvalidParameter(
        "lp_sup_bound: supply a martingale norm estimate for p != 2");
  }
  const double kappa = p / (p - 1.0);
  return std::exp(kernel.lipschitz() * horizon) *
         (kernel.approx_error() * horizon + kappa * norm);
}

double poisson_n_factor(double h) {
  if (h <= 0.0) throw InvalidParameter("poisson_n_factor: h must be > 0");
  return std::sqrt(-std::expm1(-h) / h);
}

}  // namespace jamsim
